#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace semiframe {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

enum class ErrorKind {
  InvalidWeight,
  DimensionMismatch,
  LatticeMismatch,
  InvalidWindow,
  IndexError,
  InvalidFamily,
  InsufficientData,
  InvalidPartition,
  InadmissibleProfile,
  MissingProfile,
  InvalidGrid,
  NotOrthonormal,
  ParseError,
  // numerical-domain failures
  NotTotal,
  OffRange,
  DomainViolation,
  NotDualPair,
  NotInvertible,
  NotUnitary,
};

std::string_view to_string(ErrorKind kind);

// Validation errors come from malformed inputs; numerical errors from
// well-formed inputs that fall outside an operation's domain.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Conjugate-linear in the first argument.
inline Complex inner(const CVector& a, const CVector& b) { return a.dot(b); }

}  // namespace semiframe
