#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "semiframe/types.hpp"

namespace semiframe {

// A finite indexed family of atoms in C^d. Atoms are the columns of
// `atoms()`; the optional real weights v_k multiply each atom wherever the
// family is analysed or synthesised. Immutable after construction.
class VectorSystem {
 public:
  VectorSystem(CMatrix atoms, RVector weights = RVector(), std::string label = {});

  Index dim() const { return atoms_.rows(); }
  Index size() const { return atoms_.cols(); }

  const CMatrix& atoms() const { return atoms_; }
  const RVector& weights() const { return weights_; }
  const std::string& label() const { return label_; }

  CVector atom(Index k) const { return atoms_.col(k); }

  // Columns v_k * psi_k, i.e. the matrix of the synthesis operator D.
  CMatrix synthesis_matrix() const;

  bool unit_weights() const;

 private:
  CMatrix atoms_;
  RVector weights_;
  std::string label_;
};

// Closed-form weight rule m_k, k = 1, 2, ...
//   power:       m_k = scale * k^p        (tags "1/k", "k", "k^p", "1/k^p")
//   exponential: m_k = scale * exp(-a k)  (tags "exp(-k)", "exp(-a*k)")
//   constant:    m_k = scale              (tag "1", or any number)
struct WeightRule {
  enum class Kind { Power, Exponential, Constant };

  Kind kind = Kind::Constant;
  double param = 0.0;
  double scale = 1.0;

  double operator()(Index k) const;
  std::string tag() const;

  static WeightRule parse(std::string_view tag);
  static WeightRule power(double p, double scale = 1.0) { return {Kind::Power, p, scale}; }
  static WeightRule exponential(double a, double scale = 1.0) {
    return {Kind::Exponential, a, scale};
  }
  static WeightRule constant(double c) { return {Kind::Constant, 0.0, c}; }
};

enum class Generator { WeightedDiag, OperatorImage, Gabor, Custom };

std::string_view to_string(Generator g);
Generator parse_generator(std::string_view name);

struct DiagParams {
  WeightRule rule;
};

// V_N = blockdiag(base, I) for N >= base.rows(), else the leading N x N block.
struct OperatorImageParams {
  CMatrix base;
  std::optional<std::uint64_t> seed;  // set when `base` was drawn from a seed
};

// Sizes are the ambient dimension d. The lattice is either fixed (a, b) or
// critical, a = b = ceil(sqrt(d)).
struct GaborParams {
  enum class Window { Gaussian, Delta, Constant };
  Window window = Window::Gaussian;
  bool critical = true;
  Index a = 1;
  Index b = 1;
};

// Explicit enumeration: atom k is weights[k] * e_{index[k]} (index 1-based).
// The ambient dimension at size N is the largest index among the first N.
struct IndexedParams {
  std::vector<Index> index;
  std::vector<double> weights;
};

// Arbitrary in-process generator; not serialisable.
struct CallableParams {
  std::function<VectorSystem(Index size)> realize;
  std::string name;
};

using FamilyParams =
    std::variant<DiagParams, OperatorImageParams, GaborParams, IndexedParams, CallableParams>;

class TruncationFamily {
 public:
  TruncationFamily(FamilyParams params, std::vector<Index> sizes);

  Generator generator() const;
  const FamilyParams& params() const { return params_; }
  const std::vector<Index>& sizes() const { return sizes_; }
  Index count() const { return static_cast<Index>(sizes_.size()); }

  // Same family with different sizes.
  TruncationFamily with_sizes(std::vector<Index> sizes) const;

 private:
  FamilyParams params_;
  std::vector<Index> sizes_;
};

VectorSystem make_weighted_diag(const std::vector<double>& weights, Index dim);
VectorSystem make_operator_image(const CMatrix& v, Index count);
VectorSystem make_finite_gabor(const CVector& window, Index a, Index b);

// Realises the family at size sizes[t - 1] (t is 1-based).
VectorSystem realize_truncation(const TruncationFamily& family, Index t);
// Realises at an arbitrary size using the generator rule.
VectorSystem realize_at(const TruncationFamily& family, Index size);

// Squared norms |m_k|^2 of the (mutually orthogonal) atoms of a weighted_diag
// family at size N, without materialising the N x N system.
RVector diagonal_gram(const TruncationFamily& family, Index size);

CVector gaussian_window(Index d);

}  // namespace semiframe
