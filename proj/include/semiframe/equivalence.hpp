#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semiframe/fusion.hpp"

namespace semiframe {

// Points x = 1..Q, each carrying a d x n block Psi(x) and a measure mu(x) > 0.
// Blocks need full column rank; orthonormality is asserted by `orthonormal`
// and by the operations that depend on Lambda(x) being a projection.
class RankNSystem {
 public:
  RankNSystem(Index dim, std::vector<CMatrix> blocks, std::vector<double> measure);

  // Validates ||Psi(x)^* Psi(x) - I|| <= 1e-9 at every point (NotOrthonormal).
  static RankNSystem orthonormal(Index dim, std::vector<CMatrix> blocks, std::vector<double> measure);

  Index dim() const { return dim_; }
  Index rank() const { return rank_; }
  Index points() const { return static_cast<Index>(blocks_.size()); }
  const std::vector<CMatrix>& blocks() const { return blocks_; }
  const std::vector<double>& measure() const { return measure_; }

  CMatrix lambda(Index x) const { return blocks_[x] * blocks_[x].adjoint(); }
  bool is_orthonormal(double tol = 1e-9) const;

  // All columns, point-major, with weights sqrt(mu(x)).
  VectorSystem as_vector_system() const;
  // S = sum_x mu(x) Lambda(x)
  SpectralFrameData frame_operator() const;
  // Psi_all^* S^+ Psi_all, an (nQ) x (nQ) matrix of n x n blocks K(x, y).
  CMatrix kernel_matrix() const;

 private:
  Index dim_;
  Index rank_;
  std::vector<CMatrix> blocks_;
  std::vector<double> measure_;
};

// Throws NotTotal when S is not invertible.
CMatrix frame_kernel(const RankNSystem& rs);
// Block K(x, y) of a kernel matrix.
CMatrix kernel_block(const CMatrix& kernel, Index rank, Index x, Index y);

inline constexpr double kEquivalenceTolerance = 1e-8;
inline constexpr double kUnitaryTolerance = 1e-9;
inline constexpr double kConstancyThreshold = 1e-3;

struct EquivalenceReport {
  std::string relation;  // similar | gauge | kernel | bundle
  bool pass = false;
  double max_defect = 0.0;
  std::optional<std::string> downgrade;  // "kernel" when a bundle pair has constant T
  bool unitary = false;
  double fit_residual = 0.0;
  Index excluded_dim = 0;  // kernel dimension of S, handled by the pseudo-inverse
};

EquivalenceReport check_similar(const RankNSystem& a, const RankNSystem& b, const CMatrix& t);
EquivalenceReport check_gauge(const RankNSystem& a, const RankNSystem& b, const std::vector<CMatrix>& u);
EquivalenceReport check_kernel_equivalent(const RankNSystem& a, const RankNSystem& b, const CMatrix& t,
                                          const std::vector<CMatrix>& u);
EquivalenceReport check_bundle(const RankNSystem& a, const RankNSystem& b, const std::vector<CMatrix>& t);

// Least-squares T minimising sum_x |T(x) Lambda(x) - T Lambda(x)|^2 and the
// relative residual of that fit.
struct ConstancyFit {
  CMatrix t;
  double residual = 0.0;
};
ConstancyFit constancy_fit(const RankNSystem& a, const std::vector<CMatrix>& t);

// Fusion system of a rank-n system whose Lambda is constant on each cell;
// v_j^2 is the total measure of cell j. Throws InvalidPartition otherwise.
FusionSystem to_fusion(const RankNSystem& rs, const std::vector<std::vector<Index>>& cells);

}  // namespace semiframe
