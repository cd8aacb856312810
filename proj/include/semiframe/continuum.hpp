#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "semiframe/calculus.hpp"

namespace semiframe {

// Sample points r_j > 0 of L^2(R+, r^{n-1} dr) with weights u_j ~ r_j^{n-1} dr_j.
struct RadialGrid {
  int n = 1;
  RVector r;
  RVector u;
  double dr = 0.0;  // cell width when uniform, 0 otherwise

  Index size() const { return r.size(); }
  bool uniform() const { return dr > 0.0; }
};

// Midpoint grid r_j = (j + 1/2) R / P.
RadialGrid make_uniform_grid(int n, Index points, double cutoff);

// Continuous family psi_x sampled at nodes x_i (weights w_i) on a radial grid.
// Column i of `atoms` is psi_{x_i}(r_j).
struct SampledContinuousFrame {
  RadialGrid grid;
  RVector x;
  RVector w;
  CMatrix atoms;
  std::optional<RVector> profile;

  SampledContinuousFrame(RadialGrid grid, RVector x, RVector w, CMatrix atoms,
                         std::optional<RVector> profile = std::nullopt);

  Index nodes() const { return x.size(); }
  Index points() const { return grid.size(); }

  // The same family in coordinates u^{1/2} f, where the grid inner product is
  // Euclidean: atoms u^{1/2} psi_i with weights sqrt(w_i).
  VectorSystem orthonormal_system() const;
};

// Throws InadmissibleProfile unless 0 <= s <= 1 + 1e-12, max s is within one
// grid step of 1 and s has no two consecutive zeros.
void check_admissible(const RVector& s);

// psi_x(r) = e^{ixr} (s(r) / (pi r^{n-1}))^{1/2} at the given nodes.
CMatrix affine_atoms(const RadialGrid& grid, const RVector& s, const RVector& x);

// Affine family with Q uniform nodes, spacing 2 pi / (Q dr) and weights
// half the spacing. S is exactly multiplication by s once Q >= P.
SampledContinuousFrame affine_system(const RadialGrid& grid, const RVector& s, Index nodes);

// Frame operator in orthonormal grid coordinates (Hermitian there).
SpectralFrameData quadrature_frame_operator(const SampledContinuousFrame& scf);

// Frame operator acting on grid values: (Sf)(r_j) = sum_i w_i psi_i(r_j) <psi_i, f>_u.
CMatrix grid_operator(const SampledContinuousFrame& scf);

// Operator norm of S - M_s in the grid inner product. Throws MissingProfile.
double multiplication_defect(const SampledContinuousFrame& scf);

// multiplication_defect of affine_system(grid, s, Q) for each Q.
std::vector<double> refinement_sweep(const RadialGrid& grid, const RVector& s, const std::vector<Index>& nodes);

struct ScanRow {
  int m = 0;
  std::vector<double> cutoffs;  // effective R of each truncation
  std::vector<double> values;   // sum_j u_j |psi|^2 s^{-m} up to the cutoff
  std::vector<double> factors;  // values[k+1] / values[k]
  bool divergent = false;
};

inline constexpr double kDivergenceFactor = 2.0;

// Truncates the grid at R / 3^{refinements-1}, ..., R and tracks the H_m norm
// of the first atom. Nodes where s vanishes are skipped.
std::vector<ScanRow> nonregularity_scan(const SampledContinuousFrame& scf, const std::vector<int>& m_list,
                                        int refinements);

struct ContReconstruction {
  CVector f_hat;
  double residual = 0.0;
};

// f_hat = sum_i w_i <psi_i, f> S^{-1} psi_i. Throws DomainViolation when f has
// a component on the numerical kernel of S.
ContReconstruction cont_reconstruct(const SampledContinuousFrame& scf, const CVector& f);

// |<DF, f>_u - <F, Cf>_w| for random unit F and f.
double adjointness_defect(const SampledContinuousFrame& scf, Index probes = 8, std::uint64_t seed = 19);

// Smallest nonzero eigenvalue of the quadrature frame operator of S^{-1} psi_x.
double dual_lower_bound(const SampledContinuousFrame& scf);

// Affine systems on a fixed cell width with P = Q = size, as a truncation
// family in orthonormal grid coordinates; s(r) = exp(-alpha r).
TruncationFamily affine_truncation_family(int n, double dr, double alpha, std::vector<Index> sizes);

}  // namespace semiframe
