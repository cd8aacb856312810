#pragma once

#include <string_view>

#include "semiframe/atoms.hpp"

namespace semiframe {

// Eigendecomposition of a Hermitian positive-semidefinite operator with the
// pseudo-inverse convention used throughout: eigenvalues at or below
// rank_threshold = 1e-12 * lambda_1 are exact zeros and every inverse power
// acts on the range only.
struct SpectralFrameData {
  CMatrix op;
  RVector eigenvalues;  // nonincreasing, clamped at 0
  CMatrix eigenvectors;  // column i belongs to eigenvalues(i)
  Index rank = 0;
  double rank_threshold = 0.0;

  static constexpr double kRelativeRankCutoff = 1e-12;
  // Largest factor an inverse power may apply before it is a DomainViolation.
  static constexpr double kOverflowGuard = 1e150;

  Index dim() const { return op.rows(); }
  double top() const { return eigenvalues.size() > 0 ? eigenvalues(0) : 0.0; }

  // Spectral power A^p restricted to the range. Negative powers throw
  // DomainViolation if some factor lambda^p exceeds kOverflowGuard.
  CMatrix power(double p) const;
  CVector apply_power(const CVector& v, double p) const;

  // Orthogonal projection onto the range.
  CMatrix range_projector() const;

  // Fraction of v (by norm) lying in the numerical kernel.
  double kernel_fraction(const CVector& v) const;
};

SpectralFrameData spectral_decomposition(const CMatrix& hermitian);

enum class SnapshotClass { RieszBasis, Frame, BesselNotTotal };
std::string_view to_string(SnapshotClass c);

struct BoundsReport {
  double lower = 0.0;  // smallest nonzero eigenvalue
  double upper = 0.0;  // largest eigenvalue
  bool total = false;
  SnapshotClass snapshot_class = SnapshotClass::BesselNotTotal;
  Index rank = 0;
  RVector eigenvalues;
};

// Bounds of a spectrum for a family of `count` atoms in dimension spec.dim().
BoundsReport bounds_from_spectrum(const SpectralFrameData& spec, Index count);

// c_k = v_k <psi_k, f>
CVector analysis(const VectorSystem& sys, const CVector& f);
// sum_k v_k c_k psi_k
CVector synthesis(const VectorSystem& sys, const CVector& c);

SpectralFrameData frame_operator(const VectorSystem& sys);
CMatrix gram_operator(const VectorSystem& sys);
BoundsReport optimal_bounds(const VectorSystem& sys);

// Atoms S^{-1} psi_k with the weights copied. Throws NotTotal.
VectorSystem canonical_dual(const VectorSystem& sys);
VectorSystem canonical_dual(const VectorSystem& sys, const SpectralFrameData& frame);

// G_{k,l} = v_k v_l <psi_k, S^{-1} psi_l>. Throws NotTotal.
CMatrix reproducing_kernel(const VectorSystem& sys);
// P = C S^{-1} D. Throws NotTotal.
CMatrix range_projection(const VectorSystem& sys);

// <c, G^+ e>; both arguments must lie in range(C) (OffRange otherwise).
Complex psi_inner(const VectorSystem& sys, const CVector& c, const CVector& e);

// Relative distance of c from range(C): |c - P c| / |c|.
double range_residual(const SpectralFrameData& gram, const CVector& c);

void require_total(const SpectralFrameData& frame, std::string_view what);

}  // namespace semiframe
