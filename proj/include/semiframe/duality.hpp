#pragma once

#include <cstdint>
#include <string_view>

#include "semiframe/classify.hpp"

namespace semiframe {

struct DualPairReport {
  double max_residual = 0.0;        // max_f |sum <phi_k,f> psi_k - f| / |f|
  double symmetric_residual = 0.0;  // roles of psi and phi swapped
  double matrix_residual = 0.0;     // max(|D_psi C_phi - I|_2, |D_phi C_psi - I|_2)
  bool is_dual = false;
};

inline constexpr double kDualTolerance = 1e-8;

// Probes: `probes` random unit vectors plus every canonical basis vector.
// The matrix identity decides `is_dual`; the probes are diagnostics.
DualPairReport is_dual_pair(const VectorSystem& psi, const VectorSystem& phi, Index probes = 16,
                            std::uint64_t seed = 11);

// Upper-type dual S_phi^{-1} phi_k of a (lower-type) total system.
VectorSystem dual_from_lower(const VectorSystem& phi);

// Dual (conj(m_k) * canonical dual of (m_k psi_k)) of psi.
VectorSystem weighted_shift_dual(const VectorSystem& psi, const CVector& m);

enum class BesselPairVerdict { ConsistentWithProposition, WitnessOfContrapositive, Violation, Inconclusive };
std::string_view to_string(BesselPairVerdict v);

struct BesselPairReport {
  BesselPairVerdict verdict = BesselPairVerdict::Inconclusive;
  BoundTrends psi;
  BoundTrends phi;
  double worst_dual_residual = 0.0;
};

// Dual families whose truncations pair up size by size. When both families stay
// Bessel (bounded upper trend) they must both be frames; when one lower trend
// collapses the other upper trend has to blow up.
BesselPairReport bessel_pair_check(const TruncationFamily& psi, const TruncationFamily& phi,
                                   const ClassifyThresholds& thresholds = {});

}  // namespace semiframe
