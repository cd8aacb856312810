#include "semiframe/duality.hpp"

#include "semiframe/random.hpp"

namespace semiframe {

namespace {

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
}

}  // namespace

DualPairReport is_dual_pair(const VectorSystem& psi, const VectorSystem& phi, Index probes,
                            std::uint64_t seed) {
  if (psi.dim() != phi.dim() || psi.size() != phi.size())
    throw Error(ErrorKind::DimensionMismatch, "dual pair needs equal d and N");
  const Index d = psi.dim();
  const CMatrix dpsi = psi.synthesis_matrix();
  const CMatrix dphi = phi.synthesis_matrix();
  const CMatrix forward = dpsi * dphi.adjoint();  // f -> sum <phi_k, f> psi_k
  const CMatrix backward = dphi * dpsi.adjoint();

  DualPairReport r;
  auto probe = [&](const CVector& f) {
    r.max_residual = std::max(r.max_residual, (forward * f - f).norm() / f.norm());
    r.symmetric_residual = std::max(r.symmetric_residual, (backward * f - f).norm() / f.norm());
  };
  for (Index i = 0; i < d; ++i) probe(CVector::Unit(d, i));
  Rng rng(seed);
  for (Index t = 0; t < probes; ++t) probe(rng.unit_vector(d));

  const CMatrix eye = CMatrix::Identity(d, d);
  r.matrix_residual = std::max(spectral_norm(forward - eye), spectral_norm(backward - eye));
  r.is_dual = r.matrix_residual <= kDualTolerance;
  return r;
}

VectorSystem dual_from_lower(const VectorSystem& phi) {
  VectorSystem dual = canonical_dual(phi);
  return VectorSystem(dual.atoms(), dual.weights(), "dual_from_lower(" + phi.label() + ")");
}

VectorSystem weighted_shift_dual(const VectorSystem& psi, const CVector& m) {
  if (m.size() != psi.size()) throw Error(ErrorKind::DimensionMismatch, "one multiplier per atom required");
  for (Index k = 0; k < m.size(); ++k)
    if (!(std::abs(m(k)) > 0.0))
      throw Error(ErrorKind::InvalidWeight, "multiplier " + std::to_string(k) + " is zero");
  // phi_k = m_k psi_k, weights folded into the atoms
  const CMatrix reweighted = psi.synthesis_matrix() * m.asDiagonal();
  const VectorSystem phi(reweighted, RVector(), "reweighted");
  const SpectralFrameData frame = frame_operator(phi);
  require_total(frame, "weighted_shift_dual");
  const CMatrix dual = frame.power(-1.0) * reweighted * m.conjugate().asDiagonal();
  // psi's weights enter its synthesis; the dual carries plain atoms.
  return VectorSystem(dual, RVector(), "weighted_shift_dual(" + psi.label() + ")");
}

std::string_view to_string(BesselPairVerdict v) {
  switch (v) {
    case BesselPairVerdict::ConsistentWithProposition: return "consistent-with-proposition";
    case BesselPairVerdict::WitnessOfContrapositive: return "witness-of-contrapositive";
    case BesselPairVerdict::Violation: return "violation";
    case BesselPairVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

BesselPairReport bessel_pair_check(const TruncationFamily& psi, const TruncationFamily& phi,
                                   const ClassifyThresholds& th) {
  if (psi.sizes() != phi.sizes()) throw Error(ErrorKind::DimensionMismatch, "families must share sizes");
  if (psi.count() < 3) throw Error(ErrorKind::InsufficientData, "Bessel pair check needs at least 3 sizes");

  BesselPairReport r;
  for (Index t = 1; t <= psi.count(); ++t) {
    const DualPairReport dual = is_dual_pair(realize_truncation(psi, t), realize_truncation(phi, t));
    r.worst_dual_residual = std::max(r.worst_dual_residual, dual.matrix_residual);
    if (!dual.is_dual)
      throw Error(ErrorKind::NotDualPair, "truncation " + std::to_string(t) + " is not a dual pair (residual " +
                                              std::to_string(dual.matrix_residual) + ")");
  }
  r.psi = bound_trends(psi);
  r.phi = bound_trends(phi);

  auto upper_bounded = [&](const BoundTrends& t) { return t.upper_fit.slope <= th.flat_slope; };
  auto upper_blows_up = [&](const BoundTrends& t) { return t.upper_fit.slope >= th.decay_slope; };
  auto lower_bounded = [&](const BoundTrends& t) { return t.lower_fit.slope >= -th.flat_slope; };
  auto lower_collapses = [&](const BoundTrends& t) { return t.lower_fit.slope <= -th.decay_slope; };

  if ((lower_collapses(r.psi) && upper_blows_up(r.phi)) || (lower_collapses(r.phi) && upper_blows_up(r.psi))) {
    r.verdict = BesselPairVerdict::WitnessOfContrapositive;
  } else if (upper_bounded(r.psi) && upper_bounded(r.phi)) {
    r.verdict = (lower_bounded(r.psi) && lower_bounded(r.phi)) ? BesselPairVerdict::ConsistentWithProposition
                                                              : BesselPairVerdict::Violation;
  } else {
    r.verdict = BesselPairVerdict::Inconclusive;
  }
  return r;
}

}  // namespace semiframe
