#include "semiframe/calculus.hpp"

#include <cmath>
#include <limits>

namespace semiframe {

SpectralFrameData spectral_decomposition(const CMatrix& hermitian) {
  if (hermitian.rows() != hermitian.cols())
    throw Error(ErrorKind::DimensionMismatch, "operator must be square");
  SpectralFrameData out;
  out.op = hermitian;
  const Index n = hermitian.rows();

  // Symmetrise away round-off before the Hermitian solver reads one triangle.
  const CMatrix sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  const RVector& ascending = solver.eigenvalues();
  out.eigenvalues = ascending.reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();

  const double top = std::max(out.eigenvalues(0), 0.0);
  out.rank_threshold = top > 0.0 ? SpectralFrameData::kRelativeRankCutoff * top : 1e-300;
  out.rank = 0;
  for (Index i = 0; i < n; ++i) {
    if (out.eigenvalues(i) > out.rank_threshold) {
      ++out.rank;
    } else if (out.eigenvalues(i) < 0.0) {
      out.eigenvalues(i) = 0.0;
    }
  }
  return out;
}

namespace {

RVector power_factors(const SpectralFrameData& s, double p) {
  RVector factors = RVector::Zero(s.dim());
  for (Index i = 0; i < s.rank; ++i) {
    const double value = std::pow(s.eigenvalues(i), p);
    if (!(value <= SpectralFrameData::kOverflowGuard))
      throw Error(ErrorKind::DomainViolation,
                  "spectral power " + std::to_string(p) + " of eigenvalue " +
                      std::to_string(s.eigenvalues(i)) + " exceeds the overflow guard");
    factors(i) = value;
  }
  return factors;
}

}  // namespace

CMatrix SpectralFrameData::power(double p) const {
  const RVector f = power_factors(*this, p);
  return eigenvectors * f.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

CVector SpectralFrameData::apply_power(const CVector& v, double p) const {
  if (v.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "vector length does not match operator");
  const RVector f = power_factors(*this, p);
  CVector coords = eigenvectors.adjoint() * v;
  coords.array() *= f.cast<Complex>().array();
  return eigenvectors * coords;
}

CMatrix SpectralFrameData::range_projector() const {
  const auto u = eigenvectors.leftCols(rank);
  return u * u.adjoint();
}

double SpectralFrameData::kernel_fraction(const CVector& v) const {
  const double norm = v.norm();
  if (norm == 0.0 || rank == dim()) return 0.0;
  const CVector coords = eigenvectors.rightCols(dim() - rank).adjoint() * v;
  return coords.norm() / norm;
}

std::string_view to_string(SnapshotClass c) {
  switch (c) {
    case SnapshotClass::RieszBasis: return "RieszBasis";
    case SnapshotClass::Frame: return "Frame";
    case SnapshotClass::BesselNotTotal: return "BesselNotTotal";
  }
  return "BesselNotTotal";
}

BoundsReport bounds_from_spectrum(const SpectralFrameData& spec, Index count) {
  BoundsReport r;
  r.eigenvalues = spec.eigenvalues;
  r.rank = spec.rank;
  r.upper = spec.top();
  r.lower = spec.rank > 0 ? spec.eigenvalues(spec.rank - 1) : 0.0;
  r.total = spec.rank == spec.dim();
  if (r.total && count == spec.dim()) r.snapshot_class = SnapshotClass::RieszBasis;
  else if (r.total) r.snapshot_class = SnapshotClass::Frame;
  else r.snapshot_class = SnapshotClass::BesselNotTotal;
  return r;
}

CVector analysis(const VectorSystem& sys, const CVector& f) {
  if (f.size() != sys.dim())
    throw Error(ErrorKind::DimensionMismatch, "analysis: vector length " + std::to_string(f.size()) +
                                                  " != d = " + std::to_string(sys.dim()));
  return sys.synthesis_matrix().adjoint() * f;
}

CVector synthesis(const VectorSystem& sys, const CVector& c) {
  if (c.size() != sys.size())
    throw Error(ErrorKind::DimensionMismatch, "synthesis: coefficient length " + std::to_string(c.size()) +
                                                  " != N = " + std::to_string(sys.size()));
  return sys.synthesis_matrix() * c;
}

SpectralFrameData frame_operator(const VectorSystem& sys) {
  const CMatrix d = sys.synthesis_matrix();
  return spectral_decomposition(d * d.adjoint());
}

CMatrix gram_operator(const VectorSystem& sys) {
  const CMatrix d = sys.synthesis_matrix();
  return d.adjoint() * d;
}

BoundsReport optimal_bounds(const VectorSystem& sys) {
  return bounds_from_spectrum(frame_operator(sys), sys.size());
}

void require_total(const SpectralFrameData& frame, std::string_view what) {
  if (frame.rank != frame.dim())
    throw Error(ErrorKind::NotTotal, std::string(what) + ": system is not total (rank " +
                                         std::to_string(frame.rank) + " < d = " +
                                         std::to_string(frame.dim()) + ")");
}

VectorSystem canonical_dual(const VectorSystem& sys, const SpectralFrameData& frame) {
  require_total(frame, "canonical_dual");
  CMatrix dual = frame.power(-1.0) * sys.atoms();
  return VectorSystem(std::move(dual), sys.weights(), "canonical_dual(" + sys.label() + ")");
}

VectorSystem canonical_dual(const VectorSystem& sys) { return canonical_dual(sys, frame_operator(sys)); }

CMatrix reproducing_kernel(const VectorSystem& sys) {
  const SpectralFrameData frame = frame_operator(sys);
  require_total(frame, "reproducing_kernel");
  const CMatrix dual = frame.power(-1.0) * sys.atoms();
  const Index n = sys.size();
  CMatrix kernel(n, n);
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < n; ++k)
      kernel(k, l) = sys.weights()(k) * sys.weights()(l) * inner(sys.atom(k), dual.col(l));
  return kernel;
}

CMatrix range_projection(const VectorSystem& sys) {
  const SpectralFrameData frame = frame_operator(sys);
  require_total(frame, "range_projection");
  const CMatrix d = sys.synthesis_matrix();
  return d.adjoint() * frame.power(-1.0) * d;
}

double range_residual(const SpectralFrameData& gram, const CVector& c) {
  const double norm = c.norm();
  if (norm == 0.0) return 0.0;
  return gram.kernel_fraction(c);
}

Complex psi_inner(const VectorSystem& sys, const CVector& c, const CVector& e) {
  if (c.size() != sys.size() || e.size() != sys.size())
    throw Error(ErrorKind::DimensionMismatch, "psi_inner: coefficient length must be N");
  const SpectralFrameData gram = spectral_decomposition(gram_operator(sys));
  constexpr double tol = 1e-8;
  if (range_residual(gram, c) > tol || range_residual(gram, e) > tol)
    throw Error(ErrorKind::OffRange, "psi_inner: coefficients are not in the range of C");
  return inner(c, gram.apply_power(e, -1.0));
}

}  // namespace semiframe
