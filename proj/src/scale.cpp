#include "semiframe/scale.hpp"

#include <charconv>
#include <cmath>

#include "semiframe/random.hpp"

namespace semiframe {

namespace {

constexpr double kRangeTolerance = 1e-8;

double half(Index n) { return 0.5 * static_cast<double>(n); }

}  // namespace

HilbertScale::HilbertScale(const VectorSystem& sys)
    : sys_(sys), frame_(frame_operator(sys)), gram_(spectral_decomposition(gram_operator(sys))) {
  require_total(frame_, "Hilbert scale");
}

CVector HilbertScale::coefficient_power(const CVector& c, double p) const {
  if (c.size() != sys_.size()) throw Error(ErrorKind::DimensionMismatch, "coefficient length must be N");
  if (range_residual(gram_, c) > kRangeTolerance)
    throw Error(ErrorKind::OffRange, "coefficients are not in the range of C");
  return gram_.apply_power(c, p);
}

double HilbertScale::vector_norm(const CVector& f, Index n) const {
  if (f.size() != sys_.dim()) throw Error(ErrorKind::DimensionMismatch, "vector length must be d");
  return frame_.apply_power(f, -half(n)).norm();
}

double HilbertScale::coefficient_norm(const CVector& c, Index n) const {
  return coefficient_power(c, -half(n)).norm();
}

Complex HilbertScale::vector_inner(const CVector& f, const CVector& g, Index n) const {
  return inner(frame_.apply_power(f, -half(n)), frame_.apply_power(g, -half(n)));
}

Complex HilbertScale::coefficient_inner(const CVector& c, const CVector& e, Index n) const {
  return inner(coefficient_power(c, -half(n)), coefficient_power(e, -half(n)));
}

ScaleNorm scale_norm(const VectorSystem& sys, const CVector& f, Index n) {
  return {n, HilbertScale(sys).vector_norm(f, n), ScaleSide::Vector};
}

ScaleNorm seq_scale_norm(const VectorSystem& sys, const CVector& c, Index n) {
  return {n, HilbertScale(sys).coefficient_norm(c, n), ScaleSide::Coefficient};
}

double isometry_defect(const VectorSystem& sys, Index n, Index trials, std::uint64_t seed) {
  const HilbertScale scale(sys);
  Rng rng(seed);
  double worst = 0.0;
  for (Index t = 0; t < trials; ++t) {
    const CVector f = rng.unit_vector(sys.dim());
    const CVector g = (t == 0) ? f : rng.unit_vector(sys.dim());
    const CVector cf = analysis(sys, f);
    const CVector cg = analysis(sys, g);
    const Complex lhs = scale.coefficient_inner(cf, cg, n + 1);
    const Complex rhs = scale.vector_inner(f, g, n);
    const double denom = scale.vector_norm(f, n) * scale.vector_norm(g, n);
    worst = std::max(worst, std::abs(lhs - rhs) / denom);
  }
  return worst;
}

TransportedSystem transported_system(const VectorSystem& sys, Index n) {
  const SpectralFrameData frame = frame_operator(sys);
  require_total(frame, "transported_system");
  const CMatrix moved = frame.power(half(n)) * sys.atoms();
  VectorSystem transported(moved, sys.weights(), "transported(" + std::to_string(n) + ")");
  // <S^{n/2} psi, f>_{H_n} = <S^{-n/2} S^{n/2} psi, S^{-n/2} f>, so the H_n bounds are the
  // ordinary bounds of the pulled-back atoms.
  VectorSystem pulled(frame.power(-half(n)) * moved, sys.weights());
  return {std::move(transported), optimal_bounds(pulled)};
}

WeakReconstruction weak_reconstruct(const VectorSystem& sys, const CVector& f, Index m) {
  if (f.size() != sys.dim()) throw Error(ErrorKind::DimensionMismatch, "vector length must be d");
  const SpectralFrameData frame = frame_operator(sys);
  require_total(frame, "weak_reconstruct");
  const CVector coeffs = analysis(sys, frame.apply_power(f, -1.0));
  WeakReconstruction out;
  out.value = synthesis(sys, coeffs);
  const double denom = frame.apply_power(f, half(m)).norm();
  out.residual = denom > 0.0 ? frame.apply_power(out.value - f, half(m)).norm() / denom : 0.0;
  return out;
}

Complex CoeffRule::operator()(Index k) const {
  const double kk = static_cast<double>(k);
  switch (kind) {
    case Kind::Power: return std::pow(kk, param);
    case Kind::Exponential: return std::exp(-param * kk);
    case Kind::Finite: return kk <= param ? 1.0 : 0.0;
  }
  return 0.0;
}

namespace {

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

double parse_number(std::string_view s, std::string_view context) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorKind::ParseError, "bad coefficient rule '" + std::string(context) + "'");
  return value;
}

}  // namespace

std::string CoeffRule::tag() const {
  switch (kind) {
    case Kind::Power: return "k^" + format_number(param);
    case Kind::Exponential: return param == 1.0 ? "exp(-k)" : "exp(-" + format_number(param) + "*k)";
    case Kind::Finite: return "finite:" + format_number(param);
  }
  return {};
}

CoeffRule CoeffRule::parse(std::string_view raw) {
  std::string compact;
  for (char c : raw)
    if (c != ' ') compact.push_back(c);
  std::string_view s = compact;
  if (s.starts_with("k^")) return {Kind::Power, parse_number(s.substr(2), raw)};
  if (s.starts_with("1/k^")) return {Kind::Power, -parse_number(s.substr(4), raw)};
  if (s == "1/k") return {Kind::Power, -1.0};
  if (s.starts_with("finite:")) return {Kind::Finite, parse_number(s.substr(7), raw)};
  if (s.starts_with("exp(-") && s.ends_with(")")) {
    std::string_view inner = s.substr(5, s.size() - 6);
    if (inner == "k") return {Kind::Exponential, 1.0};
    if (inner.ends_with("*k")) return {Kind::Exponential, parse_number(inner.substr(0, inner.size() - 2), raw)};
  }
  throw Error(ErrorKind::ParseError, "unrecognised coefficient rule '" + std::string(raw) + "'");
}

std::string_view to_string(GrowthTag t) {
  switch (t) {
    case GrowthTag::FastDecreasing: return "FastDecreasing";
    case GrowthTag::PolynomialOrder: return "PolynomialOrder";
    case GrowthTag::Divergent: return "Divergent";
  }
  return "Divergent";
}

namespace {

// Squared frakH_n norms of the coefficient sequence at one size, for n = 0..n_max.
std::vector<double> squared_ladder(const TruncationFamily& family, const CoeffRule& rule, Index size,
                                   Index n_max) {
  CVector c(size);
  for (Index k = 0; k < size; ++k) c(k) = rule(k + 1);
  std::vector<double> out(n_max + 1, 0.0);

  if (family.generator() == Generator::WeightedDiag) {
    // Atoms are orthogonal, so G is diagonal with entries |m_k|^2.
    const RVector g = diagonal_gram(family, size);
    for (Index n = 0; n <= n_max; ++n) {
      double sum = 0.0;
      for (Index k = 0; k < size; ++k) {
        const double factor = std::pow(g(k), -half(n));
        if (!(factor <= SpectralFrameData::kOverflowGuard))
          throw Error(ErrorKind::DomainViolation, "end-space probe exceeds the overflow guard");
        sum += factor * factor * std::norm(c(k));
      }
      out[n] = sum;
    }
    return out;
  }

  const VectorSystem sys = realize_at(family, size);
  if (sys.size() != size)
    throw Error(ErrorKind::InvalidFamily, "end-space probe needs families with N = size atoms");
  const SpectralFrameData gram = spectral_decomposition(gram_operator(sys));
  if (range_residual(gram, c) > kRangeTolerance)
    throw Error(ErrorKind::OffRange, "coefficient sequence is not in the range of C");
  for (Index n = 0; n <= n_max; ++n) out[n] = gram.apply_power(c, -half(n)).squaredNorm();
  return out;
}

bool converges(const std::vector<double>& squared, const EndSpaceOptions& opt) {
  const std::size_t t = squared.size();
  for (double v : squared)
    if (!std::isfinite(v)) return false;
  const double last = std::sqrt(squared[t - 1]);
  const double prev = std::sqrt(squared[t - 2]);
  if (std::abs(last - prev) <= opt.cauchy_gap * std::max(1.0, last)) return true;
  if (t < 3) return false;
  // Partial sums whose increments shrink geometrically along the size sweep.
  for (std::size_t i = 2; i < t; ++i) {
    const double before = squared[i - 1] - squared[i - 2];
    const double after = squared[i] - squared[i - 1];
    if (!(before > 0.0) || after > opt.geometric_ratio * before) return false;
  }
  return true;
}

}  // namespace

EndSpaceProbe end_space_probe(const TruncationFamily& family, const CoeffRule& rule, Index n_max,
                              const EndSpaceOptions& opt) {
  if (family.count() < 2) throw Error(ErrorKind::InsufficientData, "end-space probe needs at least 2 sizes");
  if (n_max < 0) throw Error(ErrorKind::DomainViolation, "n_max must be nonnegative");
  EndSpaceProbe probe;
  std::vector<std::vector<double>> squared(n_max + 1);
  for (Index size : family.sizes()) {
    const std::vector<double> ladder = squared_ladder(family, rule, size, n_max);
    for (Index n = 0; n <= n_max; ++n) squared[n].push_back(ladder[n]);
  }
  probe.norms.resize(n_max + 1);
  for (Index n = 0; n <= n_max; ++n) {
    for (double s : squared[n]) probe.norms[n].push_back(std::sqrt(s));
    probe.ladder.emplace_back(n, probe.norms[n].back());
    probe.converged.push_back(converges(squared[n], opt));
  }
  Index p = -1;
  while (p < n_max && probe.converged[p + 1]) ++p;
  probe.order = p;
  if (p == n_max) probe.tag = GrowthTag::FastDecreasing;
  else if (p >= 0) probe.tag = GrowthTag::PolynomialOrder;
  else probe.tag = GrowthTag::Divergent;
  return probe;
}

}  // namespace semiframe
