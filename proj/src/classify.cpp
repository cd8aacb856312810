#include "semiframe/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace semiframe {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Frame: return "Frame";
    case Verdict::UpperSemiFrame: return "UpperSemiFrame";
    case Verdict::LowerSemiFrame: return "LowerSemiFrame";
    case Verdict::BesselOnly: return "BesselOnly";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::InsufficientData, "log-log fit needs at least two points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw Error(ErrorKind::DomainViolation, "log-log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  LogLogFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

BoundTrends bound_trends(const TruncationFamily& family) {
  BoundTrends t;
  std::vector<double> sizes, lows, ups;
  for (Index i = 1; i <= family.count(); ++i) {
    const VectorSystem sys = realize_truncation(family, i);
    const BoundsReport b = optimal_bounds(sys);
    const Index n = family.sizes()[i - 1];
    t.lower.emplace_back(n, b.lower);
    t.upper.emplace_back(n, b.upper);
    t.all_total = t.all_total && b.total;
    sizes.push_back(static_cast<double>(n));
    lows.push_back(b.lower);
    ups.push_back(b.upper);
  }
  if (sizes.size() >= 2 && t.all_total) {
    t.lower_fit = loglog_fit(sizes, lows);
    t.upper_fit = loglog_fit(sizes, ups);
  }
  return t;
}

BoundsReport classify_snapshot(const VectorSystem& sys) { return optimal_bounds(sys); }

SemiFrameVerdict classify_asymptotic(const TruncationFamily& family, const ClassifyThresholds& th) {
  if (family.count() < 3)
    throw Error(ErrorKind::InsufficientData, "asymptotic classification needs at least 3 sizes");
  const BoundTrends t = bound_trends(family);
  SemiFrameVerdict v;
  v.lower_trend = t.lower;
  v.upper_trend = t.upper;
  if (!t.all_total) {
    v.verdict = Verdict::BesselOnly;
    return v;
  }
  v.slope_lower = t.lower_fit.slope;
  v.slope_upper = t.upper_fit.slope;
  v.confidence = std::max(t.lower_fit.residual, t.upper_fit.residual);

  const double ratio = t.lower.back().second / t.upper.back().second;
  const bool lower_flat = v.slope_lower >= -th.flat_slope;
  const bool upper_flat = v.slope_upper <= th.flat_slope;
  if (ratio >= th.tau && lower_flat && upper_flat) {
    v.verdict = Verdict::Frame;
  } else if (upper_flat && v.slope_lower <= -th.decay_slope && t.lower_fit.residual < th.max_fit_residual) {
    v.verdict = Verdict::UpperSemiFrame;
  } else if (lower_flat && v.slope_upper >= th.decay_slope && t.upper_fit.residual < th.max_fit_residual) {
    v.verdict = Verdict::LowerSemiFrame;
  } else {
    v.verdict = Verdict::Indeterminate;
  }
  return v;
}

namespace {

bool sequence_bounded(const std::vector<double>& seq, const std::vector<double>& sizes,
                      const RegularityOptions& opt) {
  for (double x : seq)
    if (!std::isfinite(x)) return false;
  if (seq.front() <= 0.0) return true;
  if (seq.back() / seq.front() > opt.divergence_factor) return false;
  bool increasing = true;
  for (std::size_t i = 1; i < seq.size(); ++i) increasing = increasing && seq[i] > seq[i - 1];
  if (increasing && loglog_fit(sizes, seq).slope >= opt.growth_slope) return false;
  return true;
}

}  // namespace

RegularityReport regularity_order(const TruncationFamily& family, const RegularityOptions& opt) {
  if (family.count() < 3)
    throw Error(ErrorKind::InsufficientData, "regularity needs at least 3 sizes");
  RegularityReport report;
  report.n_max = opt.n_max;

  std::vector<VectorSystem> systems;
  std::vector<SpectralFrameData> frames;
  std::vector<double> sizes;
  for (Index i = 1; i <= family.count(); ++i) {
    systems.push_back(realize_truncation(family, i));
    frames.push_back(frame_operator(systems.back()));
    require_total(frames.back(), "regularity_order");
    sizes.push_back(static_cast<double>(family.sizes()[i - 1]));
  }

  const Index atoms = systems.front().size();
  report.norms.assign(atoms, std::vector<std::vector<double>>(opt.n_max + 1));
  report.atom_orders.assign(atoms, 0);
  for (Index k = 0; k < atoms; ++k) {
    Index order = -1;
    bool still_bounded = true;
    for (Index n = 0; n <= opt.n_max; ++n) {
      auto& seq = report.norms[k][n];
      for (std::size_t s = 0; s < systems.size(); ++s) {
        // atom k persists across nested truncations
        const CVector atom = systems[s].atom(k);
        try {
          seq.push_back(frames[s].apply_power(atom, -0.5 * static_cast<double>(n)).norm());
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::DomainViolation) throw;
          seq.push_back(std::numeric_limits<double>::quiet_NaN());
        }
      }
      if (still_bounded && sequence_bounded(seq, sizes, opt)) order = n;
      else still_bounded = false;
    }
    report.atom_orders[k] = std::max<Index>(order, 0);
  }
  report.family_order = *std::min_element(report.atom_orders.begin(), report.atom_orders.end());
  report.totally_regular = report.family_order >= opt.n_max;
  return report;
}

}  // namespace semiframe
