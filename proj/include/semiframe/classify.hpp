#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "semiframe/calculus.hpp"

namespace semiframe {

enum class Verdict { Frame, UpperSemiFrame, LowerSemiFrame, BesselOnly, Indeterminate };
std::string_view to_string(Verdict v);

// Least-squares line through (log x, log y).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS residual in log space
};
LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

struct BoundTrends {
  std::vector<std::pair<Index, double>> lower;  // (N, m(N))
  std::vector<std::pair<Index, double>> upper;  // (N, M(N))
  bool all_total = true;
  LogLogFit lower_fit;
  LogLogFit upper_fit;
};

// Optimal bounds at every size of the family plus log-log fits of both trends.
BoundTrends bound_trends(const TruncationFamily& family);

struct ClassifyThresholds {
  double tau = 1e-3;             // minimal m/M at the largest size for Frame
  double flat_slope = 0.1;       // |slope| at most this counts as bounded
  double decay_slope = 0.5;      // |slope| at least this counts as divergent
  double max_fit_residual = 0.2;
};

struct SemiFrameVerdict {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<std::pair<Index, double>> lower_trend;
  std::vector<std::pair<Index, double>> upper_trend;
  double slope_lower = 0.0;
  double slope_upper = 0.0;
  double confidence = 0.0;  // max RMS fit residual of the two trends
};

BoundsReport classify_snapshot(const VectorSystem& sys);

SemiFrameVerdict classify_asymptotic(const TruncationFamily& family,
                                     const ClassifyThresholds& thresholds = {});
inline SemiFrameVerdict classify_asymptotic(const TruncationFamily& family, double tau) {
  ClassifyThresholds t;
  t.tau = tau;
  return classify_asymptotic(family, t);
}

struct RegularityReport {
  Index n_max = 0;
  std::vector<Index> atom_orders;  // n-hat_k for each atom of the smallest truncation
  Index family_order = 0;          // min_k n-hat_k
  bool totally_regular = false;
  // norms[k][n] holds |S_N^{-n/2} psi_k| for each family size (NaN past the guard)
  std::vector<std::vector<std::vector<double>>> norms;
};

struct RegularityOptions {
  Index n_max = 8;
  double divergence_factor = 1e3;  // last / first above this is unbounded
  double growth_slope = 0.25;      // monotone log-log growth at least this is unbounded
};

RegularityReport regularity_order(const TruncationFamily& family, const RegularityOptions& options = {});

}  // namespace semiframe
