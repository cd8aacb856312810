// One PASS/FAIL line per acceptance criterion; nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "semiframe/continuum.hpp"
#include "semiframe/duality.hpp"
#include "semiframe/equivalence.hpp"
#include "semiframe/random.hpp"
#include "semiframe/scale.hpp"

using namespace semiframe;

namespace {

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

VectorSystem diag(Index n, double power) {
  std::vector<double> w(n);
  for (Index k = 0; k < n; ++k) w[k] = std::pow(static_cast<double>(k + 1), power);
  return make_weighted_diag(w, n);
}

TruncationFamily diag_family(const char* rule, std::vector<Index> sizes) {
  return TruncationFamily(DiagParams{WeightRule::parse(rule)}, std::move(sizes));
}

VectorSystem random_frame(Rng& rng, Index d, Index n) { return VectorSystem(rng.gaussian(d, n)); }

CVector unit(Rng& rng, Index d) {
  CVector v = rng.gaussian(d);
  return v / v.norm();
}

std::vector<std::vector<Index>> random_partition(Rng& rng, Index n, Index blocks) {
  std::vector<std::vector<Index>> p(blocks);
  std::vector<Index> order(n);
  for (Index k = 0; k < n; ++k) order[k] = k;
  for (Index k = n - 1; k > 0; --k) std::swap(order[k], order[rng.uniform_int(0, k)]);
  for (Index k = 0; k < n; ++k) p[k < blocks ? k : rng.uniform_int(0, blocks - 1)].push_back(order[k]);
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome diagonal_fidelity() {
  const auto t0 = std::chrono::steady_clock::now();
  const VectorSystem sys = diag(64, -1.0);
  const BoundsReport b = optimal_bounds(sys);
  const VectorSystem dual = canonical_dual(sys);
  CMatrix expected = CMatrix::Zero(64, 64);
  for (Index k = 0; k < 64; ++k) expected(k, k) = static_cast<double>(k + 1);
  const double dual_err = max_abs(dual.atoms() - expected);
  const double dt = seconds_since(t0);
  const bool ok = rel(b.lower, 1.0 / 4096) <= 1e-10 && rel(b.upper, 1.0) <= 1e-10 && dual_err <= 1e-10 && dt < 1.0;
  return {ok, fmt("lower=%.12g upper=%.12g dual_err=%.2e", b.lower, b.upper, dual_err) + fmt(" t=%.3fs", dt)};
}

Outcome asymptotic_verdicts() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Index> sizes = {8, 16, 32, 64, 128};
  const SemiFrameVerdict up = classify_asymptotic(diag_family("1/k", sizes));
  const SemiFrameVerdict down = classify_asymptotic(diag_family("k", sizes));
  const double dt = seconds_since(t0);
  const bool ok = up.verdict == Verdict::UpperSemiFrame && std::abs(up.slope_lower + 2.0) <= 0.05 &&
                  down.verdict == Verdict::LowerSemiFrame && std::abs(down.slope_upper - 2.0) <= 0.05 && dt < 5.0;
  return {ok, std::string(to_string(up.verdict)) + "/" + std::string(to_string(down.verdict)) +
                  fmt(" slopes=%.4f/%.4f t=%.3fs", up.slope_lower, down.slope_upper, dt)};
}

Outcome analysis_unitarity() {
  Rng rng(101);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Index d = rng.uniform_int(1, 32);
    const Index n = rng.uniform_int(d, 96);
    const VectorSystem sys = random_frame(rng, d, n);
    for (int p = 0; p < 20; ++p) {
      const CVector f = unit(rng, d), g = unit(rng, d);
      const Complex lhs = psi_inner(sys, analysis(sys, f), analysis(sys, g));
      worst = std::max(worst, std::abs(lhs - inner(f, g)));
    }
  }
  return {worst <= 1e-9, fmt("max |<Cf,Cg>_psi - <f,g>| = %.2e", worst)};
}

Outcome scale_ladder() {
  Rng rng(102);
  std::vector<VectorSystem> systems = {diag(32, -1.0)};
  for (int t = 0; t < 10; ++t) {
    const Index d = rng.uniform_int(2, 12);
    systems.push_back(random_frame(rng, d, rng.uniform_int(2 * d, 3 * d)));
  }
  double worst = 0.0;
  for (const VectorSystem& sys : systems)
    for (Index n = -3; n <= 3; ++n) worst = std::max(worst, isometry_defect(sys, n, 5, 7 + n));

  double convexity = 0.0;  // worst ratio lhs / rhs
  for (int p = 0; p < 100; ++p) {
    const VectorSystem& sys = systems[p % systems.size()];
    const CVector f = unit(rng, sys.dim());
    const Index n = rng.uniform_int(-3, 1);
    const double a = scale_norm(sys, f, n).value, b = scale_norm(sys, f, n + 1).value,
                 c = scale_norm(sys, f, n + 2).value;
    convexity = std::max(convexity, b * b / (a * c));
  }
  return {worst <= 1e-8 && convexity <= 1.0 + 1e-9, fmt("isometry=%.2e convexity_ratio=%.12f", worst, convexity)};
}

Outcome end_spaces() {
  const TruncationFamily fam = diag_family("1/k", {1000, 2000, 4000, 8000, 16000});
  const EndSpaceProbe poly = end_space_probe(fam, CoeffRule::parse("k^-4"), 6);
  const EndSpaceProbe fast = end_space_probe(fam, CoeffRule::parse("exp(-k)"), 6);
  const EndSpaceProbe finite = end_space_probe(fam, CoeffRule::parse("finite:10"), 6);
  const bool ok = poly.tag == GrowthTag::PolynomialOrder && poly.order == 3 && fast.tag == GrowthTag::FastDecreasing &&
                  finite.tag == GrowthTag::FastDecreasing;
  return {ok, std::string(to_string(poly.tag)) + "(" + std::to_string(poly.order) + ") " +
                  std::string(to_string(fast.tag)) + " " + std::string(to_string(finite.tag))};
}

Outcome duality_suite() {
  Rng rng(103);
  double worst = is_dual_pair(diag(32, -1.0), diag(32, 1.0)).matrix_residual;
  for (int t = 0; t < 20; ++t) {
    const Index d = rng.uniform_int(2, 12);
    const VectorSystem psi = random_frame(rng, d, rng.uniform_int(d, 3 * d));
    worst = std::max(worst, is_dual_pair(psi, canonical_dual(psi)).matrix_residual);
  }
  double shift = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Index d = rng.uniform_int(2, 12);
    const Index n = rng.uniform_int(d, 3 * d);
    const VectorSystem psi = random_frame(rng, d, n);
    CVector m(n);
    for (Index k = 0; k < n; ++k) m(k) = std::polar(rng.uniform(0.2, 3.0), rng.uniform(0.0, 2 * M_PI));
    shift = std::max(shift, is_dual_pair(psi, weighted_shift_dual(psi, m)).matrix_residual);
  }
  const BesselPairReport bp = bessel_pair_check(diag_family("1/k", {8, 16, 32, 64}), diag_family("k", {8, 16, 32, 64}));
  const bool ok = worst <= 1e-8 && shift <= 1e-8 && bp.verdict == BesselPairVerdict::WitnessOfContrapositive;
  return {ok, fmt("dual=%.2e shift=%.2e ", worst, shift) + std::string(to_string(bp.verdict))};
}

Outcome fusion_sandwich() {
  Rng rng(104);
  double worst = 0.0;
  bool all = true;
  for (int t = 0; t < 30; ++t) {
    const Index d = rng.uniform_int(2, 10);
    const Index n = rng.uniform_int(d + 2, 3 * d + 2);
    const VectorSystem sys = random_frame(rng, d, n);
    const FusionFromFrame f = fusion_from_frame(sys, random_partition(rng, n, rng.uniform_int(2, std::min<Index>(n, 6))), 200, 200 + t);
    all = all && f.sandwich.holds && f.sandwich.probes == 200;
    worst = std::max(worst, f.sandwich.max_violation);
  }
  return {all && worst <= 1e-9, fmt("max relative violation = %.2e", worst)};
}

Outcome continuum_identity() {
  const RadialGrid g = make_uniform_grid(1, 256, 16.0);
  const RVector s = (-g.r.array()).exp().matrix();
  const std::vector<double> sweep = refinement_sweep(g, s, {64, 128, 256});
  const bool monotone = sweep[0] > sweep[1] && sweep[1] > sweep[2];
  const std::vector<ScanRow> rows = nonregularity_scan(affine_system(g, s, 256), {1, 2}, 3);
  bool trends = rows.size() == 2 && rows[0].divergent && rows[1].divergent;
  double worst = 1.0;
  for (const ScanRow& row : rows)
    for (std::size_t k = 0; k + 1 < row.cutoffs.size(); ++k) {
      const double a = row.cutoffs[k], b = row.cutoffs[k + 1];
      const double expected = row.m == 1 ? b / a : std::expm1(b) / std::expm1(a);
      const double ratio = row.factors[k] / expected;
      worst = std::max({worst, ratio, 1.0 / ratio});
    }
  trends = trends && worst <= 2.0;
  return {monotone && sweep[2] <= 1e-3 && trends,
          fmt("defects=%.2e,%.2e,%.2e", sweep[0], sweep[1], sweep[2]) + fmt(" trend_mismatch=%.3f", worst)};
}

Outcome equivalence_hierarchy() {
  Rng rng(105);
  const Index d = 6, n = 2, q = 8;
  double kernel = 0.0, gauge = 0.0;
  bool downgrades_exact = true;
  for (int t = 0; t < 20; ++t) {
    std::vector<CMatrix> blocks;
    std::vector<double> mu;
    for (Index x = 0; x < q; ++x) {
      blocks.push_back(rng.unitary(d).leftCols(n));
      mu.push_back(rng.uniform(0.5, 2.0));
    }
    const RankNSystem a = RankNSystem::orthonormal(d, blocks, mu);

    const CMatrix tm = rng.conditioned(d, 0.5, 2.0) * rng.unitary(d);
    std::vector<CMatrix> tb, ub, gb, vary_t, vary_b;
    std::vector<CMatrix> u;
    for (Index x = 0; x < q; ++x) {
      u.push_back(rng.unitary(n));
      tb.push_back(tm * blocks[x]);
      gb.push_back(blocks[x] * u[x].transpose());
      vary_t.push_back(rng.conditioned(d, 0.5, 2.0) * rng.unitary(d));
      vary_b.push_back(vary_t.back() * blocks[x]);
    }
    const RankNSystem tsys(d, tb, mu), gsys(d, gb, mu), vsys(d, vary_b, mu);
    const EquivalenceReport sim = check_similar(a, tsys, tm);
    kernel = std::max(kernel, max_abs(frame_kernel(tsys) - frame_kernel(a)));
    kernel = std::max(kernel, sim.pass ? 0.0 : sim.max_defect);
    gauge = std::max(gauge, check_gauge(a, gsys, u).max_defect);

    const EquivalenceReport constant = check_bundle(a, tsys, std::vector<CMatrix>(q, tm));
    const EquivalenceReport varying = check_bundle(a, vsys, vary_t);
    downgrades_exact = downgrades_exact && constant.pass && constant.downgrade.has_value() && varying.pass &&
                       !varying.downgrade.has_value();
  }
  return {kernel <= 1e-8 && gauge <= 1e-8 && downgrades_exact,
          fmt("kernel=%.2e gauge=%.2e", kernel, gauge) + (downgrades_exact ? " downgrades exact" : " downgrade mismatch")};
}

Outcome oracle_agreement() {
  Rng rng(106);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Index d = rng.uniform_int(1, 16);
    const Index n = rng.uniform_int(d, 2 * d + 4);
    RVector w(n);
    for (Index k = 0; k < n; ++k) w(k) = rng.uniform(0.5, 2.0);
    const VectorSystem sys(rng.gaussian(d, n), t % 2 ? w : RVector());
    const CMatrix s = oracle::frame_operator(sys.atoms(), sys.weights());
    const double scale = oracle::max_abs(s);
    worst = std::max(worst, oracle::max_abs(frame_operator(sys).op - s) / scale);
    worst = std::max(worst, oracle::max_abs(gram_operator(sys) - oracle::gram(sys.atoms(), sys.weights())) / scale);
    const oracle::Bounds b = oracle::bounds(s);
    const BoundsReport lib = optimal_bounds(sys);
    worst = std::max({worst, rel(lib.lower, b.lower), rel(lib.upper, b.upper)});
    if (lib.rank != b.rank) worst = std::max(worst, 1.0);
    worst = std::max(worst, oracle::max_abs(range_projection(sys) - oracle::range_projection(sys.atoms(), sys.weights())));
  }
  return {worst <= 1e-9, fmt("max deviation = %.2e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"diagonal example fidelity", diagonal_fidelity},
      {"asymptotic verdicts", asymptotic_verdicts},
      {"unitarity of the analysis operator", analysis_unitarity},
      {"scale isometry ladder", scale_ladder},
      {"end-space probe", end_spaces},
      {"duality suite", duality_suite},
      {"fusion sandwich", fusion_sandwich},
      {"continuum multiplication identity", continuum_identity},
      {"equivalence hierarchy", equivalence_hierarchy},
      {"oracle equivalence", oracle_agreement},
  };
  int failures = 0;
  int id = 0;
  for (const auto& [name, check] : criteria) {
    ++id;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
