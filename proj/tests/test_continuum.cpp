#include "semiframe/continuum.hpp"
#include "support.hpp"

using namespace testing;

namespace {

RVector exp_profile(const RadialGrid& g, double alpha = 1.0) { return (-alpha * g.r.array()).exp().matrix(); }

}  // namespace

TEST_CASE("uniform grids") {
  const RadialGrid g = make_uniform_grid(3, 4, 2.0);
  CHECK(g.dr == 0.5);
  CHECK(g.r(0) == 0.25);
  CHECK(g.u(1) == doctest::Approx(0.75 * 0.75 * 0.5));
  CHECK_THROWS_AS(make_uniform_grid(0, 4, 1.0), Error);
}

TEST_CASE("admissible profiles") {
  const RadialGrid g = make_uniform_grid(1, 64, 8.0);
  CHECK_NOTHROW(check_admissible(exp_profile(g)));
  auto kind_of = [](const RVector& s) {
    try {
      check_admissible(s);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ParseError;
  };
  CHECK(kind_of(RVector::Constant(8, 1.5)) == ErrorKind::InadmissibleProfile);
  CHECK(kind_of(RVector::Constant(8, 0.5)) == ErrorKind::InadmissibleProfile);
  RVector gap = RVector::Ones(8);
  gap(3) = gap(4) = 0.0;
  CHECK(kind_of(gap) == ErrorKind::InadmissibleProfile);
  RVector isolated = RVector::Ones(8);
  isolated(3) = 0.0;
  CHECK_NOTHROW(check_admissible(isolated));
}

TEST_CASE("quadrature frame operator") {
  const RadialGrid g = make_uniform_grid(2, 8, 4.0);
  Rng rng(1);
  const CMatrix atom = rng.gaussian(8, 1);
  const SampledContinuousFrame one(g, RVector::Zero(1), RVector::Ones(1), atom);
  const SpectralFrameData s = quadrature_frame_operator(one);
  CHECK(s.rank == 1);
  const double weighted = (g.u.array() * atom.col(0).array().abs2()).sum();
  CHECK(rel(s.top(), weighted) <= 1e-12);

  // two grid-orthogonal atoms with node weights w1, w2
  CMatrix two = CMatrix::Zero(8, 2);
  two(1, 0) = 2.0;
  two(5, 1) = Complex(0.0, 1.0);
  const SampledContinuousFrame pair(g, RVector::LinSpaced(2, 0, 1), (RVector(2) << 0.3, 1.7).finished(), two);
  const RVector ev = quadrature_frame_operator(pair).eigenvalues;
  const double e0 = 0.3 * 4.0 * g.u(1), e1 = 1.7 * g.u(5);
  CHECK(rel(ev(0), std::max(e0, e1)) <= 1e-12);
  CHECK(rel(ev(1), std::min(e0, e1)) <= 1e-12);

  // grid_operator is the same operator acting on grid values
  const CVector f = rng.gaussian(8);
  const RVector root = g.u.array().sqrt();
  const CVector direct = grid_operator(pair) * f;
  const CVector via = root.cast<Complex>().cwiseInverse().cwiseProduct(quadrature_frame_operator(pair).op * root.cast<Complex>().cwiseProduct(f));
  CHECK((direct - via).norm() <= 1e-12 * f.norm());
}

TEST_CASE("affine systems") {
  const RadialGrid g = make_uniform_grid(1, 64, 6.0);
  const SampledContinuousFrame tight = affine_system(g, RVector::Ones(64), 64);
  CHECK(max_abs(quadrature_frame_operator(tight).op - CMatrix::Identity(64, 64)) <= 1e-12);

  const RVector s = exp_profile(g);
  const SampledContinuousFrame a = affine_system(g, s, 64);
  const CMatrix op = quadrature_frame_operator(a).op;
  for (Index j = 0; j < 64; ++j) CHECK(std::abs(op(j, j) - s(j)) <= 1e-12);
  CHECK(multiplication_defect(a) <= 1e-12);
  CHECK(quadrature_frame_operator(a).top() <= 1.0 + 1e-12);

  // |psi_x|^2 = s / pi for n = 1
  for (Index j = 0; j < 64; j += 7) CHECK(std::abs(std::norm(a.atoms(j, 3)) - s(j) / M_PI) <= 1e-14);

  const std::vector<double> sweep = refinement_sweep(make_uniform_grid(1, 128, 16.0), exp_profile(make_uniform_grid(1, 128, 16.0)), {32, 64, 128});
  CHECK(sweep[0] > sweep[1]);
  CHECK(sweep[1] > sweep[2]);
  CHECK(sweep[2] <= 1e-10);

  CHECK_THROWS_AS(affine_system(g, RVector::Constant(64, 2.0), 64), Error);
  CHECK_THROWS_AS(affine_system(g, s, 1), Error);
}

TEST_CASE("nonregularity scan") {
  const RadialGrid g = make_uniform_grid(1, 243, 16.0);
  const SampledContinuousFrame a = affine_system(g, exp_profile(g), 243);
  const std::vector<ScanRow> rows = nonregularity_scan(a, {0, 1, 2}, 3);
  REQUIRE(rows.size() == 3);
  CHECK_FALSE(rows[0].divergent);
  // m = 0: the full norm |psi_x|^2 = (1/pi) * integral of e^{-r}
  const double full = (g.u.array() * exp_profile(g).array()).sum() / M_PI;
  CHECK(rel(rows[0].values.back(), full) <= 1e-12);
  CHECK(rows[1].divergent);
  CHECK(rows[2].divergent);
  for (std::size_t k = 0; k < 3; ++k) CHECK(rel(rows[1].values[k], rows[1].cutoffs[k] / M_PI) <= 1e-12);
  for (std::size_t k = 0; k < 3; ++k) CHECK(rel(rows[2].values[k], std::expm1(rows[2].cutoffs[k]) / M_PI) <= 1e-2);

  SampledContinuousFrame bare(g, a.x, a.w, a.atoms);
  try {
    nonregularity_scan(bare, {1}, 3);
    FAIL("expected MissingProfile");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingProfile);
  }
}

TEST_CASE("continuous reconstruction") {
  const RadialGrid g = make_uniform_grid(1, 128, 16.0);
  Rng rng(2);
  const CVector f = rng.gaussian(128);
  CHECK(cont_reconstruct(affine_system(g, RVector::Ones(128), 128), f).residual <= 1e-8);

  const RVector s = exp_profile(g);
  const SampledContinuousFrame a = affine_system(g, s, 128);
  CVector local = CVector::Zero(128);
  for (Index j = 0; j < 128; ++j)
    if (s(j) >= 0.1) local(j) = rng.normal();
  const ContReconstruction lr = cont_reconstruct(a, local);
  CHECK(lr.residual <= 1e-6);
  CHECK((lr.f_hat - local).norm() <= 1e-6 * local.norm());

  // band-limited: a few low modulations
  CVector band = CVector::Zero(128);
  for (int m = 0; m < 4; ++m) {
    const Complex amp(rng.normal(), rng.normal());
    for (Index j = 0; j < 128; ++j) band(j) += amp * std::polar(1.0, 2.0 * M_PI * m * g.r(j) / 16.0);
  }
  CHECK(cont_reconstruct(a, band).residual <= 1e-6);

  // a profile zero leaves a kernel direction
  RVector holed = RVector::Ones(128);
  holed(10) = 0.0;
  const SampledContinuousFrame h = affine_system(g, holed, 128);
  try {
    cont_reconstruct(h, CVector::Unit(128, 10));
    FAIL("expected DomainViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainViolation);
  }
}

TEST_CASE("adjointness and dual lower bound") {
  const RadialGrid g = make_uniform_grid(2, 64, 8.0);
  const SampledContinuousFrame a = affine_system(g, exp_profile(g), 64);
  CHECK(adjointness_defect(a) <= 1e-10);
  const double top = quadrature_frame_operator(a).top();
  CHECK(dual_lower_bound(a) >= 1.0 / (top + 1e-9) * (1 - 1e-9));
}
