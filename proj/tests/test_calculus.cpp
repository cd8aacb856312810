#include "support.hpp"

using namespace testing;

TEST_CASE("analysis and synthesis") {
  const VectorSystem s = diag_system(6);
  for (Index p = 0; p < 6; ++p) {
    const CVector c = analysis(s, CVector::Unit(6, p));
    CHECK(c.squaredNorm() == doctest::Approx(1.0 / double((p + 1) * (p + 1))));
    CHECK(std::abs(c(p) - 1.0 / double(p + 1)) < 1e-15);
  }

  Rng rng(21);
  const VectorSystem e = onb(5);
  const CVector f = rng.gaussian(5);
  CHECK((analysis(e, f) - f).norm() == 0.0);
  CHECK((synthesis(e, f) - f).norm() == 0.0);

  const VectorSystem r = random_frame(rng, 4, 7, true);
  CHECK((synthesis(r, CVector::Unit(7, 3)) - r.weights()(3) * r.atom(3)).norm() <= 1e-15);
  const SpectralFrameData sf = frame_operator(r);
  for (int t = 0; t < 100; ++t) {
    const CVector g = rng.gaussian(4);
    const CVector c = rng.gaussian(7);
    CHECK(std::abs(inner(synthesis(r, c), g) - inner(c, analysis(r, g))) <= 1e-12 * c.norm() * g.norm());
    CHECK(std::abs(analysis(r, g).squaredNorm() - inner(g, sf.op * g).real()) <= 1e-10 * g.squaredNorm() * sf.top());
  }
  CHECK_THROWS_AS(analysis(r, rng.gaussian(3)), Error);
  CHECK_THROWS_AS(synthesis(r, rng.gaussian(6)), Error);
}

TEST_CASE("frame and Gram operators") {
  const SpectralFrameData s4 = frame_operator(diag_system(4));
  CHECK(max_abs(s4.op - RVector(RVector::LinSpaced(4, 1, 4).array().square().inverse()).cast<Complex>().asDiagonal().toDenseMatrix()) <= 1e-15);
  CHECK(max_abs(gram_operator(diag_system(4)) - s4.op) <= 1e-15);
  CHECK(max_abs(frame_operator(onb(3)).op - CMatrix::Identity(3, 3)) == 0.0);
  CHECK(max_abs(gram_operator(onb(3)) - CMatrix::Identity(3, 3)) == 0.0);

  Rng rng(8);
  const VectorSystem r = random_frame(rng, 5, 9, true);
  const SpectralFrameData sf = frame_operator(r);
  const RVector sv = Eigen::JacobiSVD<CMatrix>(r.synthesis_matrix()).singularValues();
  for (Index i = 0; i < 5; ++i) CHECK(std::abs(sf.eigenvalues(i) - sv(i) * sv(i)) <= 1e-10 * sf.top());

  // spectral data reassembles S
  const CMatrix back = sf.eigenvectors * sf.eigenvalues.cast<Complex>().asDiagonal() * sf.eigenvectors.adjoint();
  CHECK((back - sf.op).norm() <= 1e-10 * sf.top());

  // factorizations and spectral consistency
  const CMatrix d = r.synthesis_matrix();
  CHECK((sf.op - d * d.adjoint()).norm() <= 1e-9 * sf.top());
  const CMatrix g = gram_operator(r);
  CHECK((g - d.adjoint() * d).norm() <= 1e-9 * sf.top());
  const SpectralFrameData gs = spectral_decomposition(g);
  CHECK(gs.rank == 5);
  for (Index i = 0; i < 5; ++i) CHECK(rel(gs.eigenvalues(i), sf.eigenvalues(i)) <= 1e-9);
  CHECK(9 - gs.rank == 4);
}

TEST_CASE("optimal bounds") {
  const BoundsReport b = optimal_bounds(diag_system(4));
  CHECK(b.lower == doctest::Approx(1.0 / 16).epsilon(1e-12));
  CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.snapshot_class == SnapshotClass::RieszBasis);

  const BoundsReport e = optimal_bounds(onb(4));
  CHECK(e.lower == 1.0);
  CHECK(e.upper == 1.0);

  Rng rng(4);
  const CMatrix basis = rng.unitary(4).leftCols(3);
  const BoundsReport p = optimal_bounds(VectorSystem(basis * rng.gaussian(3, 3)));
  CHECK_FALSE(p.total);
  CHECK(p.rank == 3);
  CHECK(p.snapshot_class == SnapshotClass::BesselNotTotal);
  CHECK(p.lower > 0.0);

  const VectorSystem r = random_frame(rng, 4, 10);
  const BoundsReport rb = optimal_bounds(r);
  CHECK(rb.snapshot_class == SnapshotClass::Frame);
  // sharpness at eigenvectors
  const SpectralFrameData sf = frame_operator(r);
  const CVector lo = sf.eigenvectors.col(3), hi = sf.eigenvectors.col(0);
  CHECK(std::abs(inner(lo, sf.op * lo).real() - rb.lower) <= 1e-9 * rb.upper);
  CHECK(std::abs(inner(hi, sf.op * hi).real() - rb.upper) <= 1e-9 * rb.upper);
  for (int t = 0; t < 50; ++t) {
    const CVector f = rng.unit_vector(4);
    const double q = inner(f, sf.op * f).real();
    CHECK(q >= rb.lower * (1 - 1e-12));
    CHECK(q <= rb.upper * (1 + 1e-12));
  }
}

TEST_CASE("zero operator rank threshold") {
  const SpectralFrameData z = spectral_decomposition(CMatrix::Zero(3, 3));
  CHECK(z.rank == 0);
  CHECK(z.rank_threshold == 1e-300);
}

TEST_CASE("canonical dual") {
  const VectorSystem dual = canonical_dual(diag_system(5));
  for (Index k = 0; k < 5; ++k) CHECK(std::abs(dual.atoms()(k, k) - double(k + 1)) <= 1e-12);
  CHECK(max_abs(dual.atoms() - CMatrix(dual.atoms().diagonal().asDiagonal())) == 0.0);

  Rng rng(9);
  const CMatrix u = rng.unitary(3);
  CMatrix twice(3, 6);
  twice << u, u;
  const VectorSystem t2(twice);  // S = 2I
  CHECK(max_abs(canonical_dual(t2).atoms() - 0.5 * twice) <= 1e-14);

  const VectorSystem r = random_frame(rng, 5, 8, true);
  const BoundsReport rb = optimal_bounds(r);
  const BoundsReport db = optimal_bounds(canonical_dual(r));
  CHECK(rel(db.lower, 1.0 / rb.upper) <= 1e-9);
  CHECK(rel(db.upper, 1.0 / rb.lower) <= 1e-9);

  const VectorSystem rd = canonical_dual(r);
  for (int t = 0; t < 20; ++t) {
    const CVector f = rng.gaussian(5);
    CHECK((synthesis(r, analysis(rd, f)) - f).norm() <= 1e-8 * f.norm());
    CHECK((synthesis(rd, analysis(r, f)) - f).norm() <= 1e-8 * f.norm());
  }

  const CMatrix flat = rng.unitary(4).leftCols(2) * rng.gaussian(2, 5);
  try {
    canonical_dual(VectorSystem(flat));
    FAIL("expected NotTotal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotTotal);
  }
}

TEST_CASE("reproducing kernel and range projection") {
  CHECK(max_abs(reproducing_kernel(diag_system(4)) - CMatrix::Identity(4, 4)) <= 1e-12);
  CHECK(max_abs(reproducing_kernel(onb(3)) - CMatrix::Identity(3, 3)) <= 1e-15);

  Rng rng(10);
  const VectorSystem r = random_frame(rng, 3, 6, true);
  const CMatrix k = reproducing_kernel(r);
  const CMatrix p = range_projection(r);
  CHECK(max_abs(k - p) <= 1e-9);
  CHECK(max_abs(k * k - k) <= 1e-9);
  CHECK(max_abs(k - k.adjoint()) <= 1e-9);
  CHECK(std::abs(p.trace() - 3.0) <= 1e-6);
  CHECK(spectral_decomposition(p).rank == 3);
  for (int t = 0; t < 10; ++t) {
    const CVector c = analysis(r, rng.gaussian(3));
    CHECK((k * c - c).norm() <= 1e-9 * c.norm());
  }

  CHECK(max_abs(range_projection(VectorSystem(rng.gaussian(4, 4))) - CMatrix::Identity(4, 4)) <= 1e-9);

  CMatrix dup(3, 6);
  dup << CMatrix::Identity(3, 3), CMatrix::Identity(3, 3);
  CMatrix expected(6, 6);
  expected << CMatrix::Identity(3, 3), CMatrix::Identity(3, 3), CMatrix::Identity(3, 3), CMatrix::Identity(3, 3);
  CHECK(max_abs(range_projection(VectorSystem(dup)) - 0.5 * expected) <= 1e-14);

  CHECK(spectral_decomposition(range_projection(VectorSystem(rng.gaussian(3, 8)))).rank == 3);
}

TEST_CASE("psi inner product") {
  const VectorSystem s = diag_system(4);
  Rng rng(12);
  const CVector c = rng.gaussian(4), e = rng.gaussian(4);
  Complex expected = 0.0;
  for (Index k = 0; k < 4; ++k) expected += double((k + 1) * (k + 1)) * std::conj(c(k)) * e(k);
  CHECK(std::abs(psi_inner(s, c, e) - expected) <= 1e-12 * std::abs(expected));
  CHECK(std::abs(psi_inner(onb(4), c, e) - inner(c, e)) <= 1e-14);

  const VectorSystem r = random_frame(rng, 4, 9, true);
  for (int t = 0; t < 10; ++t) {
    const CVector f = rng.gaussian(4), g = rng.gaussian(4);
    CHECK(std::abs(psi_inner(r, analysis(r, f), analysis(r, g)) - inner(f, g)) <= 1e-10 * f.norm() * g.norm());
  }
  try {
    psi_inner(r, rng.gaussian(9), analysis(r, rng.gaussian(4)));
    FAIL("expected OffRange");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::OffRange);
  }
}

TEST_CASE("library against the oracle") {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const Index d = 2 + rng.uniform_int(0, 6);
    const Index n = d + rng.uniform_int(0, 6);
    const VectorSystem r = random_frame(rng, d, n, t % 2 == 1);
    const CMatrix s = oracle::frame_operator(r.atoms(), r.weights());
    CHECK(oracle::max_abs(frame_operator(r).op - s) <= 1e-12 * oracle::max_abs(s));
    CHECK(oracle::max_abs(gram_operator(r) - oracle::gram(r.atoms(), r.weights())) <= 1e-12 * oracle::max_abs(s));
    const oracle::Bounds b = oracle::bounds(s);
    const BoundsReport lib = optimal_bounds(r);
    CHECK(rel(lib.lower, b.lower) <= 1e-9);
    CHECK(rel(lib.upper, b.upper) <= 1e-9);
    CHECK(lib.rank == b.rank);
    CHECK(oracle::max_abs(range_projection(r) - oracle::range_projection(r.atoms(), r.weights())) <= 1e-9);
  }
}
