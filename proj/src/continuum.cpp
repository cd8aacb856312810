#include "semiframe/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "semiframe/random.hpp"

namespace semiframe {

namespace {

constexpr double kPi = std::numbers::pi;

void check_grid(const RadialGrid& g) {
  if (g.n < 1) throw Error(ErrorKind::InvalidGrid, "grid: n >= 1 required");
  if (g.r.size() < 1) throw Error(ErrorKind::InvalidGrid, "grid: at least one point required");
  if (g.u.size() != g.r.size()) throw Error(ErrorKind::InvalidGrid, "grid: r and u lengths differ");
  for (Index j = 0; j < g.r.size(); ++j) {
    if (!(g.r(j) > 0.0) || !std::isfinite(g.r(j))) throw Error(ErrorKind::InvalidGrid, "grid: r must be positive");
    if (!(g.u(j) > 0.0) || !std::isfinite(g.u(j))) throw Error(ErrorKind::InvalidGrid, "grid: u must be positive");
    if (j > 0 && !(g.r(j) > g.r(j - 1))) throw Error(ErrorKind::InvalidGrid, "grid: r must be increasing");
  }
}

RVector sqrt_of(const RVector& v) { return v.array().sqrt().matrix(); }

}  // namespace

RadialGrid make_uniform_grid(int n, Index points, double cutoff) {
  if (n < 1) throw Error(ErrorKind::InvalidGrid, "grid: n >= 1 required");
  if (points < 1 || !(cutoff > 0.0)) throw Error(ErrorKind::InvalidGrid, "grid: need points >= 1 and R > 0");
  RadialGrid g;
  g.n = n;
  g.dr = cutoff / static_cast<double>(points);
  g.r.resize(points);
  g.u.resize(points);
  for (Index j = 0; j < points; ++j) {
    g.r(j) = (static_cast<double>(j) + 0.5) * g.dr;
    g.u(j) = std::pow(g.r(j), n - 1) * g.dr;
  }
  return g;
}

SampledContinuousFrame::SampledContinuousFrame(RadialGrid grid_, RVector x_, RVector w_, CMatrix atoms_,
                                               std::optional<RVector> profile_)
    : grid(std::move(grid_)), x(std::move(x_)), w(std::move(w_)), atoms(std::move(atoms_)), profile(std::move(profile_)) {
  check_grid(grid);
  if (x.size() < 1) throw Error(ErrorKind::InvalidGrid, "frame: at least one node required");
  if (w.size() != x.size()) throw Error(ErrorKind::InvalidGrid, "frame: x and w lengths differ");
  for (Index i = 0; i < w.size(); ++i)
    if (!(w(i) > 0.0) || !std::isfinite(w(i))) throw Error(ErrorKind::InvalidWeight, "frame: node weights must be positive");
  if (atoms.rows() != grid.size() || atoms.cols() != x.size())
    throw Error(ErrorKind::DimensionMismatch, "frame: atoms must be P x Q");
  if (profile) {
    if (profile->size() != grid.size()) throw Error(ErrorKind::InvalidGrid, "frame: profile length must be P");
    check_admissible(*profile);
  }
}

VectorSystem SampledContinuousFrame::orthonormal_system() const {
  return VectorSystem(sqrt_of(grid.u).asDiagonal() * atoms, sqrt_of(w), "continuum");
}

void check_admissible(const RVector& s) {
  if (s.size() < 1) throw Error(ErrorKind::InadmissibleProfile, "profile is empty");
  double step = 0.0;
  for (Index j = 0; j < s.size(); ++j) {
    if (!std::isfinite(s(j)) || s(j) < 0.0 || s(j) > 1.0 + 1e-12)
      throw Error(ErrorKind::InadmissibleProfile, "profile values must lie in [0, 1]");
    if (j > 0) {
      step = std::max(step, std::abs(s(j) - s(j - 1)));
      if (s(j) == 0.0 && s(j - 1) == 0.0)
        throw Error(ErrorKind::InadmissibleProfile, "profile vanishes on an interval");
    }
  }
  if (1.0 - s.maxCoeff() > step + 1e-12) throw Error(ErrorKind::InadmissibleProfile, "profile supremum is not 1");
}

CMatrix affine_atoms(const RadialGrid& grid, const RVector& s, const RVector& x) {
  check_grid(grid);
  if (s.size() != grid.size()) throw Error(ErrorKind::InvalidGrid, "profile length must be P");
  CMatrix atoms(grid.size(), x.size());
  for (Index j = 0; j < grid.size(); ++j) {
    const double amp = std::sqrt(s(j) / (kPi * std::pow(grid.r(j), grid.n - 1)));
    for (Index i = 0; i < x.size(); ++i) atoms(j, i) = std::polar(amp, x(i) * grid.r(j));
  }
  return atoms;
}

SampledContinuousFrame affine_system(const RadialGrid& grid, const RVector& s, Index nodes) {
  check_grid(grid);
  check_admissible(s);
  if (!grid.uniform()) throw Error(ErrorKind::InvalidGrid, "affine_system needs a uniform grid");
  if (nodes < 2) throw Error(ErrorKind::InvalidGrid, "affine_system: Q >= 2 required");
  const double dx = 2.0 * kPi / (static_cast<double>(nodes) * grid.dr);
  RVector x(nodes);
  for (Index i = 0; i < nodes; ++i) x(i) = (static_cast<double>(i) - static_cast<double>(nodes / 2)) * dx;
  RVector w = RVector::Constant(nodes, dx / 2.0);
  CMatrix atoms = affine_atoms(grid, s, x);
  return SampledContinuousFrame(grid, std::move(x), std::move(w), std::move(atoms), s);
}

SpectralFrameData quadrature_frame_operator(const SampledContinuousFrame& scf) {
  return frame_operator(scf.orthonormal_system());
}

CMatrix grid_operator(const SampledContinuousFrame& scf) {
  return scf.atoms * scf.w.asDiagonal() * scf.atoms.adjoint() * scf.grid.u.asDiagonal();
}

double multiplication_defect(const SampledContinuousFrame& scf) {
  if (!scf.profile) throw Error(ErrorKind::MissingProfile, "multiplication_defect needs a profile");
  CMatrix diff = quadrature_frame_operator(scf).op;
  diff.diagonal() -= scf.profile->cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> refinement_sweep(const RadialGrid& grid, const RVector& s, const std::vector<Index>& nodes) {
  std::vector<double> out;
  for (Index q : nodes) out.push_back(multiplication_defect(affine_system(grid, s, q)));
  return out;
}

std::vector<ScanRow> nonregularity_scan(const SampledContinuousFrame& scf, const std::vector<int>& m_list,
                                        int refinements) {
  if (!scf.profile) throw Error(ErrorKind::MissingProfile, "nonregularity_scan needs a profile");
  if (refinements < 2) throw Error(ErrorKind::InvalidGrid, "nonregularity_scan: refinements >= 2 required");
  const RVector& s = *scf.profile;
  const Index p = scf.points();
  std::vector<Index> cells;
  for (int k = 0; k < refinements; ++k) {
    const double shrink = std::pow(3.0, refinements - 1 - k);
    cells.push_back(std::max<Index>(1, static_cast<Index>(std::floor(static_cast<double>(p) / shrink))));
  }

  std::vector<ScanRow> rows;
  for (int m : m_list) {
    if (m < 0) throw Error(ErrorKind::InvalidGrid, "nonregularity_scan: m >= 0 required");
    ScanRow row;
    row.m = m;
    double sum = 0.0;
    Index j = 0;
    for (Index c : cells) {
      for (; j < c; ++j) {
        if (s(j) == 0.0) continue;
        sum += scf.grid.u(j) * std::norm(scf.atoms(j, 0)) * std::pow(s(j), -m);
      }
      row.cutoffs.push_back(scf.grid.uniform() ? static_cast<double>(c) * scf.grid.dr : scf.grid.r(c - 1));
      row.values.push_back(sum);
    }
    row.divergent = true;
    for (std::size_t k = 1; k < row.values.size(); ++k) {
      row.factors.push_back(row.values[k] / row.values[k - 1]);
      row.divergent = row.divergent && row.factors.back() > kDivergenceFactor;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ContReconstruction cont_reconstruct(const SampledContinuousFrame& scf, const CVector& f) {
  if (f.size() != scf.points()) throw Error(ErrorKind::DimensionMismatch, "f must have one value per grid point");
  const RVector root = sqrt_of(scf.grid.u);
  const CVector ft = root.cast<Complex>().cwiseProduct(f);
  const double norm = ft.norm();
  if (norm == 0.0) return {f, 0.0};

  const VectorSystem sys = scf.orthonormal_system();
  const SpectralFrameData frame = frame_operator(sys);
  if (frame.kernel_fraction(ft) > 1e-8)
    throw Error(ErrorKind::DomainViolation, "f has a component outside the resolved range of S");

  const CVector coeffs = sys.atoms().adjoint() * ft;  // F(x_i) = <psi_i, f>_u
  CVector ht = CVector::Zero(ft.size());
  const CMatrix dual = frame.power(-1.0) * sys.atoms();
  for (Index i = 0; i < scf.nodes(); ++i) ht += scf.w(i) * coeffs(i) * dual.col(i);

  ContReconstruction out;
  out.residual = (ht - ft).norm() / norm;
  out.f_hat = ht.cwiseQuotient(root.cast<Complex>());
  return out;
}

double adjointness_defect(const SampledContinuousFrame& scf, Index probes, std::uint64_t seed) {
  Rng rng(seed);
  const RVector& u = scf.grid.u;
  const RVector& w = scf.w;
  double worst = 0.0;
  for (Index t = 0; t < probes; ++t) {
    CVector big_f = rng.gaussian(scf.nodes());
    big_f /= std::sqrt((w.cast<Complex>().array() * big_f.array().abs2().cast<Complex>()).sum().real());
    CVector f = rng.gaussian(scf.points());
    f /= std::sqrt((u.array() * f.array().abs2()).sum());

    const CVector df = scf.atoms * w.cast<Complex>().cwiseProduct(big_f);
    const CVector cf = scf.atoms.adjoint() * u.cast<Complex>().cwiseProduct(f);
    const Complex lhs = (df.conjugate().array() * u.cast<Complex>().array() * f.array()).sum();
    const Complex rhs = (big_f.conjugate().array() * w.cast<Complex>().array() * cf.array()).sum();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double dual_lower_bound(const SampledContinuousFrame& scf) {
  const VectorSystem sys = scf.orthonormal_system();
  const SpectralFrameData frame = frame_operator(sys);
  require_total(frame, "dual_lower_bound");
  const VectorSystem dual(frame.power(-1.0) * sys.atoms(), sys.weights());
  return optimal_bounds(dual).lower;
}

TruncationFamily affine_truncation_family(int n, double dr, double alpha, std::vector<Index> sizes) {
  CallableParams params;
  params.name = "affine";
  params.realize = [n, dr, alpha](Index size) {
    const RadialGrid grid = make_uniform_grid(n, size, dr * static_cast<double>(size));
    const RVector s = (-alpha * grid.r.array()).exp().matrix();
    return affine_system(grid, s, size).orthonormal_system();
  };
  return TruncationFamily(std::move(params), std::move(sizes));
}

}  // namespace semiframe
