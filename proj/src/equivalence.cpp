#include "semiframe/equivalence.hpp"

#include <algorithm>
#include <cmath>

namespace semiframe {

namespace {

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_same_shape(const RankNSystem& a, const RankNSystem& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank() || a.points() != b.points())
    throw Error(ErrorKind::DimensionMismatch, "rank-n systems differ in shape");
}

void require_invertible(const CMatrix& t, Index d) {
  if (t.rows() != d || t.cols() != d) throw Error(ErrorKind::DimensionMismatch, "T must be d x d");
  Eigen::JacobiSVD<CMatrix> svd(t);
  const RVector& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-12 * s(0))) throw Error(ErrorKind::NotInvertible, "T is singular");
}

void require_unitaries(const std::vector<CMatrix>& u, Index points, Index n) {
  if (static_cast<Index>(u.size()) != points) throw Error(ErrorKind::DimensionMismatch, "one U(x) per point required");
  for (std::size_t x = 0; x < u.size(); ++x) {
    if (u[x].rows() != n || u[x].cols() != n) throw Error(ErrorKind::DimensionMismatch, "U(x) must be n x n");
    if ((u[x].adjoint() * u[x] - CMatrix::Identity(n, n)).norm() > kUnitaryTolerance)
      throw Error(ErrorKind::NotUnitary, "U(" + std::to_string(x) + ") is not unitary");
  }
}

double measure_defect(const RankNSystem& a, const RankNSystem& b) {
  double d = 0.0;
  for (Index x = 0; x < a.points(); ++x) d = std::max(d, std::abs(a.measure()[x] - b.measure()[x]));
  return d;
}

// max |Kb(x,y) - conj(U(x)) Ka(x,y) U(y)^T|
double kernel_gauge_defect(const CMatrix& ka, const CMatrix& kb, const std::vector<CMatrix>& u, Index n) {
  double d = 0.0;
  const Index q = static_cast<Index>(u.size());
  for (Index x = 0; x < q; ++x)
    for (Index y = 0; y < q; ++y) {
      const CMatrix expected = u[x].conjugate() * kernel_block(ka, n, x, y) * u[y].transpose();
      d = std::max(d, max_abs(kernel_block(kb, n, x, y) - expected));
    }
  return d;
}

std::vector<CMatrix> identities(Index count, Index n) { return std::vector<CMatrix>(count, CMatrix::Identity(n, n)); }

}  // namespace

RankNSystem::RankNSystem(Index dim, std::vector<CMatrix> blocks, std::vector<double> measure)
    : dim_(dim), rank_(0), blocks_(std::move(blocks)), measure_(std::move(measure)) {
  if (dim_ < 1) throw Error(ErrorKind::DimensionMismatch, "d ≥ 1 required");
  if (blocks_.empty()) throw Error(ErrorKind::InvalidFamily, "rank-n system needs at least one point");
  if (measure_.size() != blocks_.size()) throw Error(ErrorKind::DimensionMismatch, "one measure weight per point required");
  rank_ = blocks_.front().cols();
  for (std::size_t x = 0; x < blocks_.size(); ++x) {
    const CMatrix& b = blocks_[x];
    if (b.rows() != dim_ || b.cols() != rank_ || rank_ < 1 || rank_ > dim_)
      throw Error(ErrorKind::DimensionMismatch, "block " + std::to_string(x) + " must be d x n");
    if (!(measure_[x] > 0.0) || !std::isfinite(measure_[x]))
      throw Error(ErrorKind::InvalidWeight, "measure weights must be positive");
    Eigen::JacobiSVD<CMatrix> svd(b);
    const RVector& s = svd.singularValues();
    if (!(s(s.size() - 1) > 1e-12 * s(0))) throw Error(ErrorKind::DimensionMismatch, "block " + std::to_string(x) + " is rank deficient");
  }
}

RankNSystem RankNSystem::orthonormal(Index dim, std::vector<CMatrix> blocks, std::vector<double> measure) {
  RankNSystem rs(dim, std::move(blocks), std::move(measure));
  if (!rs.is_orthonormal()) throw Error(ErrorKind::NotOrthonormal, "blocks must have orthonormal columns");
  return rs;
}

bool RankNSystem::is_orthonormal(double tol) const {
  return std::all_of(blocks_.begin(), blocks_.end(), [&](const CMatrix& b) {
    return (b.adjoint() * b - CMatrix::Identity(rank_, rank_)).norm() <= tol;
  });
}

VectorSystem RankNSystem::as_vector_system() const {
  CMatrix atoms(dim_, rank_ * points());
  RVector weights(rank_ * points());
  for (Index x = 0; x < points(); ++x) {
    atoms.middleCols(x * rank_, rank_) = blocks_[x];
    weights.segment(x * rank_, rank_).setConstant(std::sqrt(measure_[x]));
  }
  return VectorSystem(std::move(atoms), std::move(weights), "rank-n");
}

SpectralFrameData RankNSystem::frame_operator() const {
  CMatrix s = CMatrix::Zero(dim_, dim_);
  for (Index x = 0; x < points(); ++x) s += measure_[x] * lambda(x);
  return spectral_decomposition(s);
}

CMatrix RankNSystem::kernel_matrix() const {
  const CMatrix all = as_vector_system().atoms();
  return all.adjoint() * frame_operator().power(-1.0) * all;
}

CMatrix frame_kernel(const RankNSystem& rs) {
  require_total(rs.frame_operator(), "frame_kernel");
  return rs.kernel_matrix();
}

CMatrix kernel_block(const CMatrix& kernel, Index rank, Index x, Index y) {
  return kernel.block(x * rank, y * rank, rank, rank);
}

EquivalenceReport check_kernel_equivalent(const RankNSystem& a, const RankNSystem& b, const CMatrix& t,
                                          const std::vector<CMatrix>& u) {
  require_same_shape(a, b);
  require_invertible(t, a.dim());
  require_unitaries(u, a.points(), a.rank());

  EquivalenceReport r;
  r.relation = "kernel";
  double defect = measure_defect(a, b);
  for (Index x = 0; x < a.points(); ++x)
    defect = std::max(defect, max_abs(b.blocks()[x] - t * a.blocks()[x] * u[x].transpose()));

  const SpectralFrameData sa = a.frame_operator();
  const SpectralFrameData sb = b.frame_operator();
  defect = std::max(defect, max_abs(sb.op - t * sa.op * t.adjoint()));
  defect = std::max(defect, kernel_gauge_defect(a.kernel_matrix(), b.kernel_matrix(), u, a.rank()));

  r.max_defect = defect;
  r.pass = defect <= kEquivalenceTolerance;
  r.unitary = (t.adjoint() * t - CMatrix::Identity(a.dim(), a.dim())).norm() <= kUnitaryTolerance;
  r.excluded_dim = std::max(a.dim() - sa.rank, b.dim() - sb.rank);
  return r;
}

EquivalenceReport check_similar(const RankNSystem& a, const RankNSystem& b, const CMatrix& t) {
  require_same_shape(a, b);
  EquivalenceReport r = check_kernel_equivalent(a, b, t, identities(a.points(), a.rank()));
  r.relation = "similar";
  return r;
}

EquivalenceReport check_gauge(const RankNSystem& a, const RankNSystem& b, const std::vector<CMatrix>& u) {
  require_same_shape(a, b);
  EquivalenceReport r = check_kernel_equivalent(a, b, CMatrix::Identity(a.dim(), a.dim()), u);
  r.relation = "gauge";
  double defect = r.max_defect;
  for (Index x = 0; x < a.points(); ++x) defect = std::max(defect, max_abs(b.lambda(x) - a.lambda(x)));
  r.max_defect = defect;
  r.pass = defect <= kEquivalenceTolerance;
  r.unitary = true;
  return r;
}

ConstancyFit constancy_fit(const RankNSystem& a, const std::vector<CMatrix>& t) {
  const Index d = a.dim();
  CMatrix lhs = CMatrix::Zero(d, d);
  CMatrix gram = CMatrix::Zero(d, d);
  for (Index x = 0; x < a.points(); ++x) {
    const CMatrix l = a.lambda(x);
    lhs += t[x] * l * l.adjoint();
    gram += l * l.adjoint();
  }
  ConstancyFit fit;
  fit.t = lhs * spectral_decomposition(gram).power(-1.0);
  double num = 0.0;
  double den = 0.0;
  for (Index x = 0; x < a.points(); ++x) {
    const CMatrix l = a.lambda(x);
    num += (t[x] * l - fit.t * l).squaredNorm();
    den += (t[x] * l).squaredNorm();
  }
  fit.residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return fit;
}

EquivalenceReport check_bundle(const RankNSystem& a, const RankNSystem& b, const std::vector<CMatrix>& t) {
  require_same_shape(a, b);
  if (static_cast<Index>(t.size()) != a.points()) throw Error(ErrorKind::DimensionMismatch, "one T(x) per point required");
  for (const CMatrix& tx : t)
    if (tx.rows() != a.dim() || tx.cols() != a.dim()) throw Error(ErrorKind::DimensionMismatch, "T(x) must be d x d");

  EquivalenceReport r;
  r.relation = "bundle";
  double defect = 0.0;
  for (Index x = 0; x < a.points(); ++x)
    defect = std::max(defect, max_abs(b.lambda(x) - t[x] * a.lambda(x) * t[x].adjoint()));
  r.max_defect = defect;
  r.pass = defect <= kEquivalenceTolerance;

  const ConstancyFit fit = constancy_fit(a, t);
  r.fit_residual = fit.residual;
  if (r.pass && fit.residual <= kConstancyThreshold) r.downgrade = "kernel";
  r.excluded_dim = std::max(a.dim() - a.frame_operator().rank, b.dim() - b.frame_operator().rank);
  return r;
}

FusionSystem to_fusion(const RankNSystem& rs, const std::vector<std::vector<Index>>& cells) {
  if (!rs.is_orthonormal()) throw Error(ErrorKind::NotOrthonormal, "to_fusion needs orthonormal blocks");
  std::vector<int> seen(rs.points(), 0);
  std::vector<CMatrix> blocks;
  std::vector<double> weights;
  for (const auto& cell : cells) {
    if (cell.empty()) throw Error(ErrorKind::InvalidPartition, "empty cell");
    const CMatrix l0 = rs.lambda(cell.front());
    double mass = 0.0;
    for (Index x : cell) {
      if (x < 0 || x >= rs.points() || seen[x]++) throw Error(ErrorKind::InvalidPartition, "cells must partition the points");
      if ((rs.lambda(x) - l0).cwiseAbs().maxCoeff() > 1e-9)
        throw Error(ErrorKind::InvalidPartition, "Lambda is not constant on a cell");
      mass += rs.measure()[x];
    }
    blocks.push_back(rs.blocks()[cell.front()]);
    weights.push_back(std::sqrt(mass));
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c == 0; }))
    throw Error(ErrorKind::InvalidPartition, "cells must cover every point");
  return FusionSystem(rs.dim(), std::move(blocks), std::move(weights));
}

}  // namespace semiframe
