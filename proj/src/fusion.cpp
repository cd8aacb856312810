#include "semiframe/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "semiframe/random.hpp"

namespace semiframe {

FusionSystem::FusionSystem(Index dim, std::vector<CMatrix> blocks, std::vector<double> weights)
    : dim_(dim), blocks_(std::move(blocks)), weights_(std::move(weights)) {
  if (dim_ < 1) throw Error(ErrorKind::DimensionMismatch, "d ≥ 1 required");
  if (blocks_.empty()) throw Error(ErrorKind::InvalidPartition, "fusion system needs at least one block");
  if (weights_.size() != blocks_.size())
    throw Error(ErrorKind::DimensionMismatch, "one weight per block required");
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const CMatrix& b = blocks_[j];
    if (b.rows() != dim_ || b.cols() < 1 || b.cols() > dim_)
      throw Error(ErrorKind::DimensionMismatch, "block " + std::to_string(j) + " must be d x r with 1 <= r <= d");
    const double defect = (b.adjoint() * b - CMatrix::Identity(b.cols(), b.cols())).norm();
    if (defect > 1e-9)
      throw Error(ErrorKind::NotOrthonormal, "block " + std::to_string(j) + " columns are not orthonormal");
    if (!(weights_[j] > 0.0)) throw Error(ErrorKind::InvalidWeight, "fusion weights must be positive");
  }
}

CVector FusionSystem::analysis(const CVector& f) const {
  if (f.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "vector length must be d");
  Index total = 0;
  for (const auto& b : blocks_) total += b.cols();
  CVector out(total);
  Index offset = 0;
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    out.segment(offset, blocks_[j].cols()) = weights_[j] * (blocks_[j].adjoint() * f);
    offset += blocks_[j].cols();
  }
  return out;
}

CVector FusionSystem::synthesis(const CVector& stacked) const {
  CVector out = CVector::Zero(dim_);
  Index offset = 0;
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const Index r = blocks_[j].cols();
    if (offset + r > stacked.size()) throw Error(ErrorKind::DimensionMismatch, "stacked vector too short");
    out += weights_[j] * (blocks_[j] * stacked.segment(offset, r));
    offset += r;
  }
  if (offset != stacked.size()) throw Error(ErrorKind::DimensionMismatch, "stacked vector too long");
  return out;
}

double FusionSystem::quadratic_form(const CVector& f) const {
  double q = 0.0;
  for (std::size_t j = 0; j < blocks_.size(); ++j)
    q += weights_[j] * weights_[j] * (blocks_[j].adjoint() * f).squaredNorm();
  return q;
}

CMatrix orthonormal_span(const CMatrix& vectors) {
  Eigen::JacobiSVD<CMatrix> svd(vectors, Eigen::ComputeThinU);
  const RVector& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) return CMatrix(vectors.rows(), 0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > 1e-12 * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

SpectralFrameData fusion_operator(const FusionSystem& fs) {
  CMatrix s = CMatrix::Zero(fs.dim(), fs.dim());
  for (Index j = 0; j < fs.count(); ++j) {
    const double w2 = fs.weights()[j] * fs.weights()[j];
    s += w2 * fs.projection(j);
  }
  return spectral_decomposition(s);
}

BoundsReport fusion_operator_bounds(const FusionSystem& fs) {
  Index total_rank = 0;
  for (const auto& b : fs.blocks()) total_rank += b.cols();
  return bounds_from_spectrum(fusion_operator(fs), total_rank);
}

FusionFromFrame fusion_from_frame(const VectorSystem& sys, const std::vector<std::vector<Index>>& partition,
                                  Index probes, std::uint64_t seed) {
  const Index n = sys.size();
  std::vector<int> seen(n, 0);
  for (const auto& block : partition) {
    if (block.empty()) throw Error(ErrorKind::InvalidPartition, "empty block in partition");
    for (Index k : block) {
      if (k < 0 || k >= n) throw Error(ErrorKind::InvalidPartition, "partition index " + std::to_string(k) + " out of range");
      if (seen[k]++) throw Error(ErrorKind::InvalidPartition, "atom " + std::to_string(k) + " appears twice");
    }
  }
  if (partition.empty() || std::any_of(seen.begin(), seen.end(), [](int c) { return c == 0; }))
    throw Error(ErrorKind::InvalidPartition, "partition must cover every atom");

  const BoundsReport global = optimal_bounds(sys);
  std::vector<CMatrix> bases;
  std::vector<double> block_weights;
  std::vector<LocalBounds> local;
  std::vector<VectorSystem> local_systems;
  for (const auto& block : partition) {
    // Block weight v_j when |weights| are constant on the block; otherwise the
    // weights are folded into the atoms and v_j = 1.
    const double w0 = std::abs(sys.weights()(block.front()));
    const bool constant = std::all_of(block.begin(), block.end(),
                                      [&](Index k) { return std::abs(sys.weights()(k)) == w0; });
    const double vj = constant ? w0 : 1.0;
    CMatrix atoms(sys.dim(), static_cast<Index>(block.size()));
    for (std::size_t i = 0; i < block.size(); ++i)
      atoms.col(static_cast<Index>(i)) = sys.atom(block[i]) * (constant ? 1.0 : sys.weights()(block[i]));

    CMatrix basis = orthonormal_span(atoms);
    if (basis.cols() == 0) throw Error(ErrorKind::InvalidPartition, "block atoms span the zero subspace");
    // Local frame operator restricted to the block span.
    const CMatrix coords = basis.adjoint() * atoms;
    const SpectralFrameData restricted = spectral_decomposition(coords * coords.adjoint());
    local_systems.emplace_back(coords);
    local.push_back({restricted.eigenvalues(restricted.dim() - 1), restricted.top(), restricted.rank});
    bases.push_back(std::move(basis));
    block_weights.push_back(vj);
  }

  FusionFromFrame out{FusionSystem(sys.dim(), bases, block_weights),
                      FusionSystem(sys.dim(), bases, block_weights),
                      local,
                      local_systems,
                      global.lower,
                      global.upper,
                      0.0,
                      0.0,
                      {},
                      0.0};
  out.m_inf = std::min_element(local.begin(), local.end(), [](auto& a, auto& b) { return a.lower < b.lower; })->lower;
  out.M_sup = std::max_element(local.begin(), local.end(), [](auto& a, auto& b) { return a.upper < b.upper; })->upper;

  std::vector<double> semi_weights;
  for (std::size_t j = 0; j < local.size(); ++j) semi_weights.push_back(block_weights[j] * std::sqrt(local[j].lower));
  out.upper_semi_frame = FusionSystem(sys.dim(), bases, semi_weights);

  SandwichCertificate& cert = out.sandwich;
  cert.lower_constant = out.lower / out.M_sup;
  cert.upper_constant = out.upper / out.m_inf;
  cert.probes = probes;
  Rng rng(seed);
  for (Index t = 0; t < probes; ++t) {
    const CVector f = rng.unit_vector(sys.dim());
    const double q = out.fusion.quadratic_form(f);
    const double below = (cert.lower_constant - q) / cert.lower_constant;
    const double above = (q - cert.upper_constant) / cert.upper_constant;
    cert.max_violation = std::max({cert.max_violation, below, above});
    out.semi_frame_max_ratio = std::max(out.semi_frame_max_ratio, out.upper_semi_frame.quadratic_form(f) / out.upper);
  }
  cert.holds = cert.max_violation <= kFusionSlack;
  return out;
}

FrameFromFusion frame_from_fusion(const FusionSystem& fs, const std::vector<VectorSystem>& local,
                                  Index probes, std::uint64_t seed) {
  if (static_cast<Index>(local.size()) != fs.count())
    throw Error(ErrorKind::DimensionMismatch, "one local system per block required");
  Index total = 0;
  for (std::size_t j = 0; j < local.size(); ++j) {
    if (local[j].dim() != fs.blocks()[j].cols())
      throw Error(ErrorKind::DimensionMismatch, "local system " + std::to_string(j) + " has dimension " +
                                                    std::to_string(local[j].dim()) + ", block rank is " +
                                                    std::to_string(fs.blocks()[j].cols()));
    total += local[j].size();
  }

  CMatrix atoms(fs.dim(), total);
  RVector weights(total);
  FrameFromFusion out{VectorSystem(CMatrix::Identity(1, 1)), 0.0, 0.0, 0.0, 0.0, 0.0, false};
  Index offset = 0;
  for (std::size_t j = 0; j < local.size(); ++j) {
    const VectorSystem& sys = local[j];
    out.local_upper = std::max(out.local_upper, optimal_bounds(sys).upper);
    atoms.middleCols(offset, sys.size()) = fs.blocks()[j] * sys.atoms();
    weights.segment(offset, sys.size()) = fs.weights()[j] * sys.weights();
    offset += sys.size();
  }
  out.system = VectorSystem(std::move(atoms), std::move(weights), "frame_from_fusion");
  out.fusion_upper = fusion_operator_bounds(fs).upper;
  out.certified = out.local_upper * out.fusion_upper;
  out.actual_upper = optimal_bounds(out.system).upper;

  Rng rng(seed);
  const CMatrix synth = out.system.synthesis_matrix();
  for (Index t = 0; t < probes; ++t) {
    const CVector f = rng.unit_vector(fs.dim());
    out.max_ratio = std::max(out.max_ratio, (synth.adjoint() * f).squaredNorm() / out.certified);
  }
  out.holds = out.max_ratio <= 1.0 + kFusionSlack && out.actual_upper <= out.certified * (1.0 + kFusionSlack);
  return out;
}

}  // namespace semiframe
