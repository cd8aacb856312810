#pragma once

#include <cstdint>
#include <vector>

#include "semiframe/calculus.hpp"

namespace semiframe {

// Weighted closed subspaces of C^d, each given by an orthonormal basis matrix.
class FusionSystem {
 public:
  FusionSystem(Index dim, std::vector<CMatrix> blocks, std::vector<double> weights);

  Index dim() const { return dim_; }
  Index count() const { return static_cast<Index>(blocks_.size()); }
  const std::vector<CMatrix>& blocks() const { return blocks_; }
  const std::vector<double>& weights() const { return weights_; }

  CMatrix projection(Index j) const { return blocks_[j] * blocks_[j].adjoint(); }

  // Analysis f -> (v_j B_j^* f)_j, stacked.
  CVector analysis(const CVector& f) const;
  // Adjoint of analysis.
  CVector synthesis(const CVector& stacked) const;
  // sum_j v_j^2 |pi_j f|^2
  double quadratic_form(const CVector& f) const;

 private:
  Index dim_;
  std::vector<CMatrix> blocks_;
  std::vector<double> weights_;
};

// Orthonormal basis of the column span, rank cut at 1e-12 * largest singular value.
CMatrix orthonormal_span(const CMatrix& vectors);

SpectralFrameData fusion_operator(const FusionSystem& fs);
BoundsReport fusion_operator_bounds(const FusionSystem& fs);

struct LocalBounds {
  double lower = 0.0;
  double upper = 0.0;
  Index rank = 0;
};

struct SandwichCertificate {
  double lower_constant = 0.0;  // m / M_sup
  double upper_constant = 0.0;  // M / m_inf
  Index probes = 0;
  double max_violation = 0.0;   // worst relative breach, 0 when none
  bool holds = false;
};

struct FusionFromFrame {
  // Block subspaces carrying the block weights v_j of the weighted system;
  // its quadratic form obeys m/M_sup <= sum v_j^2 |pi_j f|^2 <= M/m_inf.
  FusionSystem fusion;
  // Same subspaces with weights v_j sqrt(m_j): an upper fusion semi-frame with bound M.
  FusionSystem upper_semi_frame;
  std::vector<LocalBounds> local;
  // Block atoms in block coordinates; frame_from_fusion(fusion, local_systems) rebuilds sys.
  std::vector<VectorSystem> local_systems;
  double lower = 0.0;  // m of the system
  double upper = 0.0;  // M of the system
  double m_inf = 0.0;
  double M_sup = 0.0;
  SandwichCertificate sandwich;
  double semi_frame_max_ratio = 0.0;  // max over probes of q(f) / (M |f|^2) for upper_semi_frame
};

inline constexpr double kFusionSlack = 1e-9;

// `partition` lists 0-based atom indices per block; it must cover 0..N-1 exactly once.
FusionFromFrame fusion_from_frame(const VectorSystem& sys, const std::vector<std::vector<Index>>& partition,
                                  Index probes = 200, std::uint64_t seed = 13);

struct FrameFromFusion {
  VectorSystem system;       // atoms B_j psi_ij with weights v_j * local weights
  double local_upper = 0.0;  // M = max_j M_j
  double fusion_upper = 0.0; // B
  double certified = 0.0;    // M * B
  double actual_upper = 0.0;
  double max_ratio = 0.0;    // max over probes of form / (M B |f|^2)
  bool holds = false;
};

// `local` holds one system per block, written in the block's coordinates (dimension r_j).
FrameFromFusion frame_from_fusion(const FusionSystem& fs, const std::vector<VectorSystem>& local,
                                  Index probes = 200, std::uint64_t seed = 17);

}  // namespace semiframe
