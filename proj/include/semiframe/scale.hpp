#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "semiframe/calculus.hpp"

namespace semiframe {

enum class ScaleSide { Vector, Coefficient };

struct ScaleNorm {
  Index n = 0;
  double value = 0.0;
  ScaleSide side = ScaleSide::Vector;
};

// The two Hilbert scales of a total system at a snapshot:
//   H_n = Dom(S^{-n/2}),  |f|_n = |S^{-n/2} f|
//   frakH_n = Dom(G^{-n/2}) inside range(C),  |c|_n = <c, G^{-n} c>^{1/2}
// Negative indices give the distributional side as ordinary norms.
class HilbertScale {
 public:
  explicit HilbertScale(const VectorSystem& sys);

  const VectorSystem& system() const { return sys_; }
  const SpectralFrameData& frame() const { return frame_; }
  const SpectralFrameData& gram() const { return gram_; }

  CVector vector_power(const CVector& f, double p) const { return frame_.apply_power(f, p); }
  // Applies G^p after checking c lies in range(C).
  CVector coefficient_power(const CVector& c, double p) const;

  double vector_norm(const CVector& f, Index n) const;
  double coefficient_norm(const CVector& c, Index n) const;
  Complex vector_inner(const CVector& f, const CVector& g, Index n) const;
  Complex coefficient_inner(const CVector& c, const CVector& e, Index n) const;

 private:
  VectorSystem sys_;
  SpectralFrameData frame_;
  SpectralFrameData gram_;
};

inline constexpr Index kDefaultScaleMax = 8;

ScaleNorm scale_norm(const VectorSystem& sys, const CVector& f, Index n);
ScaleNorm seq_scale_norm(const VectorSystem& sys, const CVector& c, Index n);

// max over random pairs of |<Cf,Cg>_{frakH_{n+1}} - <f,g>_{H_n}| / (|f|_n |g|_n)
double isometry_defect(const VectorSystem& sys, Index n, Index trials, std::uint64_t seed = 7);

struct TransportedSystem {
  VectorSystem system;  // atoms S^{n/2} psi_k
  BoundsReport bounds;  // bounds of the transported atoms in H_n
};
TransportedSystem transported_system(const VectorSystem& sys, Index n);

struct WeakReconstruction {
  CVector value;
  double residual = 0.0;  // relative, in the H_{-m} norm
};
// f-hat = sum_k <psi_k, S^{-1} f> psi_k
WeakReconstruction weak_reconstruct(const VectorSystem& sys, const CVector& f, Index m);

// Closed-form coefficient sequence c_k, k = 1, 2, ...
struct CoeffRule {
  enum class Kind { Power, Exponential, Finite };
  Kind kind = Kind::Power;
  double param = 0.0;  // exponent, decay rate, or support length

  Complex operator()(Index k) const;
  std::string tag() const;
  static CoeffRule parse(std::string_view tag);
};

enum class GrowthTag { FastDecreasing, PolynomialOrder, Divergent };
std::string_view to_string(GrowthTag t);

struct EndSpaceProbe {
  std::vector<std::pair<Index, double>> ladder;  // (n, |c|_n) at the largest size
  std::vector<std::vector<double>> norms;        // norms[n][size index]
  std::vector<bool> converged;                   // per n
  GrowthTag tag = GrowthTag::Divergent;
  Index order = -1;                              // p for PolynomialOrder
};

struct EndSpaceOptions {
  double cauchy_gap = 1e-6;       // relative gap between the two largest sizes
  double geometric_ratio = 0.75;  // shrinking increments also count as convergent
};

EndSpaceProbe end_space_probe(const TruncationFamily& family, const CoeffRule& rule, Index n_max,
                              const EndSpaceOptions& options = {});

}  // namespace semiframe
