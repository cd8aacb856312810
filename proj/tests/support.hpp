#pragma once

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "semiframe/atoms.hpp"
#include "semiframe/calculus.hpp"
#include "semiframe/random.hpp"

namespace testing {

using namespace semiframe;

inline VectorSystem diag_system(Index n, double power = -1.0) {
  std::vector<double> w(n);
  for (Index k = 0; k < n; ++k) w[k] = std::pow(static_cast<double>(k + 1), power);
  return make_weighted_diag(w, n);
}

inline VectorSystem onb(Index d) { return VectorSystem(CMatrix::Identity(d, d)); }

// Random system that is total with overwhelming probability; weights in [0.5, 2].
inline VectorSystem random_frame(Rng& rng, Index d, Index n, bool weighted = false) {
  RVector w;
  if (weighted) {
    w.resize(n);
    for (Index k = 0; k < n; ++k) w(k) = rng.uniform(0.5, 2.0) * (rng.uniform(0, 1) < 0.5 ? -1.0 : 1.0);
  }
  return VectorSystem(rng.gaussian(d, n), w);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline TruncationFamily diag_family(const char* rule, std::vector<Index> sizes) {
  return TruncationFamily(DiagParams{WeightRule::parse(rule)}, std::move(sizes));
}

}  // namespace testing
