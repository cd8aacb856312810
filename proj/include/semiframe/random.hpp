#pragma once

#include <cstdint>
#include <random>

#include "semiframe/atoms.hpp"

namespace semiframe {

// Seeded source of the random probes, systems and transforms used by the
// checks. Same seed, same stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  Index uniform_int(Index lo, Index hi) {
    return std::uniform_int_distribution<Index>(lo, hi)(engine_);
  }

  // Entries with independent standard normal real and imaginary parts.
  CMatrix gaussian(Index rows, Index cols);
  CVector gaussian(Index n) { return gaussian(n, 1).col(0); }
  CVector unit_vector(Index n);

  // Haar-distributed unitary.
  CMatrix unitary(Index n);
  // U diag(s) V* with singular values in [lo, hi], both extremes attained.
  CMatrix conditioned(Index n, double lo, double hi);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// d x N Gaussian atoms; total almost surely when N >= d.
VectorSystem random_system(Rng& rng, Index dim, Index count);

}  // namespace semiframe
