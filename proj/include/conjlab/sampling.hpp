// Seeded generators of admissible test functions for the randomized suites.
#pragma once

#include <cstdint>
#include <random>

#include "conjlab/function_models.hpp"

namespace conjlab {

// mt19937_64 with a hand-rolled double mapping.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  int integer(int lo, int hi);  // inclusive
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Continuous piecewise-linear increasing density s with s = 0 at its first
/// knot (so s(t)/t is integrable and q = h' has no atoms). The tail is
/// constant, or a power t^p with p in [0.1, 0.6] * lambda.
GridFunction random_density(Rng& rng, double lambda);

/// Increasing S >= 0 with S = 0 below its first knot, not necessarily
/// log-convex: random linear or step interpolation, constant tail.
GridFunction random_monotone(Rng& rng);

}  // namespace conjlab
