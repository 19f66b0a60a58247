#include "conjlab/sampling.hpp"

#include <cmath>

namespace conjlab {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

namespace {

std::vector<double> random_knots(Rng& rng, int count) {
  std::vector<double> knots;
  double k = std::pow(10.0, rng.uniform(-1.5, 0.5));
  for (int i = 0; i < count; ++i) {
    knots.push_back(k);
    k *= std::pow(10.0, rng.uniform(0.05, 0.6));
  }
  return knots;
}

std::vector<double> random_increasing(Rng& rng, int count, double first) {
  std::vector<double> v{first};
  for (int i = 1; i < count; ++i) {
    const double u = rng.uniform();
    v.push_back(v.back() + (rng.bernoulli(0.1) ? 0.0 : u * u * 2.0));
  }
  return v;
}

}  // namespace

GridFunction random_density(Rng& rng, double lambda) {
  const int count = rng.integer(3, 10);
  auto knots = random_knots(rng, count);
  auto values = random_increasing(rng, count, 0.0);
  if (values.back() == 0.0) values.back() = 1.0;
  const Tail tail = rng.bernoulli(0.3) ? Tail::power(rng.uniform(0.1, 0.6) * lambda) : Tail::constant();
  return GridFunction::make_monotone(std::move(knots), std::move(values), Interpolation::kLinear, tail);
}

GridFunction random_monotone(Rng& rng) {
  const int count = rng.integer(2, 10);
  auto knots = random_knots(rng, count);
  auto values = random_increasing(rng, count, rng.bernoulli(0.5) ? 0.0 : rng.uniform(0.0, 1.0));
  if (values.back() == 0.0) values.back() = 1.0;
  const Interpolation interp = rng.bernoulli(0.5) ? Interpolation::kLinear : Interpolation::kStepLeft;
  return GridFunction::make_monotone(std::move(knots), std::move(values), interp, Tail::constant());
}

}  // namespace conjlab
