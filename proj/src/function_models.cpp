#include "conjlab/function_models.hpp"

#include <algorithm>
#include <cmath>

#include "conjlab/errors.hpp"
#include "conjlab/special_values.hpp"

namespace conjlab {
namespace {

void validate(const std::vector<double>& knots, const std::vector<double>& values, const Tail& tail,
              bool monotone) {
  if (knots.empty()) throw ConstructionError("grid function needs at least one knot", 0);
  if (knots.size() != values.size()) {
    throw ConstructionError("knots and values differ in length", std::min(knots.size(), values.size()));
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i]) || knots[i] < 0.0) throw ConstructionError("knot must be finite and >= 0", i);
    if (i > 0 && !(knots[i] > knots[i - 1])) throw ConstructionError("knots must be strictly increasing", i);
    if (!std::isfinite(values[i])) throw ConstructionError("value must be finite", i);
    if (values[i] < 0.0) throw ConstructionError("value must be >= 0", i);
    if (monotone && i > 0 && values[i] < values[i - 1]) {
      throw ConstructionError("values must be non-decreasing", i);
    }
  }
  if (tail.kind == Tail::Kind::kPower) {
    if (!std::isfinite(tail.exponent)) throw ConstructionError("tail exponent must be finite", knots.size() - 1);
    if (monotone && tail.exponent < 0.0) {
      throw ConstructionError("a decreasing power tail breaks monotonicity", knots.size() - 1);
    }
  }
}

// r - log1p(r), accurate for small |r|.
double r_minus_log1p(double r) {
  if (std::fabs(r) < 0.05) {
    double term = r * r;
    double acc = 0.0;
    for (int k = 2; k < 40; ++k) {
      const double add = ((k % 2) ? -term : term) / k;
      acc += add;
      if (std::fabs(add) <= 1e-18 * std::fabs(acc)) break;
      term *= r;
    }
    return acc;
  }
  return r - std::log1p(r);
}

}  // namespace

GridFunction::GridFunction(std::vector<double> knots, std::vector<double> values, Interpolation interp, Tail tail,
                           bool monotone)
    : knots_(std::move(knots)), values_(std::move(values)), interp_(interp), tail_(tail), monotone_(monotone) {}

GridFunction GridFunction::make_monotone(std::vector<double> knots, std::vector<double> values,
                                         Interpolation interp, Tail tail) {
  validate(knots, values, tail, true);
  return GridFunction(std::move(knots), std::move(values), interp, tail, true);
}

GridFunction GridFunction::make_nonnegative(std::vector<double> knots, std::vector<double> values,
                                            Interpolation interp, Tail tail) {
  validate(knots, values, tail, false);
  return GridFunction(std::move(knots), std::move(values), interp, tail, false);
}

std::ptrdiff_t GridFunction::segment(double x) const {
  if (x < knots_.front()) return -1;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  return (it - knots_.begin()) - 1;
}

double GridFunction::operator()(double x) const {
  const std::ptrdiff_t i = segment(x);
  if (i < 0) return 0.0;
  const auto last = static_cast<std::ptrdiff_t>(knots_.size()) - 1;
  if (i == last) {
    if (tail_.kind == Tail::Kind::kPower && x > knots_.back() && values_.back() != 0.0) {
      return values_.back() * std::pow(x / knots_.back(), tail_.exponent);
    }
    return values_.back();
  }
  if (interp_ == Interpolation::kStepLeft) return values_[i];
  const double w = (x - knots_[i]) / (knots_[i + 1] - knots_[i]);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

bool GridFunction::continuous() const {
  const bool starts_at_zero = knots_.front() == 0.0 || values_.front() == 0.0;
  if (interp_ == Interpolation::kLinear) return starts_at_zero;
  return starts_at_zero &&
         std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
}

GridFunction GridFunction::scaled(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("scale factor must be finite and >= 0");
  std::vector<double> v = values_;
  for (double& x : v) x *= c;
  return GridFunction(knots_, std::move(v), interp_, tail_, monotone_);
}

double PowerLaw::operator()(double x) const {
  if (x <= 0.0) return exponent > 0.0 ? 0.0 : (exponent == 0.0 ? coefficient : INFINITY);
  return coefficient * std::pow(x, exponent);
}

TestFunction::TestFunction(Fn fn, std::vector<double> breaks, double tail_exponent, std::string label)
    : fn_(std::move(fn)), breaks_(std::move(breaks)), tail_exponent_(tail_exponent), label_(std::move(label)) {
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
}

TestFunction TestFunction::from_grid(const GridFunction& g, std::string label) {
  auto shared = std::make_shared<const GridFunction>(g);
  std::vector<double> breaks;
  for (double k : g.knots())
    if (k > 0.0) breaks.push_back(k);
  const double tail =
      g.tail().kind == Tail::Kind::kPower && g.values().back() > 0.0 ? g.tail().exponent : 0.0;
  TestFunction f([shared](double x) { return (*shared)(x); }, std::move(breaks), tail, std::move(label));
  if (g.interpolation() == Interpolation::kStepLeft && g.monotone() &&
      (g.tail().kind == Tail::Kind::kConstant || g.values().back() == 0.0)) {
    StepData steps;
    double previous = 0.0;
    for (std::size_t i = 0; i < g.knots().size(); ++i) {
      const double inc = g.values()[i] - previous;
      previous = g.values()[i];
      if (inc == 0.0) continue;
      steps.jumps.push_back(g.knots()[i]);
      steps.increments.push_back(inc);
    }
    f.steps_ = std::move(steps);
  }
  return f;
}

TestFunction TestFunction::from_power(const PowerLaw& p, std::string label) {
  TestFunction f([p](double x) { return p(x); }, {}, p.exponent, std::move(label));
  f.power_ = p;
  return f;
}

TestFunction TestFunction::from_steps(StepData steps, std::string label) {
  if (steps.jumps.size() != steps.increments.size()) {
    throw ConstructionError("jumps and increments differ in length",
                            std::min(steps.jumps.size(), steps.increments.size()));
  }
  for (std::size_t i = 0; i < steps.jumps.size(); ++i) {
    if (!(steps.jumps[i] > 0.0) || !std::isfinite(steps.jumps[i])) {
      throw ConstructionError("jump knots must be finite and > 0", i);
    }
    if (i > 0 && !(steps.jumps[i] > steps.jumps[i - 1])) {
      throw ConstructionError("jump knots must be strictly increasing", i);
    }
    if (!(steps.increments[i] >= 0.0) || !std::isfinite(steps.increments[i])) {
      throw ConstructionError("increments must be finite and >= 0", i);
    }
  }
  std::vector<double> cumulative(steps.increments.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cumulative.size(); ++i) cumulative[i] = acc += steps.increments[i];
  auto jumps = std::make_shared<const std::vector<double>>(steps.jumps);
  auto values = std::make_shared<const std::vector<double>>(std::move(cumulative));
  TestFunction f(
      [jumps, values](double x) {
        const auto it = std::upper_bound(jumps->begin(), jumps->end(), x);
        const auto k = it - jumps->begin();
        return k == 0 ? 0.0 : (*values)[k - 1];
      },
      steps.jumps, 0.0, std::move(label));
  f.steps_ = std::move(steps);
  return f;
}

TestFunction TestFunction::scaled(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("scale factor must be finite and >= 0");
  TestFunction f([inner = fn_, c](double x) { return c * inner(x); }, breaks_, tail_exponent_, label_);
  if (steps_) {
    StepData s = *steps_;
    for (double& d : s.increments) d *= c;
    f.steps_ = std::move(s);
  }
  if (power_) f.power_ = PowerLaw{power_->coefficient * c, power_->exponent};
  return f;
}

LogConvexS::LogConvexS(GridFunction s) : s_(std::make_shared<const GridFunction>(std::move(s))) {
  const GridFunction& g = *s_;
  if (!g.monotone()) throw ConstructionError("the density s must be non-decreasing", 0);
  const auto knots = g.knots();
  const auto values = g.values();
  if (knots.front() == 0.0 && values.front() > 0.0) {
    throw DivergenceError("s(0+) > 0 with no vanishing window: s(t)/t is not integrable at 0");
  }
  cumulative_.assign(knots.size(), 0.0);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) cumulative_[i + 1] = cumulative_[i] + segment_integral(i, knots[i + 1]);

  std::vector<double> grid;
  double lo = 1e-3;
  for (double k : knots)
    if (k > 0.0) {
      lo = k / 10.0;
      break;
    }
  const double hi = std::max(knots.back(), lo * 100.0) * 10.0;
  for (int i = 0; i <= 256; ++i) grid.push_back(std::log(lo) + (std::log(hi) - std::log(lo)) * i / 256.0);
  if (min_log_second_difference(grid) < -1e-9) {
    throw ConstructionError("x -> S(e^x) failed the convexity self-check", 0);
  }
}

// \int_{knots[i]}^{x} s(t)/t dt for x in segment i (the tail when i is last).
double LogConvexS::segment_integral(std::size_t i, double x) const {
  const GridFunction& g = *s_;
  const auto knots = g.knots();
  const auto values = g.values();
  const double k = knots[i];
  const double v = values[i];
  if (x <= k) return 0.0;
  if (i + 1 == knots.size()) {
    if (g.tail().kind == Tail::Kind::kPower && g.tail().exponent != 0.0 && v != 0.0) {
      const double p = g.tail().exponent;
      return v / p * std::expm1(p * std::log(x / k));
    }
    return v * std::log(x / k);
  }
  if (k == 0.0) {
    // s vanishes at 0; linear s(t) = m t, step s = 0 on [0, knots[1]).
    if (g.interpolation() == Interpolation::kStepLeft) return 0.0;
    const double m = (values[i + 1] - v) / knots[i + 1];
    return m * x;
  }
  const double r = (x - k) / k;
  if (g.interpolation() == Interpolation::kStepLeft) return v * std::log1p(r);
  const double m = (values[i + 1] - v) / (knots[i + 1] - k);
  // v ln(x/k) + m ((x - k) - k ln(x/k))
  return v * std::log1p(r) + m * k * r_minus_log1p(r);
}

double LogConvexS::operator()(double x) const {
  const std::ptrdiff_t i = s_->segment(x);
  if (i < 0) return 0.0;
  return cumulative_[i] + segment_integral(static_cast<std::size_t>(i), x);
}

double LogConvexS::min_log_second_difference(std::span<const double> log_grid) const {
  double worst = INFINITY;
  for (std::size_t j = 1; j + 1 < log_grid.size(); ++j) {
    const double a = (*this)(std::exp(log_grid[j - 1]));
    const double b = (*this)(std::exp(log_grid[j]));
    const double c = (*this)(std::exp(log_grid[j + 1]));
    const double scale = std::fabs(a) + 2.0 * std::fabs(b) + std::fabs(c);
    if (scale == 0.0) continue;
    worst = std::min(worst, (a - 2.0 * b + c) / scale);
  }
  return std::isinf(worst) ? 0.0 : worst;
}

TestFunction LogConvexS::as_function(std::string label) const {
  auto self = std::make_shared<const LogConvexS>(*this);
  std::vector<double> breaks;
  for (double k : s_->knots())
    if (k > 0.0) breaks.push_back(k);
  const double tail = s_->tail().kind == Tail::Kind::kPower && s_->values().back() > 0.0 ? s_->tail().exponent : 0.0;
  return TestFunction([self](double x) { return (*self)(x); }, std::move(breaks), tail, std::move(label));
}

LogConvexS s_to_S(const GridFunction& s) { return LogConvexS(s); }

PowerLaw extremal_power(const Params& params, Form form) {
  params.require(form);
  const int n = params.n();
  const double alpha = params.alpha();
  const double p = product_factor(alpha, n);
  switch (form) {
    case Form::kForm1:
      return {2.0 * (n - 1) * p, params.lambda()};
    case Form::kForm2:
      return {alpha * p, alpha};
    case Form::kForm3:
      return {alpha * alpha * p, alpha - 1.0};
  }
  throw DomainError("invalid formulation");
}

TestFunction extremal(const Params& params, Form form) {
  return TestFunction::from_power(extremal_power(params, form), "extremal");
}

}  // namespace conjlab
