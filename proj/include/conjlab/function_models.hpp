// Finite representations of the admissible test-function classes.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conjlab/params.hpp"

namespace conjlab {

enum class Interpolation { kLinear, kStepLeft };

struct Tail {
  enum class Kind { kConstant, kPower };
  Kind kind = Kind::kConstant;
  double exponent = 0.0;

  static Tail constant() { return {}; }
  static Tail power(double p) { return {Kind::kPower, p}; }
};

/// Nonnegative function given by values on strictly increasing knots.
///
/// Below the first knot the function is 0. kLinear interpolates between
/// knots; kStepLeft holds values[i] on [knots[i], knots[i+1]). Past the last
/// knot the tail is either constant or values.back() * (x / knots.back())^p.
class GridFunction {
 public:
  // Knots strictly increasing and >= 0, values finite, >= 0 and non-decreasing
  // (ties allowed). Throws ConstructionError carrying the first bad index.
  static GridFunction make_monotone(std::vector<double> knots, std::vector<double> values,
                                    Interpolation interp, Tail tail = Tail::constant());

  // Same checks without the ordering of values (the q class).
  static GridFunction make_nonnegative(std::vector<double> knots, std::vector<double> values,
                                       Interpolation interp, Tail tail = Tail::constant());

  double operator()(double x) const;

  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }
  Interpolation interpolation() const { return interp_; }
  const Tail& tail() const { return tail_; }
  bool monotone() const { return monotone_; }

  // Index of the segment [knots[i], knots[i+1]) containing x, or -1 below the
  // first knot, or size()-1 in the tail.
  std::ptrdiff_t segment(double x) const;

  // True when the function has no jump anywhere on [0, inf).
  bool continuous() const;

  GridFunction scaled(double c) const;

 private:
  GridFunction(std::vector<double> knots, std::vector<double> values, Interpolation interp, Tail tail,
               bool monotone);
  std::vector<double> knots_;
  std::vector<double> values_;
  Interpolation interp_;
  Tail tail_;
  bool monotone_;
};

struct PowerLaw {
  double coefficient = 0.0;
  double exponent = 0.0;
  double operator()(double x) const;
};

// Increasing step function h(t) = sum_i increments[i] * [t >= jumps[i]].
struct StepData {
  std::vector<double> jumps;
  std::vector<double> increments;
};

/// Type-erased test function: a callable plus the structure the functionals
/// exploit (panel breakpoints, step or power-law form, tail growth).
class TestFunction {
 public:
  using Fn = std::function<double(double)>;

  TestFunction(Fn fn, std::vector<double> breaks, double tail_exponent, std::string label);

  static TestFunction from_grid(const GridFunction& g, std::string label = "grid");
  static TestFunction from_power(const PowerLaw& p, std::string label = "power");
  static TestFunction from_steps(StepData steps, std::string label = "steps");

  double operator()(double x) const { return fn_(x); }

  std::span<const double> breaks() const { return breaks_; }
  const std::string& label() const { return label_; }
  // Growth exponent at infinity (0 for bounded or logarithmic growth).
  double tail_exponent() const { return tail_exponent_; }
  const std::optional<StepData>& steps() const { return steps_; }
  const std::optional<PowerLaw>& power() const { return power_; }

  TestFunction scaled(double c) const;

 private:
  Fn fn_;
  std::vector<double> breaks_;
  double tail_exponent_;
  std::string label_;
  std::optional<StepData> steps_;
  std::optional<PowerLaw> power_;
};

/// S(x) = \int_0^x s(t)/t dt for an increasing density s >= 0.
///
/// Segment integrals are closed form. The constructor checks integrability at 0 and the convexity of
/// u -> S(e^u) on a log grid.
class LogConvexS {
 public:
  explicit LogConvexS(GridFunction s);

  double operator()(double x) const;
  const GridFunction& density() const { return *s_; }

  // Minimum of the second differences of u -> S(e^u) over the grid (in u),
  // each divided by the local magnitude of S. Nonnegative up to rounding.
  double min_log_second_difference(std::span<const double> log_grid) const;

  TestFunction as_function(std::string label = "S") const;

 private:
  double segment_integral(std::size_t i, double x) const;
  std::shared_ptr<const GridFunction> s_;
  std::vector<double> cumulative_;
};

LogConvexS s_to_S(const GridFunction& s);

// The power-law extremal of each formulation (both sides become equalities).
PowerLaw extremal_power(const Params& params, Form form);
TestFunction extremal(const Params& params, Form form);

}  // namespace conjlab
