#include "conjlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "conjlab/errors.hpp"
#include "conjlab/special_values.hpp"

namespace conjlab {
namespace {

std::vector<double> squared_positive(std::span<const double> knots) {
  std::vector<double> out;
  for (double k : knots)
    if (k > 0.0) out.push_back(k * k);
  return out;
}

// q(u) = s'(sqrt u) / (8 (n-1) sqrt u) for continuous piecewise-linear s.
TestFunction derivative_of_h(const std::shared_ptr<const GridFunction>& s, int n) {
  const double c = 1.0 / (8.0 * (n - 1));
  const auto knots = s->knots();
  const auto values = s->values();
  std::vector<double> slopes(knots.size(), 0.0);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) slopes[i] = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
  const Tail tail = s->tail();
  const double tail_exp = tail.kind == Tail::Kind::kPower && values.back() > 0.0 ? tail.exponent : 0.0;
  auto slopes_ptr = std::make_shared<const std::vector<double>>(std::move(slopes));
  auto fn = [s, slopes_ptr, c, tail_exp](double u) {
    if (u <= 0.0) return 0.0;
    const double x = std::sqrt(u);
    const std::ptrdiff_t i = s->segment(x);
    if (i < 0) return 0.0;
    const auto last = static_cast<std::ptrdiff_t>(s->knots().size()) - 1;
    double ds = 0.0;
    if (i == last) {
      if (tail_exp != 0.0 && x > s->knots().back()) {
        const double kl = s->knots().back();
        ds = tail_exp * s->values().back() * std::pow(x / kl, tail_exp - 1.0) / kl;
      }
    } else {
      ds = (*slopes_ptr)[i];
    }
    return ds == 0.0 ? 0.0 : c * ds / x;
  };
  return TestFunction(fn, squared_positive(knots), tail_exp != 0.0 ? tail_exp / 2.0 - 1.0 : 0.0, "q");
}

}  // namespace

const TestFunction& FormBundle::require_q() const {
  if (!q) throw CapabilityError("FORM3 unavailable: " + q_missing_reason + "; evaluate in FORM2 instead");
  return *q;
}

double IdentityPair::gap() const { return std::fabs(direct - transformed); }

FormBundle lift_s_to_bundle(const GridFunction& s, const Params& params) {
  const LogConvexS S(s);
  const int n = params.n();
  const double scale = 1.0 / (4.0 * (n - 1));
  auto shared = std::make_shared<const GridFunction>(s);

  std::optional<TestFunction> h;
  if (s.interpolation() == Interpolation::kStepLeft &&
      (s.tail().kind == Tail::Kind::kConstant || s.values().back() == 0.0)) {
    StepData steps;
    double previous = 0.0;
    for (std::size_t i = 0; i < s.knots().size(); ++i) {
      const double inc = s.values()[i] - previous;
      previous = s.values()[i];
      if (inc == 0.0) continue;
      steps.jumps.push_back(s.knots()[i] * s.knots()[i]);
      steps.increments.push_back(inc * scale);
    }
    h = TestFunction::from_steps(std::move(steps), "h");
  } else {
    const double tail_exp =
        s.tail().kind == Tail::Kind::kPower && s.values().back() > 0.0 ? s.tail().exponent / 2.0 : 0.0;
    h = TestFunction([shared, scale](double u) { return u <= 0.0 ? (*shared)(0.0) * scale : (*shared)(std::sqrt(u)) * scale; },
                     squared_positive(s.knots()), tail_exp, "h");
  }

  FormBundle b{params, TestFunction::from_grid(s, "s"), S.as_function("S"), *h, std::nullopt, {}, s};
  if (s.interpolation() == Interpolation::kLinear && s.continuous()) {
    b.q = derivative_of_h(shared, n);
  } else {
    b.q_missing_reason = "h has jumps, so q = h' is atomic";
  }
  return b;
}

GridFunction density_from_step_h(const StepData& h, const Params& params) {
  std::vector<double> knots, values;
  const double scale = 4.0 * (params.n() - 1);
  double level = 0.0;
  for (std::size_t i = 0; i < h.jumps.size(); ++i) {
    if (!(h.jumps[i] > 0.0)) throw ConstructionError("jump knots must be > 0", i);
    if (h.increments[i] < 0.0) throw ConstructionError("increments must be >= 0", i);
    level += h.increments[i];
    knots.push_back(std::sqrt(h.jumps[i]));
    values.push_back(level * scale);
  }
  if (knots.empty()) {
    knots.push_back(1.0);
    values.push_back(0.0);
  }
  return GridFunction::make_monotone(std::move(knots), std::move(values), Interpolation::kStepLeft);
}

FormBundle lift_power_to_bundle(const PowerLaw& s, const Params& params) {
  if (!(s.exponent > 0.0)) throw DivergenceError("a power density needs a positive exponent for s(t)/t to be integrable");
  const int n = params.n();
  const double c = s.coefficient;
  const double p = s.exponent;
  const PowerLaw S{c / p, p};
  const PowerLaw h{c / (4.0 * (n - 1)), p / 2.0};
  const PowerLaw q{c * p / (8.0 * (n - 1)), p / 2.0 - 1.0};
  return FormBundle{params,
                    TestFunction::from_power(s, "s"),
                    TestFunction::from_power(S, "S"),
                    TestFunction::from_power(h, "h"),
                    TestFunction::from_power(q, "q"),
                    {},
                    std::nullopt};
}

FormBundle extremal_bundle(const Params& params) {
  const double lambda = params.lambda();
  const double coefficient = 2.0 * (params.n() - 1) * product_factor(params.alpha(), params.n());
  return lift_power_to_bundle(PowerLaw{lambda * coefficient, lambda}, params);
}

IdentityPair byparts_constraint_identity(const FormBundle& bundle, double t) {
  const int n = bundle.params.n();
  const QuadOptions opts = functional_quad_defaults();
  const QuadResult direct = constraint_lhs(Form::kForm1, bundle.S, t, bundle.params, opts);
  if (t == 0.0) return {direct.value, 0.0, direct.abs_error_estimate};
  const TestFunction& s = bundle.s;
  const Integrand g = [&s, t, n](double x) {
    const double v = s(t * x);
    return v == 0.0 ? 0.0 : v / x * std::pow(1.0 - x * x, n - 1);
  };
  std::vector<double> breaks;
  for (double k : s.breaks()) breaks.push_back(k / t);
  const QuadResult other = integrate_finite(g, 0.0, 1.0, breaks, opts);
  const double c = 1.0 / (2.0 * (n - 1));
  return {direct.value, c * other.value, direct.abs_error_estimate + c * other.abs_error_estimate};
}

IdentityPair byparts_constraint_identity(const GridFunction& s, const Params& params, double t) {
  return byparts_constraint_identity(lift_s_to_bundle(s, params), t);
}

IdentityPair byparts_objective_identity(const FormBundle& bundle) {
  const double lambda = bundle.params.lambda();
  const QuadOptions opts = functional_quad_defaults();
  const QuadResult direct = objective_lhs(Form::kForm1, bundle.S, bundle.params, ObjectivePath::kQuadrature, opts);
  const TestFunction& s = bundle.s;
  const Integrand g = [&s, lambda](double t) {
    const double v = s(t);
    return v == 0.0 ? 0.0 : v / (t * (1.0 + std::pow(t, 2.0 * lambda)));
  };
  const QuadResult other = integrate_semi_infinite(g, 0.0, s.breaks(), opts);
  const double c = 1.0 / (2.0 * lambda);
  return {direct.value, c * other.value, direct.abs_error_estimate + c * other.abs_error_estimate};
}

IdentityPair byparts_objective_identity(const GridFunction& s, const Params& params) {
  return byparts_objective_identity(lift_s_to_bundle(s, params));
}

IdentityPair substitution_identity(const FormBundle& bundle, double t) {
  const QuadResult form2 = constraint_lhs(Form::kForm2, bundle.h, t * t, bundle.params);
  const IdentityPair form1 = byparts_constraint_identity(bundle, t);
  return {form2.value, form1.transformed, form2.abs_error_estimate + form1.abs_error};
}

IdentityPair tail_weight_identity(double v, double alpha) {
  QuadOptions opts;
  opts.abs_tol = 1e-300;
  opts.rel_tol = 1e-13;
  const Integrand g = [alpha](double t) { return 1.0 / (t * (1.0 + std::pow(t, 2.0 * alpha))); };
  const QuadResult q = integrate_semi_infinite(g, v, opts);
  return {q.value, kernel_Psi(v, alpha), q.abs_error_estimate};
}

CrossFormRatios cross_form_ratio_check(const FormBundle& bundle, const QuadOptions& quad) {
  EvalOptions opts;
  opts.quad = quad;
  CrossFormRatios out{evaluate(Form::kForm1, bundle.S, bundle.params, opts),
                      evaluate(Form::kForm2, bundle.h, bundle.params, opts),
                      std::nullopt,
                      {},
                      std::nullopt,
                      false};
  if (bundle.q) {
    out.form3 = evaluate(Form::kForm3, *bundle.q, bundle.params, opts);
  } else {
    out.form3_skip_reason = bundle.q_missing_reason;
  }
  std::vector<double> ratios;
  for (const EvalReport* r : {&out.form1, &out.form2, out.form3 ? &*out.form3 : nullptr})
    if (r && r->ratio) ratios.push_back(*r->ratio);
  out.all_refused = ratios.empty();
  if (ratios.size() >= 2) {
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    out.max_gap = *hi - *lo;
  }
  return out;
}

}  // namespace conjlab
