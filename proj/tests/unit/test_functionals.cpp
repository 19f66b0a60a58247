#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conjlab/errors.hpp"
#include "conjlab/functionals.hpp"
#include "conjlab/sampling.hpp"
#include "conjlab/special_values.hpp"

using namespace conjlab;

namespace {

double scan_max_deviation(Form form, const Params& p) {
  const TestFunction f = extremal(p, form);
  ScanSpec spec = default_scan(f);
  spec.keep_curve = true;
  const ScanResult r = constraint_sup_scan(form, f, p, spec);
  double dev = 0;
  for (const auto& [t, v] : r.curve) dev = std::max(dev, std::fabs(v - 1));
  return dev;
}

}  // namespace

TEST_SUITE("functionals") {

TEST_CASE("constraint fixed values") {
  const Params p1 = Params::from_lambda(2, 2);
  const Params p2 = Params::from_alpha(1, 2);
  for (double t : {0.01, 0.5, 1.0, 3.0, 100.0}) {
    CHECK(constraint_lhs(Form::kForm1, extremal(p1, Form::kForm1), t, p1).value ==
          doctest::Approx(t * t).epsilon(1e-12));
    CHECK(constraint_lhs(Form::kForm2, extremal(p2, Form::kForm2), t, p2).value == doctest::Approx(t).epsilon(1e-12));
    CHECK(constraint_lhs(Form::kForm3, extremal(p2, Form::kForm3), t, p2).value ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("objective fixed values") {
  const double pi = std::numbers::pi;
  const Params p1 = Params::from_lambda(2, 2);
  const Params p2 = Params::from_alpha(1, 2);
  CHECK(objective_lhs(Form::kForm1, extremal(p1, Form::kForm1), p1).value == doctest::Approx(pi / 2).epsilon(1e-10));
  CHECK(objective_lhs(Form::kForm2, extremal(p2, Form::kForm2), p2).value == doctest::Approx(pi).epsilon(1e-10));
  CHECK(objective_lhs(Form::kForm3, extremal(p2, Form::kForm3), p2).value == doctest::Approx(2 * pi).epsilon(1e-10));
}

TEST_CASE("equality family") {
  for (double lambda : {0.5, 1.0, 1.5, 2.0, 3.0})
    for (int n : {2, 3, 5}) {
      const Params p = Params::from_lambda(lambda, n);
      for (Form form : {Form::kForm1, Form::kForm2, Form::kForm3}) {
        if (!p.valid_for(form)) continue;
        CAPTURE(lambda);
        CAPTURE(n);
        CAPTURE(static_cast<int>(form));
        CHECK(scan_max_deviation(form, p) < 1e-8);
        const double obj = objective_lhs(form, extremal(p, form), p).value;
        CHECK(std::fabs(obj / sharp_bound(p, form) - 1) < 1e-6);
      }
    }
}

TEST_CASE("scan flags growth past the rate") {
  const Params p = Params::from_alpha(1, 2);
  const TestFunction f = TestFunction::from_power({1.0, 1.5}, "h");
  const ScanResult r = constraint_sup_scan(Form::kForm2, f, p, default_scan(f));
  CHECK(r.edge_warning);
  const EvalReport rep = evaluate(Form::kForm2, f, p);
  CHECK(rep.refusal);
  CHECK_FALSE(rep.ratio);
}

TEST_CASE("zero function is refused") {
  const Params p = Params::from_alpha(1, 2);
  const auto zero = GridFunction::make_monotone({1, 2}, {0, 0}, Interpolation::kLinear);
  const TestFunction f = TestFunction::from_grid(zero, "h");
  const ScanResult r = constraint_sup_scan(Form::kForm2, f, p, default_scan(f));
  CHECK(r.sup == 0.0);
  CHECK_THROWS_AS(normalize(Form::kForm2, f, p), NormalizationError);
  CHECK(evaluate(Form::kForm2, f, p).refusal);
}

TEST_CASE("normalize") {
  const Params p = Params::from_alpha(1, 2);
  const TestFunction ext = extremal(p, Form::kForm2);
  CHECK(normalize(Form::kForm2, ext.scaled(2.0), p)(1.7) == doctest::Approx(ext(1.7)).epsilon(1e-9));
  CHECK(normalize(Form::kForm2, ext, p)(0.3) == doctest::Approx(ext(0.3)).epsilon(1e-9));
  const Params q = Params::from_alpha(1.5, 3);
  const TestFunction c_power = TestFunction::from_power({5.0, 1.5}, "h");
  const TestFunction normed = normalize(Form::kForm2, c_power, q);
  CHECK(normed(2.0) == doctest::Approx(std::pow(2.0, 1.5) / beta_product(1.5, 3)).epsilon(1e-9));
}

TEST_CASE("evaluate extremal and a capped profile") {
  const Params p = Params::from_alpha(1, 2);
  const EvalReport r = evaluate(Form::kForm2, extremal(p, Form::kForm2), p);
  REQUIRE(r.ratio);
  CHECK(std::fabs(*r.ratio - 1) <= 1e-8);
  std::vector<double> knots, values;
  for (int i = 0; i < 10; ++i) {
    knots.push_back(i / 9.0);
    values.push_back(i / 9.0);
  }
  const TestFunction capped = TestFunction::from_grid(GridFunction::make_monotone(knots, values, Interpolation::kLinear));
  const EvalReport rc = evaluate(Form::kForm2, capped, p);
  REQUIRE(rc.ratio);
  CHECK(*rc.ratio < 1.0);
  CHECK(*rc.ratio > 0.0);
}

TEST_CASE("scale equivariance") {
  Rng rng(3);
  const Params p = Params::from_lambda(1.6, 3);
  for (int k = 0; k < 5; ++k) {
    const TestFunction f = TestFunction::from_grid(random_monotone(rng), "S");
    const EvalReport a = evaluate(Form::kForm1, f, p);
    const EvalReport b = evaluate(Form::kForm1, f.scaled(37.5), p);
    REQUIRE(a.ratio);
    REQUIRE(b.ratio);
    CHECK(std::fabs(*a.ratio - *b.ratio) <= 1e-12 * *a.ratio);
  }
}

TEST_CASE("monotonicity in the function") {
  const Params p = Params::from_alpha(1.2, 2);
  const auto g_lo = GridFunction::make_monotone({0.5, 1, 3}, {0, 1, 2}, Interpolation::kLinear);
  const auto g_hi = GridFunction::make_monotone({0.5, 1, 3}, {0, 1.5, 2.5}, Interpolation::kLinear);
  const TestFunction lo = TestFunction::from_grid(g_lo), hi = TestFunction::from_grid(g_hi);
  CHECK(objective_lhs(Form::kForm2, lo, p).value <= objective_lhs(Form::kForm2, hi, p).value);
  for (double t = 1e-2; t < 1e3; t *= 1.9)
    CHECK(constraint_lhs(Form::kForm2, lo, t, p).value <= constraint_lhs(Form::kForm2, hi, t, p).value);
}

TEST_CASE("positive value at zero is rejected in FORM2") {
  const Params p = Params::from_alpha(1, 2);
  const TestFunction f = TestFunction::from_grid(GridFunction::make_monotone({0, 1}, {1, 2}, Interpolation::kLinear));
  CHECK_THROWS_AS(constraint_lhs(Form::kForm2, f, 1.0, p), DivergenceError);
  CHECK_THROWS_AS(constraint_lhs(Form::kForm2, f, 0.0, p), DivergenceError);
}

TEST_CASE("step objective: exact sum equals quadrature") {
  const Params p = Params::from_alpha(0.9, 3);
  const TestFunction f = TestFunction::from_steps({{0.2, 1.0, 7.0}, {0.5, 1.0, 0.25}});
  const double exact = objective_lhs(Form::kForm2, f, p, ObjectivePath::kAuto).value;
  const double quad = objective_lhs(Form::kForm2, f, p, ObjectivePath::kQuadrature).value;
  CHECK(std::fabs(exact - quad) <= 1e-10 * exact);
  CHECK(exact == doctest::Approx(0.5 * kernel_Psi(0.2, 0.9) + kernel_Psi(1.0, 0.9) + 0.25 * kernel_Psi(7.0, 0.9)));
}

TEST_CASE("safe regime on random monotone functions") {
  Rng rng(2024);
  for (double lambda : {0.5, 0.75, 1.0}) {
    const Params p = Params::from_lambda(lambda, 2 + static_cast<int>(lambda * 2));
    for (int k = 0; k < 10; ++k) {
      const EvalReport r = evaluate(Form::kForm1, TestFunction::from_grid(random_monotone(rng), "S"), p);
      if (!r.ratio) continue;
      CHECK(*r.ratio <= 1 + 3 * r.ratio_error);
    }
  }
}

}
