#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "conjlab/errors.hpp"
#include "conjlab/quadrature.hpp"

using namespace conjlab;

TEST_SUITE("quadrature") {

TEST_CASE("finite fixed values") {
  CHECK(integrate_finite([](double x) { return x; }, 0, 1, 1e-10).value == doctest::Approx(0.5).epsilon(1e-14));
  auto beta12 = [](double x) { return (1 - x) / x * x; };
  CHECK(integrate_finite(beta12, 0, 1, 1e-10).value == doctest::Approx(0.5).epsilon(1e-12));
  auto log_inv = [](double x) { return std::log(1 / x); };
  CHECK(std::fabs(integrate_finite(log_inv, 0, 1, 1e-10).value - 1.0) <= 1e-10);
}

TEST_CASE("semi-infinite fixed values") {
  const double pi = std::numbers::pi;
  auto arctan_d = [](double t) { return 1 / (1 + t * t); };
  CHECK(std::fabs(integrate_semi_infinite(arctan_d, 0, 1e-11).value - pi / 2) <= 1e-10);
  auto log_w = [](double t) { return std::log1p(1 / (t * t)); };
  CHECK(std::fabs(integrate_semi_infinite(log_w, 0, 1e-11).value - pi) <= 1e-9);
  auto psi = [](double t) { return 1 / (t * (1 + t * t)); };
  CHECK(std::fabs(integrate_semi_infinite(psi, 1, 1e-12).value - std::log(2.0) / 2) <= 1e-11);
  auto sub = [](double t) { return t / ((1 + t * t) * (1 + t * t)); };
  CHECK(std::fabs(integrate_semi_infinite(sub, 0, 1e-12).value - 0.5) <= 1e-11);
}

TEST_CASE("error estimates are honest on the analytic set") {
  struct Case {
    Integrand f;
    double a, b, exact;
  };
  const Case cases[] = {
      {[](double x) { return std::exp(x); }, 0, 1, std::exp(1.0) - 1},
      {[](double x) { return std::log(1 / x); }, 0, 1, 1.0},
      {[](double x) { return 1 / std::sqrt(x); }, 0, 1, 2.0},
      {[](double x) { return std::sin(20 * x); }, 0, 1, (1 - std::cos(20.0)) / 20},
      {[](double x) { return std::pow(x, 0.3) * (1 - x); }, 0, 1, 1 / 1.3 - 1 / 2.3},
  };
  for (double tol : {1e-6, 1e-9, 1e-12}) {
    for (const Case& c : cases) {
      const QuadResult r = integrate_finite(c.f, c.a, c.b, tol);
      CHECK(std::fabs(r.value - c.exact) <= 10 * r.abs_error_estimate + 1e-15);
      if (r.converged) CHECK(std::fabs(r.value - c.exact) <= tol * 10);
    }
  }
}

TEST_CASE("breakpoints resolve kinks") {
  auto kink = [](double x) { return std::fabs(x - 0.3); };
  const double breaks[] = {0.3};
  QuadOptions o;
  o.abs_tol = 1e-14;
  const QuadResult r = integrate_finite(kink, 0, 1, breaks, o);
  CHECK(std::fabs(r.value - (0.045 + 0.245)) <= 1e-15);
  CHECK(r.subdivisions <= 4);
}

TEST_CASE("reversed and empty ranges") {
  auto f = [](double x) { return x * x; };
  CHECK(integrate_finite(f, 1, 1, 1e-10).value == 0.0);
  CHECK(integrate_finite(f, 1, 0, 1e-10).value == doctest::Approx(-1.0 / 3).epsilon(1e-14));
}

TEST_CASE("NaN integrand reports the abscissa") {
  auto bad = [](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : x; };
  try {
    integrate_finite(bad, 0, 1, 1e-10);
    FAIL("expected IntegrandError");
  } catch (const IntegrandError& e) {
    CHECK(e.abscissa() > 0.5);
    CHECK(e.abscissa() < 1.0);
  }
}

TEST_CASE("non-convergence is reported, not thrown") {
  auto wild = [](double x) { return std::sin(1 / x) / x; };
  QuadOptions o;
  o.abs_tol = 1e-14;
  o.max_evaluations = 2000;
  const QuadResult r = integrate_finite(wild, 0, 1, o);
  CHECK_FALSE(r.converged);
  CHECK(r.evaluations <= 2000 + 15);
}

}
