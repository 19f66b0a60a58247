// Globally adaptive Gauss-Kronrod (7/15) integration.
//
// Abscissae are strictly interior to every panel.
#pragma once

#include <functional>
#include <span>

namespace conjlab {

using Integrand = std::function<double(double)>;

struct QuadOptions {
  double abs_tol = 1e-9;
  double rel_tol = 0.0;
  int max_depth = 60;
  long max_evaluations = 1'000'000;
};

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int subdivisions = 0;
  long evaluations = 0;
  bool converged = true;
};

// Default tolerances: 1e-9 absolute on finite ranges, 1e-8 on [a, inf).
QuadOptions finite_defaults();
QuadOptions semi_infinite_defaults();

QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadOptions& opts = finite_defaults());
QuadResult integrate_finite(const Integrand& f, double a, double b, double tol);

// a > b gives the negated integral, a == b gives 0.

// Same, with initial panel boundaries placed at every break strictly inside (a, b).
QuadResult integrate_finite(const Integrand& f, double a, double b, std::span<const double> breaks,
                            const QuadOptions& opts);

// \int_a^inf f(t) dt through t = u / (1 - u), u in [a / (1 + a), 1).
QuadResult integrate_semi_infinite(const Integrand& f, double a, const QuadOptions& opts = semi_infinite_defaults());
QuadResult integrate_semi_infinite(const Integrand& f, double a, double tol);
QuadResult integrate_semi_infinite(const Integrand& f, double a, std::span<const double> breaks,
                                   const QuadOptions& opts);

}  // namespace conjlab
