#include "conjlab/special_values.hpp"

#include <cmath>
#include <numbers>

#include "conjlab/errors.hpp"
#include "conjlab/quadrature.hpp"

namespace conjlab {

double product_factor(double alpha, int n) {
  if (!std::isfinite(alpha) || alpha <= 0.0) throw DomainError("alpha must be finite and positive");
  if (n < 2) throw DomainError("n must be >= 2");
  double p = 1.0;
  for (int k = 1; k < n; ++k) p *= 1.0 + alpha / k;
  return p;
}

double beta_product(double alpha, int n) {
  if (!std::isfinite(alpha) || alpha <= 0.0) throw DomainError("beta_product: alpha must be finite and positive");
  if (n < 2) throw DomainError("beta_product: n must be >= 2");
  double b = 1.0 / alpha;
  for (int k = 1; k < n; ++k) b *= k / (k + alpha);
  return b;
}

double sharp_bound(const Params& params, Form form) {
  params.require(form);
  const double pi = std::numbers::pi;
  const int n = params.n();
  switch (form) {
    case Form::kForm1: {
      const double lambda = params.lambda();
      double p = 1.0;
      for (int k = 1; k < n; ++k) p *= 1.0 + lambda / (2.0 * k);
      return pi * (n - 1) / (2.0 * lambda) * p;
    }
    case Form::kForm2:
      return pi / 2.0 * product_factor(params.alpha(), n);
    case Form::kForm3:
      return pi * params.alpha() * product_factor(params.alpha(), n);
  }
  throw DomainError("invalid formulation");
}

double sharp_bound_via_beta(const Params& params, Form form) {
  params.require(form);
  const double pi = std::numbers::pi;
  const int n = params.n();
  const double beta = beta_product(params.alpha(), n);
  switch (form) {
    case Form::kForm1:
      return pi * (n - 1) / (params.lambda() * params.lambda()) / beta;
    case Form::kForm2:
      return pi / (2.0 * params.alpha()) / beta;
    case Form::kForm3:
      return pi / beta;
  }
  throw DomainError("invalid formulation");
}

namespace {

// sum_{m>=0} d^{n+m} / (n+m); all terms positive, ratio d <= 1/2.
double kernel_K_series(double d, int n) {
  double power = std::pow(d, n);
  double acc = 0.0;
  for (int m = 0; m < 2000; ++m) {
    const double term = power / (n + m);
    acc += term;
    if (term <= 1e-17 * acc) break;
    power *= d;
  }
  return acc;
}

double kernel_K_binomial(double a, int n) {
  const double log_a = std::log(a);
  double acc = -log_a;
  double binom = 1.0;
  for (int j = 1; j < n; ++j) {
    binom = binom * (n - j) / j;
    const double one_minus_aj = -std::expm1(j * log_a);
    acc += ((j % 2) ? -binom : binom) * one_minus_aj / j;
  }
  return acc;
}

// \int_{ln a}^{ln(1/2)} (1 - e^v)^{n-1} dv, positive smooth integrand.
double kernel_K_log_quadrature(double a, int n) {
  QuadOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-14;
  const Integrand g = [n](double v) { return std::exp((n - 1) * std::log1p(-std::exp(v))); };
  return integrate_finite(g, std::log(a), std::log(0.5), o).value;
}

}  // namespace

double kernel_K(double a, int n) {
  if (n < 2) throw DomainError("kernel_K: n must be >= 2");
  if (std::isnan(a) || a <= 0.0) throw DomainError("kernel_K: a must be positive (the kernel diverges at 0)");
  if (a > 1.0) throw DomainError("kernel_K: a must not exceed 1");
  if (a == 1.0) return 0.0;
  if (a >= 0.5) return kernel_K_series(1.0 - a, n);
  if (n <= 20) return kernel_K_binomial(a, n);
  return kernel_K_series(0.5, n) + kernel_K_log_quadrature(a, n);
}

double kernel_Psi(double tau, double alpha) {
  if (std::isnan(tau) || tau <= 0.0) throw DomainError("kernel_Psi: tau must be positive");
  if (!std::isfinite(alpha) || alpha <= 0.0) throw DomainError("kernel_Psi: alpha must be positive");
  if (std::isinf(tau)) return 0.0;
  const double x = 2.0 * alpha * std::log(tau);
  // ln(1 + e^{-x}) without overflow on either side.
  const double l = x < 0.0 ? -x + std::log1p(std::exp(x)) : std::log1p(std::exp(-x));
  return l / (2.0 * alpha);
}

}  // namespace conjlab
