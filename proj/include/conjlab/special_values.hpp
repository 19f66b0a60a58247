// Closed-form constants and kernels shared by all three formulations.
#pragma once

#include "conjlab/params.hpp"

namespace conjlab {

// prod_{k=1}^{n-1} (1 + alpha / k)
double product_factor(double alpha, int n);

// B(alpha, n) for integer n >= 2 via (1/alpha) prod_{k=1}^{n-1} k / (k + alpha).
double beta_product(double alpha, int n);

// Right-hand constant of the objective inequality for the given formulation.
double sharp_bound(const Params& params, Form form);

// The same constant through the Beta rewrite (independent arithmetic route).
double sharp_bound_via_beta(const Params& params, Form form);

/// K(a) = \int_a^1 (1-y)^{n-1} / y dy for 0 < a <= 1.
///
/// Small n uses the binomial closed form, a >= 1/2 uses the positive series
/// sum_m (1-a)^{n+m} / (n+m), and large n integrates in log variables.
double kernel_K(double a, int n);

/// Psi(tau) = \int_tau^inf dt / (t (1 + t^{2 alpha})) = ln(1 + tau^{-2 alpha}) / (2 alpha).
double kernel_Psi(double tau, double alpha);

}  // namespace conjlab
