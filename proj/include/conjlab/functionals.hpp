// Left-hand sides of the constraint and objective inequalities in each
// formulation, the supremum of the constraint ratio over t, and the
// normalized ratio-to-sharp-bound.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conjlab/function_models.hpp"
#include "conjlab/params.hpp"
#include "conjlab/quadrature.hpp"

namespace conjlab {

// Relative 1e-11 on every constraint/objective integral.
QuadOptions functional_quad_defaults();

/// Constraint integral at scale t:
///   FORM1  \int_0^1 S(tx) (1-x^2)^{n-2} x dx
///   FORM2  \int_0^1 h(tx) (1-x)^{n-1} / x dx
///   FORM3  \int_0^1 K(x) q(tx) dx
/// Panels are split at knot/t so piecewise integrands are integrated exactly
/// per piece.
QuadResult constraint_lhs(Form form, const TestFunction& f, double t, const Params& params,
                          const QuadOptions& opts = functional_quad_defaults());

enum class ObjectivePath {
  kAuto,        // exact sum_i Delta_i Psi(tau_i) for FORM2 step functions
  kQuadrature,  // always integrate numerically
};

/// Objective integral over [0, inf):
///   FORM1  \int S(t) t^{2 lambda - 1} / (1 + t^{2 lambda})^2 dt
///   FORM2  \int h(t) / (t (1 + t^{2 alpha})) dt
///   FORM3  \int q(t) ln(1 + t^{-2 alpha}) dt
QuadResult objective_lhs(Form form, const TestFunction& f, const Params& params,
                         ObjectivePath path = ObjectivePath::kAuto,
                         const QuadOptions& opts = functional_quad_defaults());

struct ScanSpec {
  double t_min = 1e-4;
  double t_max = 1e4;
  int points = 400;
  // Golden-section stopping width in log t.
  double refine_log_width = 1e-7;
  bool keep_curve = false;
};

// Log grid [1e-4 * first break, 1e4 * max(1, last break)] with 400 points.
ScanSpec default_scan(const TestFunction& f);

struct ScanResult {
  double sup = 0.0;
  double argmax = 0.0;
  double min_ratio = 0.0;        // over the grid points
  double max_grid_ratio = 0.0;   // before refinement
  double abs_error = 0.0;        // quadrature error at the argmax, in ratio units
  bool edge_warning = false;
  long evaluations = 0;
  std::vector<std::pair<double, double>> curve;  // (t, ratio) when requested
};

ScanResult constraint_sup_scan(Form form, const TestFunction& f, const Params& params, const ScanSpec& spec,
                               const QuadOptions& opts = functional_quad_defaults());

// f / sup. Throws NormalizationError for a zero supremum or an edge warning.
TestFunction normalize(const TestFunction& f, const ScanResult& scan);
TestFunction normalize(Form form, const TestFunction& f, const Params& params);

struct EvalOptions {
  std::optional<ScanSpec> scan;
  QuadOptions quad = functional_quad_defaults();
  ObjectivePath path = ObjectivePath::kAuto;
};

struct EvalReport {
  Form form = Form::kForm1;
  Params params = Params::from_lambda(1.0, 2);
  std::string label;
  double constraint_sup = 0.0;
  double constraint_argmax = 0.0;
  bool edge_warning = false;
  double objective_raw = 0.0;             // of the input function
  std::optional<double> objective;        // of the normalized function
  double bound = 0.0;
  std::optional<double> ratio;
  std::optional<std::string> refusal;
  // Diagnostics.
  double constraint_abs_error = 0.0;
  double objective_abs_error = 0.0;
  double ratio_error = 0.0;
  bool objective_converged = true;
  ScanSpec scan_spec;
  QuadOptions quad;
  std::vector<std::pair<double, double>> curve;
};

// Normalizes f to constraint supremum 1 and compares the objective to the
// sharp bound. A zero supremum or unbounded ratio produces a refusal report.
EvalReport evaluate(Form form, const TestFunction& f, const Params& params, const EvalOptions& opts = {});

}  // namespace conjlab
