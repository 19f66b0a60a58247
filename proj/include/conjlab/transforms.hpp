// The equivalence chain between the three formulations: S from the density s,
// h(x^2) = s(x) / (4(n-1)), q = h', and the integration-by-parts identities
// that carry the constraint and objective from one formulation to the next.
#pragma once

#include <optional>
#include <string>

#include "conjlab/function_models.hpp"
#include "conjlab/functionals.hpp"
#include "conjlab/params.hpp"

namespace conjlab {

struct FormBundle {
  Params params;
  TestFunction s;  // density of S
  TestFunction S;  // FORM1 object
  TestFunction h;  // FORM2 object
  std::optional<TestFunction> q;  // FORM3 object, absent when h has jumps
  std::string q_missing_reason;
  std::optional<GridFunction> s_grid;

  // Throws CapabilityError (advising FORM2) when q is atomic.
  const TestFunction& require_q() const;
};

FormBundle lift_s_to_bundle(const GridFunction& s, const Params& params);
FormBundle lift_power_to_bundle(const PowerLaw& s, const Params& params);
// The step density s(x) = 4(n-1) h(x^2) of an increasing step h.
GridFunction density_from_step_h(const StepData& h, const Params& params);
// s(x) = lambda C x^lambda with C the FORM1 extremal coefficient.
FormBundle extremal_bundle(const Params& params);

struct IdentityPair {
  double direct = 0.0;
  double transformed = 0.0;
  double abs_error = 0.0;  // sum of both quadrature error estimates

  double gap() const;  // |direct - transformed|
};

// \int_0^1 S(tx)(1-x^2)^{n-2} x dx  vs  (1/(2(n-1))) \int_0^1 s(tx)/x (1-x^2)^{n-1} dx
IdentityPair byparts_constraint_identity(const FormBundle& bundle, double t);
IdentityPair byparts_constraint_identity(const GridFunction& s, const Params& params, double t);

// \int_0^inf S(t) t^{2l-1}/(1+t^{2l})^2 dt  vs  (1/(2 lambda)) \int_0^inf s(t)/(t(1+t^{2l})) dt
IdentityPair byparts_objective_identity(const FormBundle& bundle);
IdentityPair byparts_objective_identity(const GridFunction& s, const Params& params);

// FORM2 constraint of h at t^2  vs  the by-parts FORM1 constraint of s at t.
IdentityPair substitution_identity(const FormBundle& bundle, double t);

// \int_v^inf dt/(t(1+t^{2 alpha})) by quadrature  vs  Psi(v).
IdentityPair tail_weight_identity(double v, double alpha);

struct CrossFormRatios {
  EvalReport form1;
  EvalReport form2;
  std::optional<EvalReport> form3;
  std::string form3_skip_reason;
  // Largest pairwise difference of the defined ratios; nullopt when fewer
  // than two are defined.
  std::optional<double> max_gap;
  bool all_refused = false;
};

CrossFormRatios cross_form_ratio_check(const FormBundle& bundle, const QuadOptions& quad = functional_quad_defaults());

}  // namespace conjlab
