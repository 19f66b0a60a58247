// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "conjlab/functionals.hpp"
#include "conjlab/lp_search.hpp"
#include "conjlab/quadrature.hpp"
#include "conjlab/sampling.hpp"
#include "conjlab/special_values.hpp"
#include "conjlab/transforms.hpp"

using namespace conjlab;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok && o.passed) o.detail = what;
  o.passed = o.passed && ok;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const double kLambdas[] = {0.5, 1.0, 1.5, 2.0, 3.0, 5.0};
const int kNs[] = {2, 3, 4, 6};

double beta_by_quadrature(double a, int n) {
  QuadOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-13;
  auto f = [=](double u) { return std::pow(1.0 - std::pow(u, 1.0 / a), n - 1); };
  return integrate_finite(f, 0.0, 1.0, o).value / a;
}

Outcome sharp_constant_identity() {
  Outcome o;
  double worst_beta = 0, worst_rewrite = 0, literal_factor = 0;
  for (double lambda : kLambdas)
    for (int n : kNs) {
      const double a = lambda / 2;
      const double b = beta_product(a, n);
      worst_beta = std::max(worst_beta, std::fabs(b - beta_by_quadrature(a, n)) / b);
      const Params p = Params::from_lambda(lambda, n);
      const double product = sharp_bound(p, Form::kForm1);
      worst_rewrite = std::max(worst_rewrite, std::fabs(product - sharp_bound_via_beta(p, Form::kForm1)) / product);
      literal_factor = std::max(literal_factor, product / (M_PI * (n - 1) / (2 * lambda * lambda) / b));
    }
  require(o, worst_beta <= 1e-10, "Beta vs quadrature " + fmt("%.3g", worst_beta));
  require(o, worst_rewrite <= 1e-12, "product vs Beta rewrite " + fmt("%.3g", worst_rewrite));
  o.detail += "max rel err Beta " + fmt("%.2e", worst_beta) + ", rewrite " + fmt("%.2e", worst_rewrite) +
              "; note: rewrite with 2*lambda^2 in the denominator is off by factor " + fmt("%.15g", literal_factor);
  return o;
}

double scan_deviation(Form form, const TestFunction& f, const Params& p) {
  ScanSpec spec = default_scan(f);
  spec.keep_curve = true;
  const ScanResult r = constraint_sup_scan(form, f, p, spec);
  double dev = std::fabs(r.sup - 1);
  for (const auto& [t, v] : r.curve) dev = std::max(dev, std::fabs(v - 1));
  return dev;
}

Outcome extremal_equalities() {
  Outcome o;
  double worst_scan = 0, worst_obj = 0;
  int cells = 0;
  for (double lambda : kLambdas)
    for (int n : kNs) {
      const Params p = Params::from_lambda(lambda, n);
      for (Form form : {Form::kForm1, Form::kForm2, Form::kForm3}) {
        if (!p.valid_for(form)) continue;
        const TestFunction f = extremal(p, form);
        const double dev = scan_deviation(form, f, p);
        const double obj = std::fabs(objective_lhs(form, f, p).value / sharp_bound(p, form) - 1);
        worst_scan = std::max(worst_scan, dev);
        worst_obj = std::max(worst_obj, obj);
        require(o, dev < 1e-8, "scan deviation " + fmt("%.3g", dev) + " at lambda " + fmt("%g", lambda));
        require(o, obj <= 1e-6, "objective deviation " + fmt("%.3g", obj) + " at lambda " + fmt("%g", lambda));
        ++cells;
      }
    }
  const Params hand = Params::from_alpha(1, 2);
  const TestFunction h = extremal(hand, Form::kForm2);
  for (double t : {0.01, 1.0, 7.0, 1e3})
    require(o, std::fabs(constraint_lhs(Form::kForm2, h, t, hand).value - t) <= 1e-10 * t, "hand cell constraint");
  require(o, std::fabs(objective_lhs(Form::kForm2, h, hand).value - M_PI) <= 1e-9, "hand cell objective");
  require(o, std::fabs(sharp_bound(hand, Form::kForm2) - M_PI) <= 1e-15, "hand cell bound");
  require(o, std::fabs(objective_lhs(Form::kForm3, extremal(hand, Form::kForm3), hand).value - 2 * M_PI) <= 1e-9,
          "hand cell FORM3 objective");
  o.detail += std::to_string(cells) + " form cells, max scan dev " + fmt("%.2e", worst_scan) + ", max objective dev " +
              fmt("%.2e", worst_obj);
  return o;
}

Outcome derivation_chain() {
  Outcome o;
  Rng rng(20240601);
  double worst_c = 0, worst_o = 0, worst_gap = 0;
  int with_q = 0;
  const int count = 60;
  for (int k = 0; k < count; ++k) {
    const double lambda = rng.uniform(1.05, 5.0);
    const Params p = Params::from_lambda(lambda, rng.integer(2, 6));
    const FormBundle b = lift_s_to_bundle(random_density(rng, lambda), p);
    for (double t : {0.03, 0.4, 1.0, 2.5, 30.0}) {
      const IdentityPair c = byparts_constraint_identity(b, t);
      worst_c = std::max(worst_c, c.gap() / std::max(1.0, std::fabs(c.direct)));
    }
    const IdentityPair ob = byparts_objective_identity(b);
    worst_o = std::max(worst_o, ob.gap() / std::max(1.0, std::fabs(ob.direct)));
    const CrossFormRatios r = cross_form_ratio_check(b);
    require(o, r.max_gap.has_value(), "no comparable ratios for bundle " + std::to_string(k));
    if (r.max_gap) worst_gap = std::max(worst_gap, *r.max_gap);
    with_q += r.form3 ? 1 : 0;
  }
  require(o, worst_c <= 1e-7, "constraint by-parts gap " + fmt("%.3g", worst_c));
  require(o, worst_o <= 1e-7, "objective by-parts gap " + fmt("%.3g", worst_o));
  require(o, worst_gap < 1e-5, "cross-form gap " + fmt("%.3g", worst_gap));
  o.detail += std::to_string(count) + " densities (" + std::to_string(with_q) + " with FORM3), by-parts " +
              fmt("%.2e", worst_c) + " / " + fmt("%.2e", worst_o) + ", max ratio gap " + fmt("%.2e", worst_gap);
  return o;
}

Outcome tail_weight() {
  Outcome o;
  double worst = 0;
  for (double a : {0.6, 1.0, 2.0})
    for (double v : {0.1, 1.0, 10.0}) worst = std::max(worst, tail_weight_identity(v, a).gap());
  require(o, worst <= 1e-10, "gap " + fmt("%.3g", worst));
  o.detail += "max abs gap " + fmt("%.2e", worst);
  return o;
}

Outcome lp_soundness() {
  Outcome o;
  double worst_sup = 0, worst_obj = 0;
  int runs = 0;
  for (double a : {0.6, 1.0, 2.0})
    for (int n : {2, 3}) {
      const Params p = Params::from_alpha(a, n);
      const SearchConfig cfg;
      const SearchResult r = search_ratio(p, cfg);
      require(o, r.certificate.passed(), "certificate failed at alpha " + fmt("%g", a));
      const TestFunction h = r.certified.as_function();
      ScanSpec spec = default_scan(h);
      spec.t_min = std::min(spec.t_min, cfg.t.lo * 1e-2);
      spec.t_max = std::max(spec.t_max, cfg.t_con * 1e2);
      const ScanResult scan = constraint_sup_scan(Form::kForm2, h, p, spec);
      const double quad = objective_lhs(Form::kForm2, h, p, ObjectivePath::kQuadrature).value;
      const double exact = r.certified.objective(a);
      const double obj_gap = std::fabs(quad - exact) / exact;
      worst_sup = std::max(worst_sup, scan.sup);
      worst_obj = std::max(worst_obj, obj_gap);
      require(o, scan.sup <= 1 + 1e-6, "re-evaluated sup " + fmt("%.10g", scan.sup));
      require(o, obj_gap <= 1e-8, "objective agreement " + fmt("%.3g", obj_gap));

      const LpModel model = build_model(p, cfg.tau, cfg.t);
      const StepIncrements lower = stepped_extremal(model);
      require(o, lower.objective(a) <= r.solution.objective_value * (1 + 1e-12), "stepped extremal above optimum");
      ++runs;
    }

  // Three-level ladders: tau refinement must not lower the optimum, t
  // refinement must not raise it.
  const Params p = Params::from_alpha(1, 2);
  std::vector<double> tau = log_grid({1e-3, 1e3, 100});
  std::vector<double> t = log_grid({1e-4, 1e5, 200});
  std::vector<double> tau_ladder, t_ladder;
  for (int level = 0; level < 3; ++level) {
    tau_ladder.push_back(simplex_solve(build_model(p, tau, t)).objective_value);
    tau = refine_grid(tau);
  }
  tau = log_grid({1e-3, 1e3, 100});
  for (int level = 0; level < 3; ++level) {
    t_ladder.push_back(simplex_solve(build_model(p, tau, t)).objective_value);
    t = refine_grid(t);
  }
  for (int i = 1; i < 3; ++i) {
    require(o, tau_ladder[i] >= tau_ladder[i - 1] * (1 - 1e-12), "tau ladder not monotone");
    require(o, t_ladder[i] <= t_ladder[i - 1] * (1 + 1e-12), "t ladder not monotone");
  }
  o.detail += std::to_string(runs) + " certified runs at M=200 J=400, max re-evaluated sup " +
              fmt("%.10f", worst_sup) + ", max objective gap " + fmt("%.2e", worst_obj) + ", ladders tau " +
              fmt("%.6f", tau_ladder[0] / M_PI) + "->" + fmt("%.6f", tau_ladder[2] / M_PI) + " t " +
              fmt("%.6f", t_ladder[0] / M_PI) + "->" + fmt("%.6f", t_ladder[2] / M_PI) + " (x pi)";
  return o;
}

Outcome ratio_probe() {
  Outcome o;
  struct Cell {
    double alpha;
    int n;
  };
  const Cell cells[] = {{0.505, 2}, {0.505, 3}, {0.52, 2}, {0.52, 3}, {0.6, 2}, {0.6, 3},
                        {1.0, 2},   {1.0, 3},   {2.0, 2},  {2.0, 3}};
  for (const Cell& c : cells) {
    const Params p = Params::from_alpha(c.alpha, c.n);
    const SearchConfig cfg;
    const SearchResult a = search_ratio(p, cfg);
    const SearchResult b = search_ratio(p, cfg);
    const bool reproducible = a.certified_ratio == b.certified_ratio &&
                              a.solution.increments.increments == b.solution.increments.increments;
    const CandidateReview review = review_candidate(p, cfg, a);
    require(o, a.certificate.passed(), "uncertified cell alpha " + fmt("%g", c.alpha));
    require(o, reproducible, "irreproducible cell alpha " + fmt("%g", c.alpha));
    // Numerical error bar on the certified ratio: roundoff in the exact step
    // sums; the bracket up to the grid LP value is discretization.
    const double numeric = 1e-12 * a.certified_ratio;
    std::printf("  probe alpha=%-6g n=%d certified=%.9f +- %.1e  lp=%.9f  deflation=%.9f  margins i/t/h=%.2e/%.2e/%.2e%s\n",
                c.alpha, c.n, a.certified_ratio, numeric, a.lp_ratio, a.deflation, a.certificate.interval.margin,
                a.certificate.tail.margin, a.certificate.head.margin,
                review.candidate ? "  CANDIDATE (survived grid doubling)"
                                 : (a.certified_ratio > 1 ? "  (>1 did not survive doubling)" : ""));
    std::fflush(stdout);
  }
  o.detail += std::to_string(std::size(cells)) + " cells certified and bit-reproducible";
  return o;
}

Outcome safe_regime() {
  Outcome o;
  Rng rng(777);
  int evaluated = 0, refused = 0;
  double worst = 0;
  for (double lambda : {0.5, 0.75, 1.0}) {
    for (int k = 0; k < 200; ++k) {
      const Params p = Params::from_lambda(lambda, rng.integer(2, 6));
      const EvalReport r = evaluate(Form::kForm1, TestFunction::from_grid(random_monotone(rng), "S"), p);
      if (!r.ratio) {
        ++refused;
        continue;
      }
      ++evaluated;
      worst = std::max(worst, *r.ratio);
      require(o, *r.ratio <= 1 + 3 * r.ratio_error,
              "ratio " + fmt("%.12g", *r.ratio) + " at lambda " + fmt("%g", lambda));
    }
  }
  require(o, refused == 0, std::to_string(refused) + " refusals");
  o.detail += std::to_string(evaluated) + " functions, max ratio " + fmt("%.6f", worst);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "sharp-constant identity", 1.0, sharp_constant_identity},
      {2, "extremal equalities", 10.0, extremal_equalities},
      {3, "derivation-chain equivalence", 60.0, derivation_chain},
      {4, "tail-weight identity", 1e9, tail_weight},
      {5, "LP soundness", 120.0, lp_soundness},
      {6, "certified ratio probe", 1e9, ratio_probe},
      {7, "safe regime lambda <= 1", 1e9, safe_regime},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      o.passed = false;
      o.detail += "; over time budget";
    }
    all = all && o.passed;
    std::printf("CRITERION %d %s: %s (%.2f s) %s\n", c.id, c.name, o.passed ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
