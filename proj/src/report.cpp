#include "conjlab/report.hpp"

namespace conjlab {

using nlohmann::json;

json params_json(const Params& p) { return json{{"lambda", p.lambda()}, {"alpha", p.alpha()}, {"n", p.n()}}; }

json quad_json(const QuadOptions& q) {
  return json{{"abs_tol", q.abs_tol},
              {"rel_tol", q.rel_tol},
              {"max_depth", q.max_depth},
              {"max_evaluations", q.max_evaluations}};
}

json scan_json(const ScanSpec& s) {
  return json{{"t_min", s.t_min}, {"t_max", s.t_max}, {"points", s.points}, {"refine_log_width", s.refine_log_width}};
}

json eval_report_json(const EvalReport& r, const json& config) {
  json j;
  j["version"] = kToolVersion;
  j["config"] = config;
  j["form"] = form_name(r.form);
  j["params"] = params_json(r.params);
  j["function"] = r.label;
  j["constraint_sup"] = r.constraint_sup;
  j["argmax"] = r.constraint_argmax;
  j["edge_warning"] = r.edge_warning;
  j["objective_raw"] = r.objective_raw;
  j["objective"] = r.objective ? json(*r.objective) : json(nullptr);
  j["bound"] = r.bound;
  j["ratio"] = r.ratio ? json(*r.ratio) : json(nullptr);
  if (r.refusal) j["refusal"] = *r.refusal;
  j["errors"] = json{{"constraint_abs_error", r.constraint_abs_error},
                     {"objective_abs_error", r.objective_abs_error},
                     {"objective_converged", r.objective_converged},
                     {"ratio_error", r.ratio_error},
                     {"quadrature", quad_json(r.quad)},
                     {"scan", scan_json(r.scan_spec)}};
  return j;
}

json certificate_json(const Certificate& c) {
  auto check = [](const CheckResult& r) {
    json j{{"passed", r.passed}, {"margin", r.margin}};
    j["violating_t"] = r.violating_t ? json(*r.violating_t) : json(nullptr);
    return j;
  };
  return json{{"passed", c.passed()},
              {"interval", check(c.interval)},
              {"tail", check(c.tail)},
              {"head", check(c.head)},
              {"t_con", c.t_con},
              {"check_points", c.check_points}};
}

json search_json(const SearchResult& r, const Params& p, const SearchConfig& cfg, const json& config) {
  json j;
  j["version"] = kToolVersion;
  j["config"] = config;
  j["form"] = form_name(Form::kForm2);
  j["params"] = params_json(p);
  j["grids"] = json{{"tau", {{"lo", cfg.tau.lo}, {"hi", cfg.tau.hi}, {"points", cfg.tau.points}}},
                    {"t", {{"lo", cfg.t.lo}, {"hi", cfg.t.hi}, {"points", cfg.t.points}}},
                    {"t_con", cfg.t_con},
                    {"check_density", cfg.check_density}};
  j["status"] = lp_status_name(r.solution.status);
  j["iterations"] = r.solution.iterations;
  j["lp_objective"] = r.solution.objective_value;
  j["bound"] = r.bound;
  j["lp_ratio"] = r.lp_ratio;
  j["deflation"] = r.deflation;
  j["objective"] = r.certified.objective(p.alpha());
  j["ratio"] = r.certified_ratio;
  j["errors"] = json{{"max_relative_violation", r.solution.max_relative_violation},
                     {"active_constraints", r.solution.active_constraints.size()}};
  j["raw_certificate"] = certificate_json(r.raw_certificate);
  j["certificate"] = certificate_json(r.certificate);
  return j;
}

json cross_form_json(const CrossFormRatios& r, const json& config) {
  auto ratio = [](const EvalReport& e) { return e.ratio ? json(*e.ratio) : json(nullptr); };
  json j;
  j["version"] = kToolVersion;
  j["config"] = config;
  j["params"] = params_json(r.form1.params);
  j["ratios"] = json{{"FORM1", ratio(r.form1)},
                     {"FORM2", ratio(r.form2)},
                     {"FORM3", r.form3 ? ratio(*r.form3) : json(nullptr)}};
  j["form3_skipped"] = !r.form3.has_value();
  if (!r.form3) j["form3_skip_reason"] = r.form3_skip_reason;
  j["max_gap"] = r.max_gap ? json(*r.max_gap) : json(nullptr);
  j["all_refused"] = r.all_refused;
  json reports = json::array();
  for (const EvalReport* e : {&r.form1, &r.form2, r.form3 ? &*r.form3 : nullptr})
    if (e) reports.push_back(eval_report_json(*e, json::object()));
  j["reports"] = reports;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace conjlab
