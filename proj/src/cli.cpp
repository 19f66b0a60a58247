#include "conjlab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "conjlab/errors.hpp"
#include "conjlab/functionals.hpp"
#include "conjlab/io.hpp"
#include "conjlab/lp_search.hpp"
#include "conjlab/report.hpp"
#include "conjlab/sampling.hpp"
#include "conjlab/special_values.hpp"
#include "conjlab/transforms.hpp"

namespace conjlab {
namespace {

using nlohmann::json;

struct ParamArgs {
  std::optional<double> lambda;
  std::optional<double> alpha;
  int n = 2;

  void attach(CLI::App* cmd) {
    auto* l = cmd->add_option("--lambda", lambda, "rate parameter lambda");
    auto* a = cmd->add_option("--alpha", alpha, "rate parameter alpha = lambda/2");
    l->excludes(a);
    cmd->add_option("--n", n, "dimension parameter (integer >= 2)")->required();
  }

  Params get() const {
    if (lambda) return Params::from_lambda(*lambda, n);
    if (alpha) return Params::from_alpha(*alpha, n);
    throw ConfigError("one of --lambda or --alpha is required");
  }
};

struct FunctionArgs {
  std::string file;
  std::string cls = "h";
  std::string interp = "linear";
  std::string tail = "const";

  void attach(CLI::App* cmd, bool with_class) {
    cmd->add_option("--file", file, "function file (CSV with header knot,value)")->required();
    if (with_class) cmd->add_option("--class", cls, "function class: s | S | h | q")->check(CLI::IsMember({"s", "S", "h", "q"}));
    cmd->add_option("--interp", interp, "interpolation: linear | step")->check(CLI::IsMember({"linear", "step"}));
    cmd->add_option("--tail", tail, "tail beyond the last knot: const | power:<exp>");
  }

  GridFunction grid(bool monotone) const {
    const FunctionFile f = read_function_csv(std::filesystem::path(file));
    if (monotone) return GridFunction::make_monotone(f.knots, f.values, parse_interpolation(interp), parse_tail(tail));
    return GridFunction::make_nonnegative(f.knots, f.values, parse_interpolation(interp), parse_tail(tail));
  }

  json echo() const { return json{{"file", file}, {"class", cls}, {"interp", interp}, {"tail", tail}}; }
};

struct GridArgs {
  SearchConfig cfg;

  void attach(CLI::App* cmd) {
    cmd->add_option("--m", cfg.tau.points, "number of jump knots tau")->capture_default_str();
    cmd->add_option("--j", cfg.t.points, "number of constraint points t")->capture_default_str();
    cmd->add_option("--tau-min", cfg.tau.lo)->capture_default_str();
    cmd->add_option("--tau-max", cfg.tau.hi)->capture_default_str();
    cmd->add_option("--t-min", cfg.t.lo)->capture_default_str();
    cmd->add_option("--t-max", cfg.t.hi)->capture_default_str();
    cmd->add_option("--t-con", cfg.t_con, "tail certificate threshold")->capture_default_str();
    cmd->add_option("--iteration-cap", cfg.iteration_cap)->capture_default_str();
    cmd->add_option("--check-density", cfg.check_density, "interval-certificate refinement factor")->capture_default_str();
  }

  json echo() const {
    return json{{"m", cfg.tau.points},   {"j", cfg.t.points},     {"tau_min", cfg.tau.lo},
                {"tau_max", cfg.tau.hi}, {"t_min", cfg.t.lo},     {"t_max", cfg.t.hi},
                {"t_con", cfg.t_con},    {"iteration_cap", cfg.iteration_cap},
                {"check_density", cfg.check_density}};
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

json param_echo(const ParamArgs& p) {
  json j{{"n", p.n}};
  if (p.lambda) j["lambda"] = *p.lambda;
  if (p.alpha) j["alpha"] = *p.alpha;
  return j;
}

// ---------------------------------------------------------------- sharp-bound

int cmd_sharp_bound(const ParamArgs& pa, int form_tag, bool as_json, std::ostream& out) {
  const Params params = pa.get();
  const Form form = form_from_int(form_tag);
  params.require(form);
  const double product = sharp_bound(params, form);
  const double beta = sharp_bound_via_beta(params, form);
  const double rel = std::fabs(product - beta) / product;
  if (as_json) {
    out << dump(json{{"version", kToolVersion},
                     {"config", param_echo(pa)},
                     {"form", form_name(form)},
                     {"params", params_json(params)},
                     {"bound", product},
                     {"bound_via_beta", beta},
                     {"relative_difference", rel}});
  } else {
    out << format_number(product, 16) << "\n";
    out << "beta route: " << format_number(beta, 16) << " (relative difference " << format_number(rel, 6) << ")\n";
  }
  return kExitOk;
}

// ----------------------------------------------------------- verify-extremal

int cmd_verify_extremal(const ParamArgs& pa, double tol, const std::string& output, std::ostream& out,
                        std::ostream& err) {
  const Params params = pa.get();
  if (!(tol > 0.0)) throw ConfigError("--tol must be > 0");
  json forms = json::array();
  double worst = 0.0;
  for (Form form : {Form::kForm1, Form::kForm2, Form::kForm3}) {
    json entry{{"form", form_name(form)}};
    if (!params.valid_for(form)) {
      entry["skipped"] = true;
      entry["reason"] = form == Form::kForm1 ? "requires lambda >= 1/2" : "requires alpha > 1/2";
      forms.push_back(entry);
      continue;
    }
    const TestFunction f = extremal(params, form);
    ScanSpec spec = default_scan(f);
    spec.keep_curve = true;
    const ScanResult scan = constraint_sup_scan(form, f, params, spec);
    double dev_constraint = std::fabs(scan.sup - 1.0);
    for (const auto& [t, r] : scan.curve) dev_constraint = std::max(dev_constraint, std::fabs(r - 1.0));
    const QuadResult obj = objective_lhs(form, f, params);
    const double bound = sharp_bound(params, form);
    const double dev_objective = std::fabs(obj.value - bound) / bound;
    worst = std::max({worst, dev_constraint, dev_objective});
    entry["skipped"] = false;
    entry["coefficient"] = f.power()->coefficient;
    entry["exponent"] = f.power()->exponent;
    entry["constraint_max_deviation"] = dev_constraint;
    entry["objective"] = obj.value;
    entry["objective_abs_error"] = obj.abs_error_estimate;
    entry["bound"] = bound;
    entry["objective_rel_deviation"] = dev_objective;
    entry["passed"] = dev_constraint <= tol && dev_objective <= tol;
    forms.push_back(entry);
  }
  const bool passed = worst <= tol;
  json report{{"version", kToolVersion},
              {"config", json{{"params", param_echo(pa)}, {"tol", tol}}},
              {"params", params_json(params)},
              {"forms", forms},
              {"worst_deviation", worst},
              {"passed", passed},
              {"errors", json{{"quadrature", quad_json(functional_quad_defaults())}}}};
  emit(dump(report), output, out);
  if (!passed) {
    err << "extremal check failed: worst deviation " << format_number(worst, 6) << " exceeds " << format_number(tol, 6)
        << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ evaluate

TestFunction function_for(const FunctionArgs& fa, const Params& params, Form form) {
  if (fa.cls == "s") {
    const GridFunction s = fa.grid(true);
    if (form == Form::kForm1) return s_to_S(s).as_function("S");
    const FormBundle b = lift_s_to_bundle(s, params);
    return form == Form::kForm2 ? b.h : b.require_q();
  }
  if (fa.cls == "S") {
    if (form != Form::kForm1) throw ConfigError("class S is only evaluated in FORM1");
    return TestFunction::from_grid(fa.grid(true), "S");
  }
  if (fa.cls == "h") {
    if (form != Form::kForm2) throw ConfigError("class h is only evaluated in FORM2");
    return TestFunction::from_grid(fa.grid(true), "h");
  }
  if (form != Form::kForm3) throw ConfigError("class q is only evaluated in FORM3");
  return TestFunction::from_grid(fa.grid(false), "q");
}

struct EvaluateArgs {
  int form = 2;
  std::string output;
  std::string plot_data;
  std::string svg;
  std::optional<double> t_min;
  std::optional<double> t_max;
  int points = 400;
};

int cmd_evaluate(const ParamArgs& pa, const FunctionArgs& fa, const EvaluateArgs& ea, std::ostream& out,
                 std::ostream& err) {
  const Params params = pa.get();
  const Form form = form_from_int(ea.form);
  params.require(form);
  const TestFunction f = function_for(fa, params, form);
  EvalOptions opts;
  ScanSpec spec = default_scan(f);
  if (ea.t_min) spec.t_min = *ea.t_min;
  if (ea.t_max) spec.t_max = *ea.t_max;
  spec.points = ea.points;
  spec.keep_curve = !ea.plot_data.empty() || !ea.svg.empty();
  opts.scan = spec;
  const EvalReport r = evaluate(form, f, params, opts);
  json config{{"params", param_echo(pa)}, {"function", fa.echo()}, {"form", ea.form}};
  emit(dump(eval_report_json(r, config)), ea.output, out);
  if (!ea.plot_data.empty()) write_file_atomic(ea.plot_data, xy_csv("t,ratio", r.curve));
  if (!ea.svg.empty()) write_file_atomic(ea.svg, svg_line_plot(r.curve, "constraint ratio vs t"));
  if (r.refusal) {
    err << "refused: " << *r.refusal << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

// --------------------------------------------------------------- equivalence

int cmd_equivalence(const ParamArgs& pa, const std::string& file, const std::string& interp, const std::string& tail,
                    bool use_extremal, std::optional<std::uint64_t> seed, double tol, const std::string& output,
                    std::ostream& out, std::ostream& err) {
  const Params params = pa.get();
  params.require(Form::kForm1);
  params.require(Form::kForm2);
  const int sources = static_cast<int>(!file.empty()) + static_cast<int>(use_extremal) + static_cast<int>(seed.has_value());
  if (sources != 1) throw ConfigError("give exactly one of --file, --extremal, --random-seed");
  std::optional<FormBundle> bundle;
  if (use_extremal) {
    bundle = extremal_bundle(params);
  } else if (seed) {
    Rng rng(*seed);
    bundle = lift_s_to_bundle(random_density(rng, params.lambda()), params);
  } else {
    const FunctionFile f = read_function_csv(std::filesystem::path(file));
    bundle = lift_s_to_bundle(
        GridFunction::make_monotone(f.knots, f.values, parse_interpolation(interp), parse_tail(tail)), params);
  }
  const CrossFormRatios r = cross_form_ratio_check(*bundle);
  json config{{"params", param_echo(pa)}, {"tol", tol}, {"extremal", use_extremal}};
  if (seed) config["random_seed"] = *seed;
  if (!file.empty()) config["file"] = json{{"path", file}, {"interp", interp}, {"tail", tail}};
  emit(dump(cross_form_json(r, config)), output, out);
  if (r.all_refused) {
    err << "all formulations refused normalization (zero supremum)\n";
    return kExitCheckFailed;
  }
  if (!r.max_gap || *r.max_gap >= tol) {
    err << "formulation ratios disagree beyond " << format_number(tol, 6) << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

// ------------------------------------------------------------- search / sweep

std::string summary_header() {
  return "alpha,lambda,n,M,J,status,iterations,lp_ratio,certified_ratio,deflation,certified,candidate\n";
}

std::string summary_row(const Params& p, const SearchConfig& cfg, const SearchResult& r, const CandidateReview& c) {
  std::ostringstream row;
  row << format_number(p.alpha(), 17) << ',' << format_number(p.lambda(), 17) << ',' << p.n() << ',' << cfg.tau.points
      << ',' << cfg.t.points << ',' << lp_status_name(r.solution.status) << ',' << r.solution.iterations << ','
      << format_number(r.lp_ratio, 17) << ',' << format_number(r.certified_ratio, 17) << ','
      << format_number(r.deflation, 17) << ',' << (r.certificate.passed() ? "true" : "false") << ','
      << (c.candidate ? "true" : "false") << '\n';
  return row.str();
}

// FORM1 and FORM2 ratios of the certified step h, read through the transforms.
json form_readings(const SearchResult& r, const Params& params) {
  StepData steps;
  for (std::size_t i = 0; i < r.certified.increments.size(); ++i) {
    if (r.certified.increments[i] <= 0.0) continue;
    steps.jumps.push_back(r.certified.jump_knots[i]);
    steps.increments.push_back(r.certified.increments[i]);
  }
  const CrossFormRatios x = cross_form_ratio_check(lift_s_to_bundle(density_from_step_h(steps, params), params));
  json j{{"FORM1", x.form1.ratio ? json(*x.form1.ratio) : json(nullptr)},
         {"FORM2", x.form2.ratio ? json(*x.form2.ratio) : json(nullptr)},
         {"FORM3", nullptr},
         {"form3_skip_reason", x.form3_skip_reason}};
  j["max_gap"] = x.max_gap ? json(*x.max_gap) : json(nullptr);
  return j;
}

bool run_ok(const SearchResult& r) { return r.solution.status == LpStatus::kOptimal && r.certificate.passed(); }

int cmd_search(const ParamArgs& pa, const GridArgs& ga, const std::string& out_dir, const std::string& prefix,
               std::ostream& out, std::ostream& err) {
  const Params params = pa.get();
  const std::filesystem::path dir(out_dir);
  if (!std::filesystem::is_directory(dir)) throw ConfigError("output directory does not exist: " + out_dir);
  const SearchResult r = search_ratio(params, ga.cfg);
  const CandidateReview review = review_candidate(params, ga.cfg, r);
  json config{{"params", param_echo(pa)}, {"grids", ga.echo()}, {"out_dir", out_dir}, {"prefix", prefix}};
  json report = search_json(r, params, ga.cfg, config);
  report["candidate"] = review.candidate;
  report["refined_ratio"] = review.refined_ratio ? json(*review.refined_ratio) : json(nullptr);
  if (run_ok(r)) report["form_readings"] = form_readings(r, params);

  const GridFunction h = r.certified.as_grid();
  std::ostringstream csv;
  write_function_csv(csv, h.knots(), h.values());
  write_file_atomic(dir / (prefix + "_h.csv"), csv.str());
  write_file_atomic(dir / (prefix + "_certificate.json"), dump(report));
  write_file_atomic(dir / (prefix + "_summary.csv"), summary_header() + summary_row(params, ga.cfg, r, review));
  out << dump(report);
  if (!run_ok(r)) {
    err << "certificate failure (status " << lp_status_name(r.solution.status)
        << "); densify the grids or raise the iteration cap and re-run\n";
    return kExitCertificateFailed;
  }
  return kExitOk;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad list entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

int cmd_sweep(const std::string& alphas, const std::string& ns, const GridArgs& ga, const std::string& output,
              std::ostream& out, std::ostream& err) {
  const auto alpha_list = parse_list(alphas);
  const auto n_list = parse_list(ns);
  std::vector<Params> cells;
  for (double a : alpha_list)
    for (double nn : n_list) {
      if (nn != std::floor(nn)) throw ConfigError("n must be an integer");
      const Params p = Params::from_alpha(a, static_cast<int>(nn));
      p.require(Form::kForm2);
      cells.push_back(p);
    }
  std::string csv = summary_header();
  bool all_ok = true;
  for (const Params& p : cells) {
    const SearchResult r = search_ratio(p, ga.cfg);
    const CandidateReview review = review_candidate(p, ga.cfg, r);
    all_ok = all_ok && run_ok(r);
    csv += summary_row(p, ga.cfg, r, review);
  }
  emit(csv, output, out);
  if (!all_ok) {
    err << "at least one cell failed certification; densify the grids\n";
    return kExitCertificateFailed;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks of a sharp weighted-integral inequality and an LP search for violations", "conjlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  ParamArgs sb_params;
  int sb_form = 1;
  bool sb_json = false;
  auto* sb = app.add_subcommand("sharp-bound", "print the sharp right-hand constant of a formulation");
  sb_params.attach(sb);
  sb->add_option("--form", sb_form, "formulation 1 | 2 | 3")->required()->check(CLI::Range(1, 3));
  sb->add_flag("--json", sb_json, "emit JSON instead of text");

  ParamArgs ve_params;
  double ve_tol = 1e-6;
  std::string ve_out;
  auto* ve = app.add_subcommand("verify-extremal", "check that the power-law extremals attain equality");
  ve_params.attach(ve);
  ve->add_option("--tol", ve_tol, "deviation tolerance")->capture_default_str();
  ve->add_option("--output", ve_out, "write the JSON report here instead of stdout");

  ParamArgs ev_params;
  FunctionArgs ev_fn;
  EvaluateArgs ev_args;
  auto* ev = app.add_subcommand("evaluate", "normalize a test function and compare its objective to the bound");
  ev_params.attach(ev);
  ev_fn.attach(ev, true);
  ev->add_option("--form", ev_args.form, "formulation 1 | 2 | 3")->required()->check(CLI::Range(1, 3));
  ev->add_option("--output", ev_args.output, "write the JSON report here instead of stdout");
  ev->add_option("--plot-data", ev_args.plot_data, "write (t, ratio) CSV here");
  ev->add_option("--svg", ev_args.svg, "write a minimal SVG plot of the ratio here");
  ev->add_option("--t-min", ev_args.t_min);
  ev->add_option("--t-max", ev_args.t_max);
  ev->add_option("--points", ev_args.points)->capture_default_str();

  ParamArgs eq_params;
  std::string eq_file, eq_interp = "linear", eq_tail = "const", eq_out;
  bool eq_extremal = false;
  std::optional<std::uint64_t> eq_seed;
  double eq_tol = 1e-5;
  auto* eq = app.add_subcommand("equivalence", "compare the ratios of all three formulations for one density s");
  eq_params.attach(eq);
  eq->add_option("--file", eq_file, "density s as CSV (header knot,value)");
  eq->add_option("--interp", eq_interp)->check(CLI::IsMember({"linear", "step"}));
  eq->add_option("--tail", eq_tail);
  eq->add_flag("--extremal", eq_extremal, "use the extremal density");
  eq->add_option("--random-seed", eq_seed, "use a random smooth density from this seed");
  eq->add_option("--tol", eq_tol)->capture_default_str();
  eq->add_option("--output", eq_out);

  ParamArgs se_params;
  GridArgs se_grids;
  std::string se_dir = ".", se_prefix = "search";
  auto* se = app.add_subcommand("search", "LP search over increasing step functions with a certificate");
  se_params.attach(se);
  se_grids.attach(se);
  se->add_option("--out-dir", se_dir)->capture_default_str();
  se->add_option("--prefix", se_prefix)->capture_default_str();

  std::string sw_alphas = "0.6,1,1.5,2,3", sw_ns = "2,3,4", sw_out;
  GridArgs sw_grids;
  auto* sw = app.add_subcommand("sweep", "run search over a grid of (alpha, n) cells; one CSV row per cell");
  sw->add_option("--alphas", sw_alphas)->capture_default_str();
  sw->add_option("--ns", sw_ns)->capture_default_str();
  sw_grids.attach(sw);
  sw->add_option("--output", sw_out, "write the CSV summary here instead of stdout");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (sb->parsed()) return cmd_sharp_bound(sb_params, sb_form, sb_json, out);
    if (ve->parsed()) return cmd_verify_extremal(ve_params, ve_tol, ve_out, out, err);
    if (ev->parsed()) return cmd_evaluate(ev_params, ev_fn, ev_args, out, err);
    if (eq->parsed())
      return cmd_equivalence(eq_params, eq_file, eq_interp, eq_tail, eq_extremal, eq_seed, eq_tol, eq_out, out, err);
    if (se->parsed()) return cmd_search(se_params, se_grids, se_dir, se_prefix, out, err);
    if (sw->parsed()) return cmd_sweep(sw_alphas, sw_ns, sw_grids, sw_out, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ConstructionError& e) {
    err << "class violation: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace conjlab
