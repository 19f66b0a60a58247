#include "conjlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conjlab/errors.hpp"
#include "conjlab/special_values.hpp"

namespace conjlab {
namespace {

std::vector<double> scaled_breaks(const TestFunction& f, double t) {
  std::vector<double> out;
  for (double b : f.breaks()) {
    const double x = b / t;
    if (x > 0.0 && x < 1.0) out.push_back(x);
  }
  return out;
}

void require_zero_at_origin(Form form, const TestFunction& f) {
  const double f0 = f(0.0);
  if (form == Form::kForm2 && f0 > 0.0) {
    throw DivergenceError("FORM2 requires h(0) = 0: the constraint integral of h(0)/x diverges");
  }
  if (form == Form::kForm1 && f0 > 0.0) throw DomainError("FORM1 requires S(0) = 0");
}

QuadResult exact(double value) {
  QuadResult r;
  r.value = value;
  r.abs_error_estimate = 16.0 * std::numeric_limits<double>::epsilon() * std::fabs(value);
  return r;
}

}  // namespace

QuadOptions functional_quad_defaults() {
  QuadOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-11;
  return o;
}

QuadResult constraint_lhs(Form form, const TestFunction& f, double t, const Params& params,
                          const QuadOptions& opts) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("constraint_lhs requires finite t >= 0");
  require_zero_at_origin(form, f);
  const int n = params.n();
  if (t == 0.0) {
    switch (form) {
      case Form::kForm1:
        return exact(0.0);
      case Form::kForm2:
        return exact(0.0);
      case Form::kForm3:
        // \int_0^1 K(x) dx = 1/n
        return exact(f(0.0) / n);
    }
  }
  const std::vector<double> breaks = scaled_breaks(f, t);
  Integrand g;
  switch (form) {
    case Form::kForm1:
      g = [&f, t, n](double x) {
        const double s = f(t * x);
        return s == 0.0 ? 0.0 : s * std::pow(1.0 - x * x, n - 2) * x;
      };
      break;
    case Form::kForm2:
      g = [&f, t, n](double x) {
        const double h = f(t * x);
        return h == 0.0 ? 0.0 : h * std::pow(1.0 - x, n - 1) / x;
      };
      break;
    case Form::kForm3:
      g = [&f, t, n](double x) {
        const double q = f(t * x);
        return q == 0.0 ? 0.0 : kernel_K(x, n) * q;
      };
      break;
  }
  return integrate_finite(g, 0.0, 1.0, breaks, opts);
}

QuadResult objective_lhs(Form form, const TestFunction& f, const Params& params, ObjectivePath path,
                         const QuadOptions& opts) {
  require_zero_at_origin(form, f);
  const double lambda = params.lambda();
  const double alpha = params.alpha();
  const double p = f.tail_exponent();
  switch (form) {
    case Form::kForm1: {
      if (p >= 2.0 * lambda) throw DivergenceError("objective diverges: S grows like t^p with p >= 2 lambda");
      const Integrand g = [&f, lambda](double t) {
        const double s = f(t);
        if (s == 0.0) return 0.0;
        const double y = std::pow(t, lambda);
        const double d = 1.0 / y + y;
        return s / (t * d * d);
      };
      return integrate_semi_infinite(g, 0.0, f.breaks(), opts);
    }
    case Form::kForm2: {
      if (p >= 2.0 * alpha) throw DivergenceError("objective diverges: h grows like t^p with p >= 2 alpha");
      if (path == ObjectivePath::kAuto && f.steps()) {
        double acc = 0.0;
        const StepData& s = *f.steps();
        for (std::size_t i = 0; i < s.jumps.size(); ++i) acc += s.increments[i] * kernel_Psi(s.jumps[i], alpha);
        return exact(acc);
      }
      const Integrand g = [&f, alpha](double t) {
        const double h = f(t);
        if (h == 0.0) return 0.0;
        return h / (t * (1.0 + std::pow(t, 2.0 * alpha)));
      };
      return integrate_semi_infinite(g, 0.0, f.breaks(), opts);
    }
    case Form::kForm3: {
      if (p >= 2.0 * alpha - 1.0) {
        throw DivergenceError("objective diverges: q grows like t^p with p >= 2 alpha - 1");
      }
      const Integrand g = [&f, alpha](double t) {
        const double q = f(t);
        if (q == 0.0) return 0.0;
        return q * 2.0 * alpha * kernel_Psi(t, alpha);
      };
      return integrate_semi_infinite(g, 0.0, f.breaks(), opts);
    }
  }
  throw DomainError("invalid formulation");
}

ScanSpec default_scan(const TestFunction& f) {
  ScanSpec s;
  const auto breaks = f.breaks();
  double first = 1.0;
  double last = 1.0;
  for (double b : breaks)
    if (b > 0.0) {
      first = b;
      break;
    }
  if (!breaks.empty()) last = std::max(1.0, breaks.back());
  s.t_min = 1e-4 * first;
  s.t_max = 1e4 * last;
  return s;
}

ScanResult constraint_sup_scan(Form form, const TestFunction& f, const Params& params, const ScanSpec& spec,
                               const QuadOptions& opts) {
  if (!(spec.t_min > 0.0) || !(spec.t_max > spec.t_min)) throw ConfigError("scan needs 0 < t_min < t_max");
  if (spec.points < 100) throw ConfigError("scan needs at least 100 points");
  const double rate = params.rate(form);
  ScanResult out;
  struct Sample {
    double ratio;
    double error;
  };
  auto ratio_at = [&](double log_t) {
    const double t = std::exp(log_t);
    const QuadResult q = constraint_lhs(form, f, t, params, opts);
    out.evaluations += q.evaluations;
    const double denom = std::pow(t, rate);
    return Sample{q.value / denom, q.abs_error_estimate / denom};
  };

  const double lo = std::log(spec.t_min);
  const double hi = std::log(spec.t_max);
  const int m = spec.points;
  std::vector<double> grid(m);
  std::vector<Sample> samples(m);
  for (int i = 0; i < m; ++i) {
    grid[i] = i + 1 == m ? hi : lo + (hi - lo) * i / (m - 1);
    samples[i] = ratio_at(grid[i]);
  }
  int best = 0;
  out.min_ratio = samples[0].ratio;
  for (int i = 1; i < m; ++i) {
    if (samples[i].ratio > samples[best].ratio) best = i;
    out.min_ratio = std::min(out.min_ratio, samples[i].ratio);
  }
  if (spec.keep_curve) {
    out.curve.reserve(m);
    for (int i = 0; i < m; ++i) out.curve.emplace_back(std::exp(grid[i]), samples[i].ratio);
  }
  out.max_grid_ratio = samples[best].ratio;
  out.sup = samples[best].ratio;
  out.argmax = std::exp(grid[best]);
  out.abs_error = samples[best].error;

  const double peak = samples[best].ratio;
  auto outward = [&](int edge, int inner) {
    return peak > 0.0 && samples[edge].ratio > samples[inner].ratio * (1.0 + 1e-9);
  };
  if ((best == 0 && outward(0, 1)) || (best == m - 1 && outward(m - 1, m - 2))) out.edge_warning = true;

  if (peak > 0.0) {
    auto refine = [&](int centre) {
      double a = grid[std::max(0, centre - 1)];
      double b = grid[std::min(m - 1, centre + 1)];
      const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
      double c = b - inv_phi * (b - a);
      double d = a + inv_phi * (b - a);
      Sample fc = ratio_at(c);
      Sample fd = ratio_at(d);
      for (int it = 0; it < 200 && (b - a) > spec.refine_log_width; ++it) {
        if (fc.ratio >= fd.ratio) {
          b = d;
          d = c;
          fd = fc;
          c = b - inv_phi * (b - a);
          fc = ratio_at(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + inv_phi * (b - a);
          fd = ratio_at(d);
        }
      }
      for (const auto& [x, smp] : {std::pair{c, fc}, std::pair{d, fd}}) {
        if (smp.ratio > out.sup) {
          out.sup = smp.ratio;
          out.argmax = std::exp(x);
          out.abs_error = smp.error;
        }
      }
    };

    // Golden-section refinement in log t around grid local maxima, in order
    // of the parabolic peak predicted from the three neighbouring samples.
    std::vector<std::pair<double, int>> candidates;
    for (int i = 0; i < m; ++i) {
      const double left = i > 0 ? samples[i - 1].ratio : -1.0;
      const double right = i + 1 < m ? samples[i + 1].ratio : -1.0;
      const double mid = samples[i].ratio;
      if (mid <= 0.0 || mid < left || mid < right) continue;
      double predicted = mid;
      if (left >= 0.0 && right >= 0.0) {
        const double curv = left - 2.0 * mid + right;
        if (curv < 0.0) predicted = mid - (right - left) * (right - left) / (8.0 * curv);
      }
      candidates.emplace_back(predicted, i);
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    constexpr std::size_t kMaxRefinements = 64;
    refine(best);
    for (std::size_t k = 0; k < candidates.size() && k < kMaxRefinements; ++k) {
      if (candidates[k].first <= out.sup * (1.0 + 1e-12)) break;
      if (candidates[k].second != best) refine(candidates[k].second);
    }
  }
  return out;
}

TestFunction normalize(const TestFunction& f, const ScanResult& scan) {
  if (!(scan.sup > 0.0)) throw NormalizationError("constraint supremum is zero; nothing to normalize");
  if (scan.edge_warning) throw NormalizationError("constraint ratio grows at the scan edge; supremum looks unbounded");
  if (!std::isfinite(scan.sup)) throw NormalizationError("constraint supremum is not finite");
  return f.scaled(1.0 / scan.sup);
}

TestFunction normalize(Form form, const TestFunction& f, const Params& params) {
  return normalize(f, constraint_sup_scan(form, f, params, default_scan(f)));
}

EvalReport evaluate(Form form, const TestFunction& f, const Params& params, const EvalOptions& opts) {
  EvalReport r;
  r.form = form;
  r.params = params;
  r.label = f.label();
  r.bound = sharp_bound(params, form);
  r.scan_spec = opts.scan.value_or(default_scan(f));
  r.quad = opts.quad;

  const ScanResult scan = constraint_sup_scan(form, f, params, r.scan_spec, opts.quad);
  r.constraint_sup = scan.sup;
  r.constraint_argmax = scan.argmax;
  r.edge_warning = scan.edge_warning;
  r.constraint_abs_error = scan.abs_error;
  r.curve = scan.curve;
  try {
    normalize(f, scan);
  } catch (const NormalizationError& e) {
    r.refusal = e.what();
    return r;
  }
  const QuadResult obj = objective_lhs(form, f, params, opts.path, opts.quad);
  r.objective_raw = obj.value;
  r.objective_abs_error = obj.abs_error_estimate;
  r.objective_converged = obj.converged;
  r.objective = obj.value / scan.sup;
  r.ratio = *r.objective / r.bound;
  const double rel_obj = obj.value != 0.0 ? obj.abs_error_estimate / std::fabs(obj.value) : 0.0;
  r.ratio_error = std::fabs(*r.ratio) * (rel_obj + scan.abs_error / scan.sup);
  return r;
}

}  // namespace conjlab
