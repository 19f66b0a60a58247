#include "conjlab/lp_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conjlab/errors.hpp"
#include "conjlab/simd/kernels.hpp"
#include "conjlab/special_values.hpp"

namespace conjlab {

std::vector<double> log_grid(const GridSpec& spec) {
  if (spec.points < 0) throw ConfigError("grid size must be >= 0");
  if (spec.points == 0) return {};
  if (!(spec.lo > 0.0) || !std::isfinite(spec.hi)) throw ConfigError("log grid needs 0 < lo and finite hi");
  if (spec.points == 1) return {spec.lo};
  if (!(spec.hi > spec.lo)) throw ConfigError("log grid needs lo < hi");
  std::vector<double> g(spec.points);
  const double l0 = std::log(spec.lo);
  const double l1 = std::log(spec.hi);
  for (int i = 0; i < spec.points; ++i) g[i] = std::exp(l0 + (l1 - l0) * i / (spec.points - 1));
  g.front() = spec.lo;
  g.back() = spec.hi;
  return g;
}

std::vector<double> refine_grid(std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size() * 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) out.push_back(std::sqrt(grid[i - 1] * grid[i]));
    out.push_back(grid[i]);
  }
  return out;
}

double StepIncrements::total() const {
  double acc = 0.0;
  for (double d : increments) acc += d;
  return acc;
}

double StepIncrements::constraint_lhs(double t, int n) const {
  thread_local std::vector<double> kernel;
  kernel.assign(jump_knots.size(), 0.0);
  std::size_t active = 0;
  for (; active < jump_knots.size() && jump_knots[active] < t; ++active)
    kernel[active] = kernel_K(jump_knots[active] / t, n);
  return simd::dot(std::span<const double>(increments.data(), active), std::span<const double>(kernel.data(), active));
}

double StepIncrements::objective(double alpha) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < jump_knots.size(); ++i)
    if (increments[i] != 0.0) acc += increments[i] * kernel_Psi(jump_knots[i], alpha);
  return acc;
}

StepIncrements StepIncrements::scaled(double c) const {
  StepIncrements out = *this;
  simd::scale(c, out.increments);
  return out;
}

TestFunction StepIncrements::as_function(std::string label) const {
  StepData d;
  for (std::size_t i = 0; i < jump_knots.size(); ++i) {
    if (increments[i] <= 0.0) continue;
    d.jumps.push_back(jump_knots[i]);
    d.increments.push_back(increments[i]);
  }
  return TestFunction::from_steps(std::move(d), std::move(label));
}

GridFunction StepIncrements::as_grid() const {
  if (jump_knots.empty()) return GridFunction::make_monotone({1.0}, {0.0}, Interpolation::kStepLeft);
  std::vector<double> values(jump_knots.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = acc += std::max(0.0, increments[i]);
  return GridFunction::make_monotone(jump_knots, std::move(values), Interpolation::kStepLeft);
}

LpModel build_model(const Params& params, std::vector<double> tau, std::vector<double> t) {
  params.require(Form::kForm2);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (!(tau[i] > 0.0) || !std::isfinite(tau[i])) throw ConfigError("tau grid entries must be finite and > 0");
    if (i > 0 && !(tau[i] > tau[i - 1])) throw ConfigError("tau grid must be strictly increasing");
  }
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (!(t[j] > 0.0) || !std::isfinite(t[j])) throw ConfigError("t grid entries must be finite and > 0");
    if (j > 0 && !(t[j] > t[j - 1])) throw ConfigError("t grid must be strictly increasing");
  }
  if (!tau.empty() && t.empty()) throw ConfigError("t grid is empty");
  const double alpha = params.alpha();
  const int n = params.n();
  LpModel m{params, std::move(tau), std::move(t), {}, {}, {}};
  m.c.resize(m.cols());
  m.b.resize(m.rows());
  m.a.assign(m.rows() * m.cols(), 0.0);
  for (std::size_t i = 0; i < m.cols(); ++i) m.c[i] = kernel_Psi(m.tau[i], alpha);
  for (std::size_t j = 0; j < m.rows(); ++j) {
    m.b[j] = std::pow(m.t[j], alpha);
    for (std::size_t i = 0; i < m.cols() && m.tau[i] < m.t[j]; ++i) m.a[j * m.cols() + i] = kernel_K(m.tau[i] / m.t[j], n);
  }
  return m;
}

LpModel build_model(const Params& params, const GridSpec& tau, const GridSpec& t) {
  return build_model(params, log_grid(tau), log_grid(t));
}

std::string_view lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "OPTIMAL";
    case LpStatus::kUnbounded:
      return "UNBOUNDED";
    case LpStatus::kIterationLimit:
      return "ITERATION_LIMIT";
  }
  return "?";
}

namespace {

// Explicit inverse of the dense square matrix m (row-major), Gauss-Jordan with
// partial pivoting.
std::vector<double> invert(std::vector<double> m, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r * n + col]) > std::fabs(m[piv * n + col])) piv = r;
    if (m[piv * n + col] == 0.0) throw ConfigError("singular simplex basis");
    if (piv != col) {
      std::swap_ranges(m.begin() + piv * n, m.begin() + (piv + 1) * n, m.begin() + col * n);
      std::swap_ranges(inv.begin() + piv * n, inv.begin() + (piv + 1) * n, inv.begin() + col * n);
    }
    const double d = 1.0 / m[col * n + col];
    simd::scale(d, std::span<double>(m.data() + col * n, n));
    simd::scale(d, std::span<double>(inv.data() + col * n, n));
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r * n + col];
      if (f == 0.0) continue;
      simd::axpy(-f, std::span<const double>(m.data() + col * n, n), std::span<double>(m.data() + r * n, n));
      simd::axpy(-f, std::span<const double>(inv.data() + col * n, n), std::span<double>(inv.data() + r * n, n));
    }
  }
  return inv;
}

}  // namespace

DenseLpResult solve_dense_lp(std::size_t rows, std::size_t cols, std::span<const double> a_row_major,
                             std::span<const double> b, std::span<const double> c, const SimplexOptions& opts) {
  if (a_row_major.size() != rows * cols || b.size() != rows || c.size() != cols) {
    throw ConfigError("LP dimensions do not match");
  }
  for (double bj : b)
    if (!(bj > 0.0) || !std::isfinite(bj)) throw ConfigError("LP right sides must be finite and > 0");

  DenseLpResult out;
  out.x.assign(cols, 0.0);
  if (cols == 0) return out;

  // Column scaling: x_i = scale_i * y_i with the scaled column max equal to 1.
  std::vector<double> col_scale(cols, 1.0);
  for (std::size_t i = 0; i < cols; ++i) {
    double mx = 0.0;
    for (std::size_t j = 0; j < rows; ++j) mx = std::max(mx, std::fabs(a_row_major[j * cols + i]) / b[j]);
    col_scale[i] = mx > 0.0 ? 1.0 / mx : 1.0;
  }

  const std::size_t width = cols + rows + 1;  // structural, slack, rhs
  const std::size_t rhs = width - 1;
  // Scaled original rows [A | I | 1] and costs, kept for reinversion.
  std::vector<double> orig(rows * width, 0.0);
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t i = 0; i < cols; ++i) orig[j * width + i] = a_row_major[j * cols + i] / b[j] * col_scale[i];
    orig[j * width + cols + j] = 1.0;
    orig[j * width + rhs] = 1.0;
  }
  std::vector<double> cost(rhs, 0.0);
  for (std::size_t i = 0; i < cols; ++i) cost[i] = c[i] * col_scale[i];

  std::vector<double> tab((rows + 1) * width, 0.0);
  std::copy(orig.begin(), orig.end(), tab.begin());
  auto row = [&](std::size_t r) { return std::span<double>(tab.data() + r * width, width); };
  auto obj = row(rows);
  std::copy(cost.begin(), cost.end(), obj.begin());

  std::vector<std::size_t> basis(rows);
  for (std::size_t j = 0; j < rows; ++j) basis[j] = cols + j;

  // Rebuilds the tableau as B^{-1} [A | I | 1] and the reduced costs from the
  // original data, discarding accumulated pivot roundoff.
  auto reinvert = [&] {
    std::vector<double> bm(rows * rows);
    for (std::size_t j = 0; j < rows; ++j)
      for (std::size_t k = 0; k < rows; ++k) bm[j * rows + k] = orig[j * width + basis[k]];
    const std::vector<double> inv = invert(std::move(bm), rows);
    std::fill(tab.begin(), tab.end(), 0.0);
    for (std::size_t j = 0; j < rows; ++j) {
      auto rj = row(j);
      for (std::size_t k = 0; k < rows; ++k) {
        const double f = inv[j * rows + k];
        if (f != 0.0) simd::axpy(f, std::span<const double>(orig.data() + k * width, width), rj);
      }
      rj[basis[j]] = 1.0;
    }
    std::copy(cost.begin(), cost.end(), obj.begin());
    obj[rhs] = 0.0;
    for (std::size_t j = 0; j < rows; ++j) {
      const double f = cost[basis[j]];
      if (f != 0.0) simd::axpy(-f, row(j), obj);
    }
    for (std::size_t j = 0; j < rows; ++j) obj[basis[j]] = 0.0;
  };

  constexpr long kReinvertEvery = 100;
  constexpr long kStallLimit = 50;
  constexpr double kFeasTol = 1e-9;
  long since_reinvert = 0;
  long degenerate_run = 0;

  out.status = LpStatus::kOptimal;
  for (;;) {
    if (since_reinvert >= kReinvertEvery) {
      reinvert();
      since_reinvert = 0;
    }
    const bool bland = degenerate_run >= kStallLimit;
    std::size_t enter = width;
    double best_cost = opts.cost_tol;
    for (std::size_t k = 0; k < rhs; ++k) {
      if (obj[k] > best_cost) {
        enter = k;
        if (bland) break;
        best_cost = obj[k];
      }
    }
    if (enter == width) {
      if (since_reinvert > 0) {
        reinvert();
        since_reinvert = 0;
        continue;
      }
      break;
    }
    if (out.iterations >= opts.iteration_cap) {
      out.status = LpStatus::kIterationLimit;
      break;
    }

    // Harris ratio test: bound the step with a small feasibility allowance,
    // then pick the largest pivot (smallest basis index when stalling).
    double theta_max = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < rows; ++j) {
      const double coef = tab[j * width + enter];
      if (coef > opts.pivot_tol) theta_max = std::min(theta_max, (std::max(0.0, tab[j * width + rhs]) + kFeasTol) / coef);
    }
    if (!std::isfinite(theta_max)) {
      out.status = LpStatus::kUnbounded;
      break;
    }
    std::size_t leave = rows;
    for (std::size_t j = 0; j < rows; ++j) {
      const double coef = tab[j * width + enter];
      if (coef <= opts.pivot_tol) continue;
      if (std::max(0.0, tab[j * width + rhs]) / coef > theta_max) continue;
      if (leave == rows) {
        leave = j;
      } else if (bland ? basis[j] < basis[leave] : coef > tab[leave * width + enter]) {
        leave = j;
      }
    }
    const double step = std::max(0.0, tab[leave * width + rhs]) / tab[leave * width + enter];
    degenerate_run = step <= 1e-15 ? degenerate_run + 1 : 0;

    auto pr = row(leave);
    simd::scale(1.0 / pr[enter], pr);
    pr[enter] = 1.0;
    if (pr[rhs] < 0.0) pr[rhs] = 0.0;
    for (std::size_t j = 0; j <= rows; ++j) {
      if (j == leave) continue;
      auto rj = row(j);
      const double f = rj[enter];
      if (f == 0.0) continue;
      simd::axpy(-f, pr, rj);
      rj[enter] = 0.0;
    }
    basis[leave] = enter;
    ++out.iterations;
    ++since_reinvert;
  }

  for (std::size_t j = 0; j < rows; ++j)
    if (basis[j] < cols) out.x[basis[j]] = std::max(0.0, tab[j * width + rhs]) * col_scale[basis[j]];
  double z = 0.0;
  for (std::size_t i = 0; i < cols; ++i) z += c[i] * out.x[i];
  out.objective = z;
  out.basis = std::move(basis);
  return out;
}

LpSolution simplex_solve(const LpModel& model, long iteration_cap) {
  SimplexOptions opts;
  opts.iteration_cap = iteration_cap;
  const DenseLpResult r = solve_dense_lp(model.rows(), model.cols(), model.a, model.b, model.c, opts);
  LpSolution s;
  s.increments.jump_knots = model.tau;
  s.increments.increments = r.x;
  s.objective_value = r.objective;
  s.status = r.status;
  s.iterations = r.iterations;
  for (std::size_t j = 0; j < model.rows(); ++j) {
    const double lhs = simd::dot(std::span<const double>(model.a.data() + j * model.cols(), model.cols()), r.x);
    const double rel = (lhs - model.b[j]) / model.b[j];
    s.max_relative_violation = std::max(s.max_relative_violation, rel);
    if (rel > -1e-9) s.active_constraints.push_back(j);
  }
  return s;
}

namespace {

std::vector<double> check_grid(std::span<const double> t_grid, double t_con, int density) {
  if (density < 1) throw ConfigError("check density must be >= 1");
  std::vector<double> g(t_grid.begin(), t_grid.end());
  if (g.empty()) g.push_back(t_con);
  int refined = 1;
  while (refined < density && g.size() > 1) {
    g = refine_grid(g);
    refined *= 2;
  }
  if (g.back() < t_con) {
    const double step = g.size() > 1 ? g[g.size() - 1] / g[g.size() - 2] : 1.01;
    while (g.back() * step < t_con) g.push_back(g.back() * step);
    g.push_back(t_con);
  }
  return g;
}

struct TailBound {
  double h_inf = 0.0;
  double log_tau_eff = 0.0;
  bool all_below_t_con = true;
};

TailBound tail_bound(const StepIncrements& x, double t_con) {
  TailBound tb;
  double weighted = 0.0;
  for (std::size_t i = 0; i < x.jump_knots.size(); ++i) {
    if (x.increments[i] <= 0.0) continue;
    tb.h_inf += x.increments[i];
    weighted += x.increments[i] * std::log(x.jump_knots[i]);
    if (x.jump_knots[i] > t_con) tb.all_below_t_con = false;
  }
  if (tb.h_inf > 0.0) tb.log_tau_eff = weighted / tb.h_inf;
  return tb;
}

constexpr double kGuard = 1e-12;

}  // namespace

Certificate certify(const StepIncrements& x, const Params& params, double t_con, std::span<const double> t_grid,
                    int density) {
  if (!(t_con > 0.0)) throw ConfigError("T_con must be > 0");
  const double alpha = params.alpha();
  const int n = params.n();
  Certificate cert;
  cert.t_con = t_con;

  // Head: jumps positive, increments nonnegative, LHS = 0 up to the first active jump.
  std::optional<double> first_active;
  cert.head.passed = true;
  for (std::size_t i = 0; i < x.jump_knots.size(); ++i) {
    if (!(x.jump_knots[i] > 0.0) || x.increments[i] < 0.0) {
      cert.head.passed = false;
      cert.head.violating_t = 0.0;
    }
    if (!first_active && x.increments[i] > 0.0) first_active = x.jump_knots[i];
  }
  if (first_active) {
    const double at_first = x.constraint_lhs(*first_active, n);
    if (at_first != 0.0) {
      cert.head.passed = false;
      cert.head.violating_t = *first_active;
    }
    cert.head.margin = *first_active;
  } else {
    cert.head.margin = std::numeric_limits<double>::infinity();
  }

  // Interval certificate on [first check point, t_con]; below the first point
  // the head check applies when the grid starts before the first jump.
  std::vector<double> g = check_grid(t_grid, t_con, density);
  if (first_active && g.front() > *first_active) g.insert(g.begin(), *first_active);
  cert.check_points = g.size();
  cert.interval.passed = true;
  cert.interval.margin = std::numeric_limits<double>::infinity();
  if (first_active) {
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
      const double lhs = x.constraint_lhs(g[j + 1], n);
      if (lhs == 0.0) continue;
      const double cap = std::pow(g[j], alpha);
      const double margin = (cap - lhs) / cap;
      if (margin < cert.interval.margin) {
        cert.interval.margin = margin;
        if (margin < kGuard) cert.interval.violating_t = g[j + 1];
      }
    }
    if (cert.interval.margin < kGuard) cert.interval.passed = false;
  }

  const TailBound tb = tail_bound(x, t_con);
  const double cap = std::pow(t_con, alpha);
  if (tb.h_inf == 0.0) {
    cert.tail = {true, std::numeric_limits<double>::infinity(), std::nullopt};
  } else {
    const double m1 = (cap - tb.h_inf / alpha) / cap;
    const double m2 = (cap - tb.h_inf * (std::log(t_con) - tb.log_tau_eff)) / cap;
    cert.tail.margin = std::min(m1, m2);
    cert.tail.passed = tb.all_below_t_con && cert.tail.margin >= kGuard;
    if (!cert.tail.passed) cert.tail.violating_t = t_con;
  }
  return cert;
}

double certified_scale(const StepIncrements& x, const Params& params, double t_con, std::span<const double> t_grid,
                       int density) {
  const double alpha = params.alpha();
  const int n = params.n();
  double gamma = 1.0;
  std::vector<double> g = check_grid(t_grid, t_con, density);
  double first_active = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.jump_knots.size(); ++i)
    if (x.increments[i] > 0.0) {
      first_active = x.jump_knots[i];
      break;
    }
  if (!std::isfinite(first_active)) return 1.0;
  if (g.front() > first_active) g.insert(g.begin(), first_active);
  for (std::size_t j = 0; j + 1 < g.size(); ++j) {
    const double lhs = x.constraint_lhs(g[j + 1], n);
    if (lhs > 0.0) gamma = std::min(gamma, std::pow(g[j], alpha) / lhs);
  }
  const TailBound tb = tail_bound(x, t_con);
  if (!tb.all_below_t_con) return 0.0;
  const double cap = std::pow(t_con, alpha);
  gamma = std::min(gamma, alpha * cap / tb.h_inf);
  const double log_ratio = std::log(t_con) - tb.log_tau_eff;
  if (log_ratio > 0.0) gamma = std::min(gamma, cap / (tb.h_inf * log_ratio));
  return gamma * (1.0 - 1e-9);
}

StepIncrements stepped_extremal(const LpModel& model) {
  const PowerLaw h = extremal_power(model.params, Form::kForm2);
  StepIncrements x;
  x.jump_knots = model.tau;
  x.increments.resize(model.cols());
  double previous = 0.0;
  for (std::size_t i = 0; i < model.cols(); ++i) {
    const double v = h(model.tau[i]);
    x.increments[i] = v - previous;
    previous = v;
  }
  double gamma = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < model.rows(); ++j) {
    const double lhs =
        simd::dot(std::span<const double>(model.a.data() + j * model.cols(), model.cols()), x.increments);
    if (lhs > 0.0) gamma = std::min(gamma, model.b[j] / lhs);
  }
  if (std::isfinite(gamma)) x = x.scaled(gamma);
  return x;
}

SearchResult search_ratio(const Params& params, const SearchConfig& config) {
  params.require(Form::kForm2);
  if (!(config.t_con > 0.0)) throw ConfigError("T_con must be > 0");
  const LpModel model = build_model(params, config.tau, config.t);
  SearchResult r;
  r.bound = sharp_bound(params, Form::kForm2);
  r.solution = simplex_solve(model, config.iteration_cap);
  r.lp_ratio = r.solution.objective_value / r.bound;
  r.raw_certificate = certify(r.solution.increments, params, config.t_con, model.t, config.check_density);
  r.deflation = r.raw_certificate.passed()
                    ? 1.0
                    : certified_scale(r.solution.increments, params, config.t_con, model.t, config.check_density);
  r.certified = r.solution.increments.scaled(r.deflation);
  r.certificate = certify(r.certified, params, config.t_con, model.t, config.check_density);
  r.certified_ratio = r.certified.objective(params.alpha()) / r.bound;
  return r;
}

}  // namespace conjlab

namespace conjlab {

SearchConfig doubled(const SearchConfig& config) {
  SearchConfig d = config;
  d.tau.points *= 2;
  d.t.points *= 2;
  return d;
}

CandidateReview review_candidate(const Params& params, const SearchConfig& config, const SearchResult& first) {
  CandidateReview review;
  if (!(first.certificate.passed() && first.solution.status == LpStatus::kOptimal && first.certified_ratio > 1.0)) {
    return review;
  }
  const SearchResult second = search_ratio(params, doubled(config));
  review.refined_ratio = second.certified_ratio;
  review.refined_certified = second.certificate.passed() && second.solution.status == LpStatus::kOptimal;
  review.candidate = review.refined_certified && second.certified_ratio > 1.0;
  return review;
}

}  // namespace conjlab
