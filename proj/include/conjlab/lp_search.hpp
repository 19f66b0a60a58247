// Counterexample search over increasing step functions h in the FORM2
// coordinates. For h(t) = sum_i Delta_i [t >= tau_i] both sides reduce to
// finite sums:
//   constraint  sum_i Delta_i K(min(tau_i / t, 1)) <= t^alpha
//   objective   sum_i Delta_i Psi(tau_i)
// so maximizing the objective over a finite constraint grid is an LP.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conjlab/function_models.hpp"
#include "conjlab/params.hpp"

namespace conjlab {

struct GridSpec {
  double lo = 1e-3;
  double hi = 1e3;
  int points = 200;
};

std::vector<double> log_grid(const GridSpec& spec);
// Inserts the geometric midpoint of every adjacent pair (an exact superset).
std::vector<double> refine_grid(std::span<const double> grid);

struct StepIncrements {
  std::vector<double> jump_knots;
  std::vector<double> increments;

  double total() const;
  // sum_i Delta_i K(min(tau_i / t, 1))
  double constraint_lhs(double t, int n) const;
  // sum_i Delta_i Psi(tau_i)
  double objective(double alpha) const;
  StepIncrements scaled(double c) const;
  TestFunction as_function(std::string label = "h") const;
  GridFunction as_grid() const;  // left-constant steps with cumulative values
};

struct LpModel {
  Params params;
  std::vector<double> tau;  // M jump knots
  std::vector<double> t;    // J constraint points
  std::vector<double> c;    // c_i = Psi(tau_i)
  std::vector<double> b;    // b_j = t_j^alpha
  std::vector<double> a;    // J x M row-major, A_ji = K(min(tau_i / t_j, 1))

  std::size_t rows() const { return t.size(); }
  std::size_t cols() const { return tau.size(); }
  double at(std::size_t j, std::size_t i) const { return a[j * cols() + i]; }
};

LpModel build_model(const Params& params, std::vector<double> tau, std::vector<double> t);
LpModel build_model(const Params& params, const GridSpec& tau, const GridSpec& t);

enum class LpStatus { kOptimal, kUnbounded, kIterationLimit };
std::string_view lp_status_name(LpStatus s);

struct SimplexOptions {
  long iteration_cap = 1'000'000;
  double pivot_tol = 1e-11;
  double cost_tol = 1e-12;
};

struct DenseLpResult {
  std::vector<double> x;
  double objective = 0.0;
  LpStatus status = LpStatus::kOptimal;
  long iterations = 0;
  std::vector<std::size_t> basis;  // basic column per row; >= cols means slack
};

/// max c.x subject to A x <= b, x >= 0, with b > 0. Dense tableau, rows scaled to unit right side, columns scaled to
/// unit max entry, smallest-index (Bland) pivoting.
DenseLpResult solve_dense_lp(std::size_t rows, std::size_t cols, std::span<const double> a_row_major,
                             std::span<const double> b, std::span<const double> c, const SimplexOptions& opts = {});

struct LpSolution {
  StepIncrements increments;
  double objective_value = 0.0;
  LpStatus status = LpStatus::kOptimal;
  std::vector<std::size_t> active_constraints;
  long iterations = 0;
  double max_relative_violation = 0.0;  // max_j (A Delta - b)_j / b_j, clipped at 0
};

LpSolution simplex_solve(const LpModel& model, long iteration_cap = 1'000'000);

struct CheckResult {
  bool passed = false;
  double margin = 0.0;  // relative slack of the tightest condition
  std::optional<double> violating_t;
};

struct Certificate {
  CheckResult interval;
  CheckResult tail;
  CheckResult head;
  double t_con = 0.0;
  std::size_t check_points = 0;

  bool passed() const { return interval.passed && tail.passed && head.passed; }
};

/// Restores "for all t >= 0" from a finite grid:
///  interval  LHS(t_{j+1}) <= t_j^alpha on a check grid `density` times finer
///            than `t_grid`, extended to t_con (LHS is non-decreasing in t);
///  tail      t_con^alpha >= h_inf / alpha and t_con^alpha >= h_inf ln(t_con / tau_eff)
///            with ln tau_eff the Delta-weighted mean of ln tau_i, which bound
///            LHS(t) <= h_inf ln(t / tau_eff) <= t^alpha for t >= t_con;
///  head      LHS vanishes below the first active jump.
Certificate certify(const StepIncrements& x, const Params& params, double t_con, std::span<const double> t_grid,
                    int density = 4);

// Largest factor gamma in (0, 1] for which gamma * x passes certify.
double certified_scale(const StepIncrements& x, const Params& params, double t_con, std::span<const double> t_grid,
                       int density = 4);

// The FORM2 extremal projected onto the tau grid (step values h(tau_i)), then
// scaled up until a constraint row is tight. A feasible point of the LP.
StepIncrements stepped_extremal(const LpModel& model);

struct SearchConfig {
  GridSpec tau{1e-3, 1e3, 200};
  GridSpec t{1e-4, 1e5, 400};
  double t_con = 1e5;
  long iteration_cap = 1'000'000;
  int check_density = 4;
};

struct SearchResult {
  double bound = 0.0;
  double lp_ratio = 0.0;         // LP optimum / sharp bound (grid constraints only)
  double certified_ratio = 0.0;  // after deflation to a certified feasible point
  double deflation = 1.0;
  LpSolution solution;
  StepIncrements certified;
  Certificate raw_certificate;
  Certificate certificate;
};

SearchResult search_ratio(const Params& params, const SearchConfig& config = {});

}  // namespace conjlab

namespace conjlab {

// Both grids doubled in size over the same ranges.
SearchConfig doubled(const SearchConfig& config);

struct CandidateReview {
  bool candidate = false;                 // certified ratio > 1 on both grids
  std::optional<double> refined_ratio;    // certified ratio on the doubled grids
  bool refined_certified = false;
};

// A certified ratio above 1 is only a counterexample candidate if it survives
// one grid doubling; ratios <= 1 are returned without re-solving.
CandidateReview review_candidate(const Params& params, const SearchConfig& config, const SearchResult& first);

}  // namespace conjlab
