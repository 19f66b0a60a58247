#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "conjlab/errors.hpp"
#include "conjlab/functionals.hpp"
#include "conjlab/lp_search.hpp"
#include "conjlab/special_values.hpp"
#include "conjlab/transforms.hpp"

using namespace conjlab;

TEST_SUITE("lp_search") {

TEST_CASE("grids") {
  const auto g = log_grid({1e-2, 1e2, 5});
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 1e-2);
  CHECK(g.back() == 1e2);
  CHECK(g[2] == doctest::Approx(1.0));
  const auto r = refine_grid(g);
  CHECK(r.size() == 9);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(r[2 * i] == g[i]);
  CHECK_THROWS_AS(log_grid({0.0, 1.0, 5}), ConfigError);
  CHECK_THROWS_AS(log_grid({1.0, 0.5, 5}), ConfigError);
}

TEST_CASE("model construction") {
  const Params p = Params::from_alpha(1, 2);
  const LpModel m = build_model(p, GridSpec{1e-3, 1e3, 50}, GridSpec{1e-4, 1e5, 50});
  CHECK(m.rows() == 50);
  CHECK(m.cols() == 50);
  for (double v : m.a) CHECK(std::isfinite(v));
  for (double v : m.b) CHECK(v > 0);
  for (std::size_t i = 0; i < m.cols(); ++i) CHECK(m.c[i] == doctest::Approx(kernel_Psi(m.tau[i], 1.0)));
  CHECK_THROWS_AS(build_model(Params::from_alpha(0.4, 2), GridSpec{}, GridSpec{}), DomainError);
}

TEST_CASE("single variable LP") {
  // max 3x s.t. 2x <= 4, 5x <= 20
  const std::vector<double> a{2, 5}, b{4, 20}, c{3};
  const DenseLpResult r = solve_dense_lp(2, 1, a, b, c);
  CHECK(r.status == LpStatus::kOptimal);
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.objective == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("two variable textbook LP") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
  const std::vector<double> a{1, 0, 0, 2, 3, 2}, b{4, 12, 18}, c{3, 5};
  const DenseLpResult r = solve_dense_lp(3, 2, a, b, c);
  CHECK(r.status == LpStatus::kOptimal);
  CHECK(r.x[0] == doctest::Approx(2.0));
  CHECK(r.x[1] == doctest::Approx(6.0));
  CHECK(r.objective == doctest::Approx(36.0));
}

TEST_CASE("unbounded LP") {
  const std::vector<double> a{1, -1}, b{1}, c{0, 1};
  CHECK(solve_dense_lp(1, 2, a, b, c).status == LpStatus::kUnbounded);
}

TEST_CASE("zero objective") {
  const Params p = Params::from_alpha(1, 2);
  LpModel m = build_model(p, GridSpec{1e-2, 1e2, 20}, GridSpec{1e-3, 1e3, 30});
  std::fill(m.c.begin(), m.c.end(), 0.0);
  const LpSolution s = simplex_solve(m);
  CHECK(s.status == LpStatus::kOptimal);
  CHECK(s.objective_value == 0.0);
  for (double d : s.increments.increments) CHECK(d == 0.0);
}

TEST_CASE("duplicated rows do not change the optimum") {
  const Params p = Params::from_alpha(1.3, 3);
  const LpModel m = build_model(p, GridSpec{1e-2, 1e2, 30}, GridSpec{1e-3, 1e3, 40});
  std::vector<double> a2, b2;
  for (std::size_t j = 0; j < m.rows(); ++j)
    for (int copy = 0; copy < 2; ++copy) {
      a2.insert(a2.end(), m.a.begin() + j * m.cols(), m.a.begin() + (j + 1) * m.cols());
      b2.push_back(m.b[j]);
    }
  const DenseLpResult a = solve_dense_lp(m.rows(), m.cols(), m.a, m.b, m.c);
  const DenseLpResult b = solve_dense_lp(2 * m.rows(), m.cols(), a2, b2, m.c);
  REQUIRE(a.status == LpStatus::kOptimal);
  REQUIRE(b.status == LpStatus::kOptimal);
  CHECK(std::fabs(a.objective - b.objective) <= 1e-10 * a.objective);
}

TEST_CASE("iteration cap") {
  const Params p = Params::from_alpha(1, 2);
  const LpModel m = build_model(p, GridSpec{1e-2, 1e2, 30}, GridSpec{1e-3, 1e3, 40});
  const LpSolution s = simplex_solve(m, 1);
  CHECK(s.status == LpStatus::kIterationLimit);
  CHECK(s.max_relative_violation <= 1e-12);
}

TEST_CASE("empty tau grid") {
  const Params p = Params::from_alpha(1, 2);
  SearchConfig cfg;
  cfg.tau.points = 0;
  const SearchResult r = search_ratio(p, cfg);
  CHECK(r.lp_ratio == 0.0);
  CHECK(r.certified_ratio == 0.0);
}

TEST_CASE("certificate examples") {
  const Params p = Params::from_alpha(1, 2);
  SearchConfig cfg;
  cfg.tau.points = 60;
  cfg.t.points = 120;
  const SearchResult r = search_ratio(p, cfg);
  CHECK(r.certificate.passed());
  const auto t_grid = log_grid(cfg.t);
  const Certificate over = certify(r.certified.scaled(1.1), p, cfg.t_con, t_grid);
  CHECK_FALSE(over.interval.passed);
  CHECK(over.interval.violating_t);
  StepIncrements zero = r.certified.scaled(0.0);
  CHECK(certify(zero, p, cfg.t_con, t_grid).passed());
}

TEST_CASE("tail check catches a far jump") {
  const Params p = Params::from_alpha(1, 2);
  StepIncrements x{{1e6}, {1.0}};
  const std::vector<double> t_grid = log_grid({1e-4, 1e5, 100});
  CHECK_FALSE(certify(x, p, 1e5, t_grid).tail.passed);
}

TEST_CASE("certified solutions survive independent re-evaluation") {
  for (double a : {0.75, 1.0, 2.0}) {
    const Params p = Params::from_alpha(a, 2);
    SearchConfig cfg;
    cfg.tau.points = 80;
    cfg.t.points = 160;
    const SearchResult r = search_ratio(p, cfg);
    REQUIRE(r.certificate.passed());
    const TestFunction h = r.certified.as_function();
    EvalOptions o;
    o.path = ObjectivePath::kQuadrature;
    ScanSpec spec = default_scan(h);
    spec.t_min = 1e-6;
    spec.t_max = cfg.t_con * 10;
    const ScanResult scan = constraint_sup_scan(Form::kForm2, h, p, spec);
    CHECK(scan.sup <= 1 + 1e-6);
    const double quad = objective_lhs(Form::kForm2, h, p, ObjectivePath::kQuadrature).value;
    CHECK(std::fabs(quad - r.certified.objective(a)) <= 1e-8 * std::max(1.0, quad));
  }
}

TEST_CASE("stepped extremal is feasible and below the optimum") {
  const Params p = Params::from_alpha(1, 3);
  const LpModel m = build_model(p, GridSpec{1e-3, 1e3, 60}, GridSpec{1e-4, 1e5, 120});
  const StepIncrements x = stepped_extremal(m);
  for (std::size_t j = 0; j < m.rows(); ++j) CHECK(x.constraint_lhs(m.t[j], 3) <= m.b[j] * (1 + 1e-12));
  const LpSolution s = simplex_solve(m);
  CHECK(x.objective(1.0) <= s.objective_value * (1 + 1e-12));
}

TEST_CASE("refinement monotonicity") {
  const Params p = Params::from_alpha(1.5, 2);
  auto tau = log_grid({1e-2, 1e2, 15});
  auto t = log_grid({1e-3, 1e3, 30});
  double prev = simplex_solve(build_model(p, tau, t)).objective_value;
  for (int level = 0; level < 2; ++level) {
    tau = refine_grid(tau);
    const double v = simplex_solve(build_model(p, tau, t)).objective_value;
    CHECK(v >= prev * (1 - 1e-12));
    prev = v;
  }
  for (int level = 0; level < 2; ++level) {
    t = refine_grid(t);
    const double v = simplex_solve(build_model(p, tau, t)).objective_value;
    CHECK(v <= prev * (1 + 1e-12));
    prev = v;
  }
}

TEST_CASE("determinism") {
  const Params p = Params::from_alpha(1.2, 2);
  SearchConfig cfg;
  cfg.tau.points = 40;
  cfg.t.points = 80;
  const SearchResult a = search_ratio(p, cfg), b = search_ratio(p, cfg);
  CHECK(a.solution.increments.increments == b.solution.increments.increments);
  CHECK(a.certified_ratio == b.certified_ratio);
}

TEST_CASE("candidate review") {
  const Params p = Params::from_alpha(1, 2);
  SearchConfig cfg;
  cfg.tau.points = 40;
  cfg.t.points = 80;
  const SearchResult r = search_ratio(p, cfg);
  const CandidateReview c = review_candidate(p, cfg, r);
  if (r.certified_ratio <= 1.0) {
    CHECK_FALSE(c.candidate);
    CHECK_FALSE(c.refined_ratio);
  }
  const SearchConfig d = doubled(cfg);
  CHECK(d.tau.points == 80);
  CHECK(d.t.points == 160);
}

}

TEST_SUITE("lp_search") {

TEST_CASE("single jump model entries") {
  const Params p = Params::from_alpha(1, 2);
  const LpModel m = build_model(p, std::vector<double>{1.0}, std::vector<double>{0.5, 1.0, 2.0});
  CHECK(m.c[0] == doctest::Approx(std::log(2.0) / 2).epsilon(1e-15));
  CHECK(m.at(0, 0) == 0.0);
  CHECK(m.at(1, 0) == 0.0);
  CHECK(m.at(2, 0) == doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-14));
  CHECK(m.b[2] == 2.0);
}

TEST_CASE("single jump LP matches the hand formula") {
  const Params p = Params::from_alpha(1.3, 3);
  const LpModel m = build_model(p, std::vector<double>{0.7}, log_grid({1e-2, 1e4, 120}));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m.rows(); ++j)
    if (m.at(j, 0) > 0) best = std::min(best, m.b[j] / m.at(j, 0));
  const LpSolution s = simplex_solve(m);
  CHECK(s.status == LpStatus::kOptimal);
  CHECK(s.increments.increments[0] == doctest::Approx(best).epsilon(1e-13));
  CHECK(s.objective_value == doctest::Approx(best * kernel_Psi(0.7, 1.3)).epsilon(1e-13));
}

TEST_CASE("optimal solutions are primal feasible") {
  for (double a : {0.55, 1.0, 2.5})
    for (int n : {2, 4}) {
      const Params p = Params::from_alpha(a, n);
      const LpModel m = build_model(p, GridSpec{1e-3, 1e3, 100}, GridSpec{1e-4, 1e5, 200});
      const LpSolution s = simplex_solve(m);
      REQUIRE(s.status == LpStatus::kOptimal);
      CHECK(s.max_relative_violation <= 1e-9);
      for (double d : s.increments.increments) CHECK(d >= -1e-12);
    }
}

TEST_CASE("FORM1 reading of a step solution agrees with FORM2") {
  const Params p = Params::from_alpha(1.5, 3);
  SearchConfig cfg;
  cfg.tau.points = 60;
  cfg.t.points = 120;
  const SearchResult r = search_ratio(p, cfg);
  StepData steps;
  for (std::size_t i = 0; i < r.certified.increments.size(); ++i)
    if (r.certified.increments[i] > 0) {
      steps.jumps.push_back(r.certified.jump_knots[i]);
      steps.increments.push_back(r.certified.increments[i]);
    }
  const CrossFormRatios x = cross_form_ratio_check(lift_s_to_bundle(density_from_step_h(steps, p), p));
  REQUIRE(x.max_gap);
  CHECK(*x.max_gap < 1e-9);
  CHECK_FALSE(x.form3);
}

}
