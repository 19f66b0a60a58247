#include "conjlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "conjlab/errors.hpp"

namespace conjlab {
namespace {

// Kronrod 15-point abscissae (descending, positive half) and weights; the
// odd-indexed abscissae plus the centre form the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double roundoff_floor;
  int depth;
};

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

double checked(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) throw IntegrandError(std::isnan(y) ? "integrand returned NaN" : "integrand returned inf", x);
  return y;
}

Panel gauss_kronrod(const Integrand& f, double a, double b, int depth) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, centre);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::fabs(resk);
  double fv1[7];
  double fv2[7];
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = checked(f, centre - dx);
    const double f2 = checked(f, centre + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::fabs(f1) + std::fabs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = checked(f, centre - dx);
    const double f2 = checked(f, centre + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::fabs(f1) + std::fabs(f2));
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));

  const double aw = std::fabs(half);
  resasc *= aw;
  resabs *= aw;
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * kEps * resabs;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(floor, err);
  return Panel{a, b, resk * half, err, floor, depth};
}

bool splittable(const Panel& p, int max_depth) {
  if (p.depth >= max_depth) return false;
  if (p.error <= p.roundoff_floor * (1.0 + 1e-12)) return false;
  const double mid = 0.5 * (p.a + p.b);
  const double scale = std::max(std::fabs(p.a), std::fabs(p.b));
  return mid > p.a && mid < p.b && (p.b - p.a) > 64.0 * kEps * scale;
}

QuadResult adaptive(const Integrand& f, std::vector<double> cuts, const QuadOptions& opts) {
  if (!(opts.abs_tol > 0.0 || opts.rel_tol > 0.0)) throw ConfigError("quadrature tolerance must be positive");
  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  std::vector<Panel> frozen;
  QuadResult out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    heap.push(gauss_kronrod(f, cuts[i], cuts[i + 1], 0));
    out.evaluations += 15;
  }
  double total = 0.0;
  double total_err = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) {
      total += copy.top().value;
      total_err += copy.top().error;
      copy.pop();
    }
  }
  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::fabs(total)); };

  bool budget_hit = false;
  while (total_err > target() && !heap.empty()) {
    Panel p = heap.top();
    heap.pop();
    if (!splittable(p, opts.max_depth)) {
      frozen.push_back(p);
      continue;
    }
    if (out.evaluations + 30 > opts.max_evaluations) {
      heap.push(p);
      budget_hit = true;
      break;
    }
    const double mid = 0.5 * (p.a + p.b);
    Panel left = gauss_kronrod(f, p.a, mid, p.depth + 1);
    Panel right = gauss_kronrod(f, mid, p.b, p.depth + 1);
    out.evaluations += 30;
    ++out.subdivisions;
    total += left.value + right.value - p.value;
    total_err += left.error + right.error - p.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the panel list.
  std::vector<Panel> all = std::move(frozen);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  total = 0.0;
  total_err = 0.0;
  for (const Panel& p : all) {
    total += p.value;
    total_err += p.error;
  }
  out.value = total;
  out.abs_error_estimate = total_err;
  out.converged = !budget_hit && total_err <= target();
  return out;
}

std::vector<double> make_cuts(double a, double b, std::span<const double> breaks) {
  std::vector<double> cuts{a};
  std::vector<double> inner;
  for (double x : breaks)
    if (x > a && x < b) inner.push_back(x);
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(b);
  return cuts;
}

}  // namespace

QuadOptions finite_defaults() { return QuadOptions{}; }

QuadOptions semi_infinite_defaults() {
  QuadOptions o;
  o.abs_tol = 1e-8;
  return o;
}

QuadResult integrate_finite(const Integrand& f, double a, double b, std::span<const double> breaks,
                            const QuadOptions& opts) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_finite requires finite limits");
  if (a == b) return QuadResult{};
  if (a > b) {
    QuadResult r = adaptive(f, make_cuts(b, a, breaks), opts);
    r.value = -r.value;
    return r;
  }
  return adaptive(f, make_cuts(a, b, breaks), opts);
}

QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadOptions& opts) {
  return integrate_finite(f, a, b, std::span<const double>{}, opts);
}

QuadResult integrate_finite(const Integrand& f, double a, double b, double tol) {
  QuadOptions o;
  o.abs_tol = tol;
  return integrate_finite(f, a, b, o);
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, std::span<const double> breaks,
                                   const QuadOptions& opts) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("integrate_semi_infinite requires finite a >= 0");
  const Integrand mapped = [&f](double u) {
    const double w = 1.0 - u;
    const double t = u / w;
    const double y = f(t);
    if (y == 0.0) return 0.0;
    return y / (w * w);
  };
  std::vector<double> ubreaks;
  ubreaks.reserve(breaks.size());
  for (double t : breaks)
    if (t > a && std::isfinite(t)) ubreaks.push_back(t / (1.0 + t));
  return adaptive(mapped, make_cuts(a / (1.0 + a), 1.0, ubreaks), opts);
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, const QuadOptions& opts) {
  return integrate_semi_infinite(f, a, std::span<const double>{}, opts);
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, double tol) {
  QuadOptions o;
  o.abs_tol = tol;
  return integrate_semi_infinite(f, a, o);
}

}  // namespace conjlab
