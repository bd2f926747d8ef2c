#include "vexs/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vexs/errors.hpp"
#include "vexs/fit.hpp"
#include "vexs/quadrature.hpp"
#include "vexs/sphere.hpp"

namespace vexs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Radii at which a breakpoint enters the ball join the geometric grid, so a
// maximum sitting on a kink is evaluated exactly.
MaximalEstimate maximize_average(const std::function<double(double)>& average, double r_max,
                                 const MaximalSearch& search, double small_ball_limit,
                                 std::span<const double> kinks = {}) {
  if (!(r_max > 0.0)) throw DomainError("maximal function needs a positive radius cap");
  if (search.per_decade < 1 || search.depth < 0 || !(search.r_min > 0.0))
    throw DomainError("invalid maximal search parameters");
  MaximalEstimate out;
  std::vector<double> radii;
  const double r0 = std::min(search.r_min, r_max);
  for (int k = 0;; ++k) {
    const double r = r0 * std::pow(10.0, static_cast<double>(k) / search.per_decade);
    if (r >= r_max) break;
    radii.push_back(r);
  }
  radii.push_back(r_max);
  for (double k : kinks)
    if (k > r0 && k < r_max) radii.push_back(k);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  std::vector<double> vals(radii.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double v = average(radii[i]);
    if (!std::isfinite(v)) v = kInf;
    vals[i] = v;
    ++out.evaluations;
    if (v > vals[best]) best = i;
  }
  out.value = vals[best];
  out.best_radius = radii[best];
  if (std::isinf(out.value)) return out;

  double l = radii[best == 0 ? 0 : best - 1];
  double r = radii[std::min(best + 1, radii.size() - 1)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c1 = r - g * (r - l), c2 = l + g * (r - l);
  double f1 = average(c1), f2 = average(c2);
  out.evaluations += 2;
  for (int it = 0; it < search.depth && r > l; ++it) {
    if (f1 >= f2) {
      r = c2;
      c2 = c1;
      f2 = f1;
      c1 = r - g * (r - l);
      f1 = average(c1);
    } else {
      l = c1;
      c1 = c2;
      f1 = f2;
      c2 = l + g * (r - l);
      f2 = average(c2);
    }
    ++out.evaluations;
  }
  for (auto [rad, v] : {std::pair{c1, f1}, std::pair{c2, f2}}) {
    if (!std::isfinite(v)) return MaximalEstimate{kInf, rad, out.evaluations};
    if (v > out.value) {
      out.value = v;
      out.best_radius = rad;
    }
  }
  if (small_ball_limit > out.value) {
    out.value = small_ball_limit;
    out.best_radius = 0.0;
  }
  return out;
}

double abs_value_at(const PointFunction& g, const Point& x) {
  try {
    const double v = std::abs(g(x));
    return std::isfinite(v) ? v : 0.0;
  } catch (const DomainError&) {
    return 0.0;
  }
}

}  // namespace

MaximalEstimate hl_maximal_of(const PointFunction& g, const Point& x, double r_max, const MaximalSearch& search,
                              std::span<const double> breaks, const QuadratureSpec& q) {
  const int n = x.dim();
  const quad::Options opt = q.inner_options();
  std::function<double(double)> average;
  SphereRule rule;
  if (n == 1) {
    average = [&](double r) {
      const auto pts = quad::breakpoints_within(x[0] - r, x[0] + r, breaks);
      const auto res = quad::integrate([&](double y) { return std::abs(g(Point{y})); }, std::span<const double>(pts), opt);
      return res.value / (2.0 * r);
    };
  } else {
    rule = q.sphere_rule(n);
    const double surface = sphere_surface_measure(n);
    average = [&, surface](double r) {
      auto radial = [&](double rho) {
        if (rho == 0.0) return 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::abs(g(x + rule.nodes[i] * rho));
        return std::pow(rho, n - 1) * s;
      };
      const auto res = quad::integrate(radial, 0.0, r, opt);
      return res.value * n / (surface * std::pow(r, n));
    };
  }
  std::vector<double> kinks;
  if (n == 1)
    for (double c : breaks) kinks.push_back(std::abs(c - x[0]));
  return maximize_average(average, r_max, search, abs_value_at(g, x), kinks);
}

MaximalEstimate directional_maximal_of(const PointFunction& g, const Point& x, const Point& omega, double h_max,
                                       const MaximalSearch& search, std::span<const double> breaks,
                                       const QuadratureSpec& q) {
  if (omega.dim() != x.dim()) throw DomainError("direction has the wrong dimension");
  const quad::Options opt = q.inner_options();
  std::vector<double> sbreaks;
  if (x.dim() == 1)
    for (double c : breaks) sbreaks.push_back((c - x[0]) * omega[0]);
  auto average = [&](double h) {
    const auto pts = quad::breakpoints_within(0.0, h, sbreaks);
    const auto res =
        quad::integrate([&](double s) { return std::abs(g(along_ray(x, omega, s))); }, std::span<const double>(pts), opt);
    return res.value / h;
  };
  return maximize_average(average, h_max, search, abs_value_at(g, x), sbreaks);
}

double hl_maximal(const ScalarField& u, const Point& x, double r_max, int depth, const QuadratureSpec& q) {
  MaximalSearch search;
  search.depth = depth;
  const auto cps = u.dimension() == 1 ? u.critical_points() : std::vector<double>{};
  return hl_maximal_of([&](const Point& y) { return u(y); }, x, r_max, search, cps, q).value;
}

double directional_maximal(const ScalarField& u, const Point& x, const Point& omega, double h_max, int depth,
                           const QuadratureSpec& q) {
  MaximalSearch search;
  search.depth = depth;
  const auto cps = u.dimension() == 1 ? u.critical_points() : std::vector<double>{};
  return directional_maximal_of([&](const Point& y) { return u(y); }, x, omega, h_max, search, cps, q).value;
}

MaximalProfile hl_maximal_profile(const ScalarField& u, std::span<const Point> points, double r_max, int depth,
                                  const QuadratureSpec& q) {
  MaximalProfile out;
  out.search.depth = depth;
  out.r_max = r_max;
  const auto cps = u.dimension() == 1 ? u.critical_points() : std::vector<double>{};
  for (const Point& x : points) {
    const auto e = hl_maximal_of([&](const Point& y) { return u(y); }, x, r_max, out.search, cps, q);
    out.points.push_back(x);
    out.values.push_back(e.value);
    out.best_radii.push_back(e.best_radius);
  }
  return out;
}

ExponentField counterexample_exponent() { return ExponentField::piecewise_table({-2.0, 2.0}, {2.0, 4.0}); }

CounterexampleReport counterexample_experiment(std::span<const double> R_values, const QuadratureSpec& q, int depth) {
  if (R_values.empty()) throw DomainError("counterexample needs at least one radius");
  for (std::size_t i = 0; i < R_values.size(); ++i) {
    if (!(R_values[i] >= 10.0) || !std::isfinite(R_values[i])) throw DomainError("counterexample radii must be >= 10");
    if (i > 0 && !(R_values[i] > R_values[i - 1])) throw DomainError("counterexample radii must increase");
  }
  q.validate();
  const ScalarField u = ScalarField::power_tail();
  const ExponentField p = counterexample_exponent();
  CounterexampleReport out;

  // u^p = x^{-4/3} on [2, inf).
  const quad::Options opt = q.inner_options();
  const auto mu = quad::integrate_power_tail([&](double x) { return std::pow(std::abs(u(Point{x})), p(Point{x})); },
                                             2.0, 1.0 / 3.0, opt);
  out.modular_u = mu.value;
  out.node_count += mu.evaluations;

  // On x <= -2 the ball B(x, r) meets the support only for r > |x| + 2.
  const std::vector<double> breaks{2.0};
  auto integrand = [&](double x) {
    MaximalSearch search;
    search.depth = depth;
    search.r_min = std::abs(x) + 2.0;
    const auto e = hl_maximal_of([&](const Point& y) { return u(y); }, Point{x}, 10.0 * (std::abs(x) + 2.0), search,
                                 breaks, q);
    out.node_count += e.evaluations;
    return std::pow(e.value, p(Point{x}));
  };
  quad::Options outer = q.outer_options();
  double acc = 0.0;
  double prev = 2.0;
  for (double R : R_values) {
    // log-substitution x = -e^t keeps long segments cheap.
    const auto seg = quad::integrate([&](double t) {
      const double ax = std::exp(t);
      return integrand(-ax) * ax;
    }, std::log(prev), std::log(R), outer);
    out.node_count += seg.evaluations;
    acc += seg.value;
    prev = R;
    if (!std::isfinite(acc)) throw DivergenceError("counterexample", "maximal modular is not finite");
    out.rows.push_back({R, out.modular_u, acc});
  }

  if (out.rows.size() >= 2) {
    std::vector<double> rs, ms;
    for (const auto& row : out.rows) {
      rs.push_back(row.R);
      ms.push_back(row.modular_Mu);
    }
    out.loglog_slope = loglog_slope(rs, ms);
    if (rs.size() >= 3) {
      const PowerFit f = fit_power_law(rs, ms, ms.front(), -1.0);
      out.growth_exponent_fit = f.ok ? f.beta : out.loglog_slope;
    } else {
      out.growth_exponent_fit = out.loglog_slope;
    }
  }
  return out;
}

namespace {

bool inside_closure(const Ball& b, const Ball& e) {
  const int n = b.center.dim();
  const double slack = 1e-12 * std::max(1.0, e.radius);
  if (n == 1) return b.center[0] - b.radius >= e.center[0] - e.radius - slack &&
                      b.center[0] + b.radius <= e.center[0] + e.radius + slack;
  return (b.center - e.center).norm() + b.radius <= e.radius + slack;
}

}  // namespace

BmoResult bmo_quantity(const ScalarField& u, const Ball& e_interior, std::span<const Ball> balls,
                       const QuadratureSpec& q) {
  const int n = u.dimension();
  if (e_interior.center.dim() != n || !(e_interior.radius > 0.0)) throw DomainError("invalid domain ball for BMO");
  q.validate();
  BmoResult out;
  const auto cps = n == 1 ? u.critical_points() : std::vector<double>{};
  const quad::Options opt = q.inner_options();
  for (const Ball& b : balls) {
    if (b.center.dim() != n || !(b.radius > 0.0)) throw DomainError("invalid ball for BMO");
    if (!inside_closure(b, e_interior)) throw DomainError("BMO ball is not contained in the domain");
    double value = 0.0;
    if (n == 1) {
      const double lo = b.center[0] - b.radius, hi = b.center[0] + b.radius;
      auto inner = [&](double x) {
        const double ux = u(Point{x});
        std::vector<double> br = cps;
        br.push_back(x);
        const auto pts = quad::breakpoints_within(lo, hi, br);
        return quad::integrate([&](double y) { return std::abs(u(Point{y}) - ux); }, std::span<const double>(pts), opt)
            .value;
      };
      const auto pts = quad::breakpoints_within(lo, hi, cps);
      const double total = quad::integrate(inner, std::span<const double>(pts), opt).value;
      value = total / std::pow(2.0 * b.radius, 2.0);
    } else {
      // Product rule: Gauss-Legendre in the radius times the sphere rule.
      std::vector<double> gx, gw;
      gauss_legendre(16, gx, gw);
      const SphereRule rule = q.sphere_rule(n);
      std::vector<double> vals, wts;
      for (std::size_t i = 0; i < gx.size(); ++i) {
        const double rho = 0.5 * b.radius * (gx[i] + 1.0);
        const double wr = 0.5 * b.radius * gw[i] * std::pow(rho, n - 1);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          vals.push_back(u(b.center + rule.nodes[k] * rho));
          wts.push_back(wr * rule.weights[k]);
        }
      }
      double total = 0.0;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < vals.size(); ++j) row += wts[j] * std::abs(vals[i] - vals[j]);
        total += wts[i] * row;
      }
      const double volume = sphere_surface_measure(n) * std::pow(b.radius, n) / n;
      value = total / std::pow(volume, (n + 1.0) / n);
    }
    out.per_ball.push_back(value);
    out.sup = std::max(out.sup, value);
  }
  return out;
}

}  // namespace vexs
