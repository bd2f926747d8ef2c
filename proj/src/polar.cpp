#include "vexs/polar.hpp"

#include <algorithm>
#include <cmath>

#include "vexs/errors.hpp"

namespace vexs {

bool make_ray(const ScalarField& u, double R, std::span<const double> critical, const Point& x, const Point& omega,
              Ray& ray) {
  ray.x = x;
  ray.omega = omega;
  const double b = x.dot(omega);
  const double c = x.norm_squared() - R * R;
  if (c <= 0.0) {
    ray.x_inside = true;
    ray.h_enter = 0.0;
    ray.h_exit = -b + std::sqrt(std::max(0.0, b * b - c));
  } else {
    const double disc = b * b - c;
    if (disc <= 0.0) return false;
    const double sq = std::sqrt(disc);
    if (-b + sq <= 0.0) return false;
    ray.x_inside = false;
    ray.h_enter = -b - sq;
    ray.h_exit = -b + sq;
  }
  ray.u0 = u(x);
  ray.slope = 0.0;
  ray.taylor_h = 0.0;
  if (ray.x_inside) {
    try {
      const double g = u.gradient(x).dot(omega);
      if (std::isfinite(g)) {
        ray.slope = g;
        ray.taylor_h = 1e-7 * std::max(1.0, x.norm());
      }
    } catch (const DomainError&) {
    }
  }
  ray.h_splits.clear();
  if (x.dim() == 1) {
    for (double cp : critical) {
      const double h = (cp - x[0]) * omega[0];
      if (h > ray.h_enter && h < ray.h_exit) ray.h_splits.push_back(h);
    }
    std::sort(ray.h_splits.begin(), ray.h_splits.end());
    if (!ray.h_splits.empty()) ray.taylor_h = std::min(ray.taylor_h, ray.h_splits.front());
  }
  return true;
}

quad::Result integrate_ray_head(const std::function<double(double)>& f, const Ray& ray, double b, double beta,
                                const std::function<double(double)>& head, const quad::Options& opt) {
  if (!(b > 0.0)) return {};
  if (!(ray.taylor_h > 0.0)) return quad::integrate_left_singular(f, 0.0, b, beta, opt);
  const double h0 = std::min(ray.taylor_h, b);
  quad::Result r;
  r.value = head(h0);
  if (b > h0) r += quad::integrate_log_scale(f, h0, b, opt);
  return r;
}

double polar_core_radius(const ScalarField& u, const ExponentField& p, const QuadratureSpec& q) {
  if (q.truncation_radius) return *q.truncation_radius;
  if (auto supp = u.support_radius()) return *supp;
  return truncation_radius(u, p, q.truncation_tol);
}

PolarResult polar_double_integral(const PolarProblem& problem, const RayIntegral& inner, const QuadratureSpec& q) {
  const ScalarField& u = *problem.u;
  const int n = u.dimension();
  const double R = problem.core_radius;
  PolarResult out;
  if (!(R > 0.0)) return out;

  const std::vector<double> critical = n == 1 ? u.critical_points() : std::vector<double>{};
  SphereRule rule = n == 1 ? make_sphere_rule(1, 2) : q.sphere_rule(n);
  if (problem.direction) {
    if (problem.direction->dim() != n) throw DomainError("direction has the wrong dimension");
    rule.nodes = {*problem.direction};
    rule.weights = {1.0};
  }

  auto field_at = [&](const Point& x) {
    double s = 0.0;
    Ray ray;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      if (!make_ray(u, R, critical, x, rule.nodes[k], ray)) continue;
      const quad::Result r = inner(ray);
      out.inner_evaluations += r.evaluations;
      out.inner_converged = out.inner_converged && r.converged;
      s += rule.weights[k] * r.value;
    }
    return s;
  };

  const quad::Options opt = q.outer_options();
  if (n == 1) {
    std::vector<double> breaks = critical;
    breaks.insert(breaks.end(), problem.outer_breaks.begin(), problem.outer_breaks.end());
    const auto pts = quad::breakpoints_within(-R, R, breaks);
    out.outer = quad::integrate([&](double x) { return field_at(Point{x}); }, std::span<const double>(pts), opt);
    quad::Options topt = opt;
    topt.abs_tol = 1e-2 * opt.rel_tol * std::abs(out.outer.value);
    out.outer += quad::integrate_power_tail([&](double x) { return field_at(Point{x}); }, R, problem.far_gamma, topt);
    out.outer += quad::integrate_power_tail([&](double x) { return field_at(Point{-x}); }, R, problem.far_gamma, topt);
    return out;
  }

  const SphereRule outer_rule = q.sphere_rule(n);
  auto radial = [&](double r) {
    if (r == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < outer_rule.nodes.size(); ++i) s += outer_rule.weights[i] * field_at(outer_rule.nodes[i] * r);
    return std::pow(r, n - 1) * s;
  };
  std::vector<double> breaks = u.critical_radii();
  breaks.insert(breaks.end(), problem.outer_breaks.begin(), problem.outer_breaks.end());
  const auto pts = quad::breakpoints_within(0.0, R, breaks);
  out.outer = quad::integrate(radial, std::span<const double>(pts), opt);
  quad::Options topt = opt;
  topt.abs_tol = 1e-2 * opt.rel_tol * std::abs(out.outer.value);
  out.outer += quad::integrate_power_tail(radial, R, problem.far_gamma, topt);
  return out;
}

double bisect_root(const std::function<double(double)>& f, double a, double b, double fa, std::size_t& evals) {
  if (std::isnan(fa)) throw InternalInconsistency("NaN at a root bracket endpoint");
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (a + b);
    if (b - a <= 1e-12 * std::max(1.0, std::abs(mid)) || !(mid > a && mid < b)) return mid;
    const double fm = f(mid);
    ++evals;
    if (std::isnan(fm)) throw InternalInconsistency("NaN while isolating a detected sign change");
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  throw InternalInconsistency("bisection failed to isolate a detected sign change");
}

std::vector<double> level_roots(const std::function<double(double)>& g, double a, double b,
                                std::span<const double> splits, double level, bool monotone, int grid,
                                std::size_t& evals) {
  std::vector<double> pts = quad::breakpoints_within(a, b, splits);
  if (!monotone && b > a) {
    std::vector<double> extra;
    extra.reserve(static_cast<std::size_t>(grid) + 24);
    for (int i = 1; i < grid; ++i) extra.push_back(a + (b - a) * i / grid);
    // Geometric points toward a resolve features at small h.
    for (int k = 1; k <= 20; ++k) extra.push_back(a + (b - a) * std::ldexp(1.0 / grid, -k));
    extra.insert(extra.end(), pts.begin(), pts.end());
    pts = quad::breakpoints_within(a, b, extra);
  }
  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = g(pts[i]);
  evals += pts.size();

  std::vector<double> roots;
  const double levels[2] = {level, -level};
  const int nlev = level == 0.0 ? 1 : 2;
  for (int l = 0; l < nlev; ++l) {
    const double L = levels[l];
    auto shifted = [&](double t) { return g(t) - L; };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double fa = vals[i] - L, fb = vals[i + 1] - L;
      if (std::isnan(fa) || std::isnan(fb)) throw InternalInconsistency("NaN while bracketing a level set");
      if (fa == 0.0) {
        roots.push_back(pts[i]);
        continue;
      }
      if (fb == 0.0) continue;
      if ((fa > 0.0) != (fb > 0.0)) roots.push_back(bisect_root(shifted, pts[i], pts[i + 1], fa, evals));
    }
    if (!pts.empty() && vals.back() - L == 0.0) roots.push_back(pts.back());
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<double> level_crossing_breaks(const ScalarField& u, double R, double level, const QuadratureSpec& q) {
  std::size_t evals = 0;
  if (u.dimension() == 1) {
    const auto cps = u.critical_points();
    auto g = [&](double x) { return u(Point{x}); };
    return level_roots(g, -R, R, cps, level, true, q.h_bracket_grid, evals);
  }
  const int n = u.dimension();
  const auto radii = u.critical_radii();
  std::vector<double> out;
  if (u.is_radial()) {
    const Point e = Point::axis(n, 0);
    auto g = [&](double r) { return u(e * r); };
    out = level_roots(g, 0.0, R, radii, level, true, q.h_bracket_grid, evals);
  } else {
    const SphereRule rule = q.sphere_rule(n);
    for (const Point& th : rule.nodes) {
      auto g = [&](double r) { return u(th * r); };
      const auto rs = level_roots(g, 0.0, R, radii, level, false, q.h_bracket_grid, evals);
      out.insert(out.end(), rs.begin(), rs.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace vexs
