#include "vexs/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "vexs/errors.hpp"

namespace vexs {

namespace {

void check_n(int n) {
  if (n < 1 || n > kMaxDimension) throw DomainError("sphere dimension must be in 1..3");
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("sphere integral needs a finite p >= 1");
}

Point unit(const Point& v) {
  const double r = v.norm();
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("rule pole must be a finite non-zero vector");
  return v * (1.0 / r);
}

}  // namespace

std::string_view to_string(SphereRuleKind kind) noexcept {
  switch (kind) {
    case SphereRuleKind::exact_pair: return "exact-pair";
    case SphereRuleKind::trapezoid_circle: return "trapezoid-circle";
    case SphereRuleKind::gauss_azimuth_product: return "gauss-azimuth-product";
  }
  return "unknown";
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw DomainError("Gauss-Legendre needs at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  // P_n(x) and P_n'(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, dp] = legendre(x);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
    nodes[lo] = -x;
    nodes[hi] = x;
    weights[lo] = weights[hi] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

double sphere_surface_measure(int n) {
  check_n(n);
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    default: return 4.0 * std::numbers::pi;
  }
}

SphereRule make_sphere_rule(int n, int resolution, std::optional<Point> pole) {
  check_n(n);
  SphereRule rule;
  rule.dimension = n;
  rule.resolution = resolution;
  if (pole && pole->dim() != n) throw DomainError("rule pole has the wrong dimension");

  if (n == 1) {
    rule.kind = SphereRuleKind::exact_pair;
    rule.resolution = 2;
    rule.nodes = {Point{-1.0}, Point{1.0}};
    rule.weights = {1.0, 1.0};
    return rule;
  }

  if (n == 2) {
    if (resolution < 4 || resolution % 4 != 0) throw DomainError("circle rule resolution must be a multiple of 4");
    rule.kind = SphereRuleKind::trapezoid_circle;
    const Point e = pole ? unit(*pole) : Point{1.0, 0.0};
    const Point t{-e[1], e[0]};
    const double w = 2.0 * std::numbers::pi / resolution;
    rule.nodes.reserve(static_cast<std::size_t>(resolution));
    for (int k = 0; k < resolution; ++k) {
      const double th = w * k;
      rule.nodes.push_back(e * std::cos(th) + t * std::sin(th));
      rule.weights.push_back(w);
    }
    return rule;
  }

  if (resolution < 2 || resolution % 2 != 0) throw DomainError("sphere rule resolution must be even");
  rule.kind = SphereRuleKind::gauss_azimuth_product;
  const Point e = pole ? unit(*pole) : Point{0.0, 0.0, 1.0};
  // Orthonormal frame (t1, t2, e).
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(e[i]) < std::abs(e[k])) k = i;
  Point a = Point::axis(3, k);
  Point t1 = unit(a - e * a.dot(e));
  Point t2{e[1] * t1[2] - e[2] * t1[1], e[2] * t1[0] - e[0] * t1[2], e[0] * t1[1] - e[1] * t1[0]};

  std::vector<double> gx, gw;
  gauss_legendre(resolution / 2, gx, gw);
  const double dphi = 2.0 * std::numbers::pi / resolution;
  rule.nodes.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
  for (int hemi = 0; hemi < 2; ++hemi) {
    for (std::size_t i = 0; i < gx.size(); ++i) {
      // Map [-1, 1] onto [-1, 0] or [0, 1].
      const double z = hemi == 0 ? 0.5 * (gx[i] - 1.0) : 0.5 * (gx[i] + 1.0);
      const double wz = 0.5 * gw[i];
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int j = 0; j < resolution; ++j) {
        const double phi = dphi * j;
        Point w = e * z + t1 * (rho * std::cos(phi)) + t2 * (rho * std::sin(phi));
        rule.nodes.push_back(w * (1.0 / w.norm()));
        rule.weights.push_back(wz * dphi);
      }
    }
  }
  return rule;
}

double abs_power_sphere_integral(int n, double p) {
  check_n(n);
  check_p(p);
  const double log_val = std::log(2.0) + 0.5 * (n - 1) * std::log(std::numbers::pi) + std::lgamma(0.5 * (p + 1.0)) -
                         std::lgamma(0.5 * (n + p));
  return std::exp(log_val);
}

double abs_power_sphere_integral(const SphereRule& rule, double p, const Point& e) {
  check_p(p);
  if (e.dim() != rule.dimension) throw DomainError("reference direction has the wrong dimension");
  const Point eu = unit(e);
  return rule.integrate([&](const Point& w) { return std::pow(std::abs(w.dot(eu)), p); });
}

double k_np(int n, double p) { return abs_power_sphere_integral(n, p) / p; }

std::function<double(const Point&)> k_np_field(const ExponentField& p) {
  return [p](const Point& x) { return k_np(p.dimension(), p(x)); };
}

double DirectionalIdentity::relative_residual() const noexcept {
  if (rhs == 0.0) return std::abs(lhs);
  return std::abs(lhs - rhs) / std::abs(rhs);
}

DirectionalIdentity directional_identity_check(double p, const Point& v, const SphereRule& rule) {
  check_p(p);
  if (v.dim() != rule.dimension) throw DomainError("vector has the wrong dimension");
  if (!v.is_finite()) throw DomainError("vector must be finite");
  DirectionalIdentity out;
  out.lhs = rule.integrate([&](const Point& w) { return std::pow(std::abs(w.dot(v)), p); });
  out.rhs = p * k_np(rule.dimension, p) * std::pow(v.norm(), p);
  return out;
}

DirectionalIdentity directional_identity_check(double p, const Point& v, int resolution) {
  const bool zero = v.norm() == 0.0;
  const SphereRule rule = make_sphere_rule(v.dim(), resolution, zero ? std::nullopt : std::optional<Point>(v));
  return directional_identity_check(p, v, rule);
}

std::vector<SphereConstantRow> sphere_constant_table(std::span<const int> ns, std::span<const double> ps,
                                                     int resolution_2d, int resolution_3d) {
  std::vector<SphereConstantRow> rows;
  for (int n : ns) {
    const int res = n == 2 ? resolution_2d : resolution_3d;
    const Point e = Point::axis(n, 0);
    const SphereRule rule = make_sphere_rule(n, res, e);
    for (double p : ps) {
      SphereConstantRow row{n, p, k_np(n, p), abs_power_sphere_integral(rule, p, e) / p, 0.0};
      row.rel_diff = std::abs(row.k_quad - row.k_closed) / row.k_closed;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace vexs
