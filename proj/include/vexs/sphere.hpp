#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vexs/exponents.hpp"
#include "vexs/point.hpp"

namespace vexs {

enum class SphereRuleKind { exact_pair, trapezoid_circle, gauss_azimuth_product };

std::string_view to_string(SphereRuleKind kind) noexcept;

// A positive-weight quadrature rule on S^{n-1}, n <= 3.
struct SphereRule {
  int dimension = 1;
  SphereRuleKind kind = SphereRuleKind::exact_pair;
  int resolution = 1;
  std::vector<Point> nodes;
  std::vector<double> weights;

  std::size_t node_count() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// Rule of the given resolution:
//   n = 1: the pair {-1, +1} (resolution ignored);
//   n = 2: `resolution` equispaced angles;
//   n = 3: `resolution` Gauss-Legendre nodes in the polar cosine (split evenly
//          between the two hemispheres) times `resolution` azimuths.
// With a pole, the rule is rotated so the pole is its polar axis; integrands
// depending only on omega . pole then have their kink on the equator, which
// the rule resolves exactly. Resolution must be even for n = 3 and a multiple
// of 4 for n = 2.
SphereRule make_sphere_rule(int n, int resolution, std::optional<Point> pole = std::nullopt);

// |S^{n-1}|
double sphere_surface_measure(int n);

// int_{S^{n-1}} |omega . e|^p, closed form via log-Gamma.
double abs_power_sphere_integral(int n, double p);
// Same integral evaluated by a rule for a unit vector e.
double abs_power_sphere_integral(const SphereRule& rule, double p, const Point& e);

// K_{n,p} = (1/p) int_{S^{n-1}} |omega . e|^p
double k_np(int n, double p);
// x -> K_{n,p(x)}
std::function<double(const Point&)> k_np_field(const ExponentField& p);

struct DirectionalIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_residual() const noexcept;
};

// lhs = rule sum of |V . omega|^p, rhs = p K_{n,p} |V|^p.
DirectionalIdentity directional_identity_check(double p, const Point& v, const SphereRule& rule);
// Uses a rule of the given resolution aligned with V.
DirectionalIdentity directional_identity_check(double p, const Point& v, int resolution);

struct SphereConstantRow {
  int n;
  double p;
  double k_closed;
  double k_quad;
  double rel_diff;
};

// Closed form versus quadrature (rule aligned with e_1) for every (n, p).
std::vector<SphereConstantRow> sphere_constant_table(std::span<const int> ns, std::span<const double> ps,
                                                     int resolution_2d = 1 << 16, int resolution_3d = 512);

// n-point Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on
// the three-term recurrence).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace vexs
