#pragma once

// Polar reduction of double integrals over R^n x R^n:
//   int_{R^n} int_{S^{n-1}} int_0^inf G(x, omega, h) dh domega dx,  y = x + h omega.
// The outer x-integral is adaptive (n = 1) or polar-adaptive in |x| with a
// sphere rule in angle (n >= 2); the region |x| > R is reached through a
// mapped power-tail rule. The inner h-integral is supplied per functional.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vexs/fields.hpp"
#include "vexs/quadrature.hpp"
#include "vexs/quadrature_spec.hpp"

namespace vexs {

// One (x, omega) pair. On [h_enter, h_exit] the ray lies inside the core ball
// of radius R; outside it u is (numerically) zero.
struct Ray {
  Point x;
  Point omega;
  double u0 = 0.0;
  double h_enter = 0.0;
  double h_exit = 0.0;
  bool x_inside = true;
  // n = 1: h-values of the critical points of u strictly inside (h_enter, h_exit).
  std::vector<double> h_splits;
  // Below taylor_h the difference u(x + h omega) - u(x) is taken as slope * h;
  // the direct difference there is dominated by rounding.
  double slope = 0.0;
  double taylor_h = 0.0;

  double delta(const ScalarField& u, double h) const {
    if (h < taylor_h) return slope * h;
    return u(along_ray(x, omega, h)) - u0;
  }
};

using RayIntegral = std::function<quad::Result(const Ray&)>;

struct PolarProblem {
  const ScalarField* u = nullptr;
  double core_radius = 1.0;
  // The x-integrand decays like |x|^(-n-gamma) outside the core.
  double far_gamma = 1.0;
  // Extra outer breakpoints: x-values (n = 1) or radii (n >= 2).
  std::vector<double> outer_breaks;
  // Integrate along this single direction (weight 1) instead of the sphere.
  std::optional<Point> direction;
};

struct PolarResult {
  quad::Result outer;
  std::size_t inner_evaluations = 0;
  bool inner_converged = true;
};

// Fills `ray` for the pair (x, omega) against the core ball of radius R;
// false when the ray misses the ball. `critical` are the critical points of u
// (n = 1) turned into h-splits.
bool make_ray(const ScalarField& u, double R, std::span<const double> critical, const Point& x, const Point& omega,
              Ray& ray);

// int_0^b f(h) dh on the first piece of a ray from an interior x, where
// f(h) ~ C h^beta (beta > -1). On [0, h0], h0 = min(taylor_h, b), the caller's
// closed form head(h0) is used; the rest is integrated in log h. Without a
// Taylor range the singularity is removed by a power substitution.
quad::Result integrate_ray_head(const std::function<double(double)>& f, const Ray& ray, double b, double beta,
                                const std::function<double(double)>& head, const quad::Options& opt);

PolarResult polar_double_integral(const PolarProblem& problem, const RayIntegral& inner, const QuadratureSpec& q);

// Core radius for the double integrals: the support radius, the explicit
// QuadratureSpec radius, or the truncation radius of the field for exponent p.
double polar_core_radius(const ScalarField& u, const ExponentField& p, const QuadratureSpec& q);

// Root of f on [a, b] given a sign change, by bisection to
// tol = 1e-12 max(1, |root|). Throws InternalInconsistency on NaN.
double bisect_root(const std::function<double(double)>& f, double a, double b, double fa, std::size_t& evals);

// Sorted roots of g(t) = level and g(t) = -level on [a, b]. Between
// consecutive splits g is assumed monotone when `monotone` is set; otherwise
// the pieces are additionally scanned on `grid` uniform points and sign
// changes are bracketed.
std::vector<double> level_roots(const std::function<double(double)>& g, double a, double b,
                                std::span<const double> splits, double level, bool monotone, int grid,
                                std::size_t& evals);

// n = 1: x-values in [-R, R] with |u(x)| = level. n >= 2: radii along the
// directions of the QuadratureSpec sphere rule.
std::vector<double> level_crossing_breaks(const ScalarField& u, double R, double level, const QuadratureSpec& q);

}  // namespace vexs
