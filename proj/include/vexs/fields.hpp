#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vexs/exponents.hpp"
#include "vexs/point.hpp"

namespace vexs {

// exp(-|x - c|^2 / sigma^2)
struct GaussianField {
  Point center;
  double sigma;
};
// max(0, 1 - |x|)
struct TentField {};
// exp(-1 / (1 - |x|^2)) on |x| < 1, else 0
struct SmoothBumpField {};
// |x|^(-1/3) for x >= 2, else 0 (n = 1)
struct PowerTailField {};
// log|x| for 0 < |x| <= window, else 0; singular at the origin
struct LogSingularField {
  double window;
};
// Piecewise-linear through (x_i, u_i), zero outside [x_0, x_N] (n = 1)
struct SampledTableField {
  std::vector<double> x;
  std::vector<double> u;
};
// u(x) = value everywhere
struct ConstantField {
  double value;
};

using FieldFamily = std::variant<GaussianField, TentField, SmoothBumpField, PowerTailField, LogSingularField,
                                 SampledTableField, ConstantField>;

enum class GradientKind { analytic, finite_difference };

// A test function u : R^n -> R (n <= 3), optionally multiplied by an
// amplitude. Immutable.
class ScalarField {
 public:
  static ScalarField gaussian(int dim, double sigma, Point center);
  static ScalarField gaussian(int dim, double sigma = 1.0);
  static ScalarField tent(int dim);
  static ScalarField smooth_bump(int dim);
  static ScalarField power_tail();
  static ScalarField log_singular(int dim, double window);
  static ScalarField sampled_table(std::vector<double> x, std::vector<double> u);
  // Two-column CSV (x, u), strictly increasing x. A non-numeric first line is
  // treated as a header.
  static ScalarField sampled_table_csv(const std::string& path);
  static ScalarField constant(int dim, double value);
  static ScalarField zero(int dim) { return constant(dim, 0.0); }

  ScalarField scaled(double factor) const;
  ScalarField with_gradient(GradientKind kind) const;

  // eval_field. Throws DomainError at declared singular points.
  double operator()(const Point& x) const;
  // Analytic gradient, or central differences with step 1e-5 max(1, |x|).
  Point gradient(const Point& x) const;
  Point finite_difference_gradient(const Point& x) const;

  int dimension() const noexcept { return dim_; }
  double amplitude() const noexcept { return amplitude_; }
  GradientKind gradient_kind() const noexcept { return gradient_kind_; }
  const FieldFamily& family() const noexcept { return family_; }
  std::string_view family_name() const noexcept;

  // Global Lipschitz constant, when the family has one.
  std::optional<double> lipschitz_bound() const;
  // sup |u|
  double sup_bound() const;
  // sup u - inf u
  double oscillation_bound() const;
  // sup_{|x| >= R} |u(x)|
  double tail_bound(double radius) const;
  // Radius of a centered ball containing the support, for compactly
  // supported families.
  std::optional<double> support_radius() const;
  bool is_decaying() const;
  bool is_zero() const noexcept;
  // n = 1: kinks, jumps, extrema and singular points, sorted. Between
  // consecutive entries u is smooth and monotone.
  std::vector<double> critical_points() const;
  // n >= 2: radii |x| across which u is not smooth or changes monotonicity
  // along rays from the origin, for fields that are radial about the origin.
  std::vector<double> critical_radii() const;
  bool is_radial() const;
  std::optional<Point> singular_point() const;

 private:
  ScalarField(int dim, FieldFamily family);
  double raw(const Point& x) const;
  Point analytic_gradient(const Point& x) const;

  int dim_;
  FieldFamily family_;
  double amplitude_ = 1.0;
  GradientKind gradient_kind_ = GradientKind::analytic;
};

// Smallest (to 1e-3) R such that the analytic tail bound of both
// int_{|x|>R} |u|^p(x) and int_{|x|>R} |grad u|^p(x) is below tol. Compact
// families return their support radius. Throws UnsupportedError for fields
// that do not decay (or whose tail integral diverges for this exponent).
double truncation_radius(const ScalarField& u, const ExponentField& p, double tol);

// The tail bound used by truncation_radius, exposed for verification.
double tail_integral_bound(const ScalarField& u, const ExponentField& p, double radius);

}  // namespace vexs
