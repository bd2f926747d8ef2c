#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "vexs/point.hpp"

namespace vexs {

// p(x) = value.
struct ConstantExponent {
  double value;
};

// p(x) = a + b / (1 + |x|^2).
struct InverseQuadraticExponent {
  double a;
  double b;
};

// p(x) = a + b sin^2(x . direction).
struct SinSquaredExponent {
  double a;
  double b;
  Point direction;
};

// One-dimensional table, linear between knots and constant beyond the end
// knots. A knot listed twice is a jump; the field is right-continuous there.
struct PiecewiseTableExponent {
  std::vector<double> knots;
  std::vector<double> values;
};

using ExponentFamily =
    std::variant<ConstantExponent, InverseQuadraticExponent, SinSquaredExponent, PiecewiseTableExponent>;

// A variable exponent p : R^n -> [p_minus, p_plus] subset [1, inf). The bounds
// are the analytic extrema of the family, fixed at construction.
class ExponentField {
 public:
  static ExponentField constant(int dim, double p);
  static ExponentField inverse_quadratic(int dim, double a, double b);
  static ExponentField sin_squared(int dim, double a, double b, const Point& direction);
  static ExponentField piecewise_table(std::vector<double> knots, std::vector<double> values);

  // eval_exponent. Throws DomainError for non-finite x or a dimension mismatch.
  double operator()(const Point& x) const;

  int dimension() const noexcept { return dim_; }
  double p_minus() const noexcept { return p_minus_; }
  double p_plus() const noexcept { return p_plus_; }
  // lim_{|x| -> inf} p(x) when the family has one.
  std::optional<double> p_infinity() const noexcept { return p_infinity_; }
  bool is_constant() const noexcept { return p_minus_ == p_plus_; }

  const ExponentFamily& family() const noexcept { return family_; }
  std::string_view family_name() const noexcept;

 private:
  ExponentField(int dim, ExponentFamily family);
  double raw(const Point& x) const;

  int dim_;
  ExponentFamily family_;
  double p_minus_ = 1.0;
  double p_plus_ = 1.0;
  std::optional<double> p_infinity_;
};

// Symmetric pair exponent p(x, y) = (p(x) + p(y)) / 2 built from a base field;
// its bounds are those of the base.
class PairExponent {
 public:
  explicit PairExponent(ExponentField base) : base_(std::move(base)) {}

  double operator()(const Point& x, const Point& y) const { return 0.5 * (base_(x) + base_(y)); }
  double p_minus() const noexcept { return base_.p_minus(); }
  double p_plus() const noexcept { return base_.p_plus(); }
  int dimension() const noexcept { return base_.dimension(); }
  bool is_constant() const noexcept { return base_.is_constant(); }
  const ExponentField& base() const noexcept { return base_; }

 private:
  ExponentField base_;
};

struct LogHolderDiagnosis {
  // max over pairs of |1/p(x) - 1/p(y)| log(e + 1/|x - y|)
  double c_holder_estimate = 0.0;
  // max over sampled points of |1/p(x) - 1/p_inf| log(e + |x|); empty when
  // the field has no p_infinity.
  std::optional<double> c_decay_estimate;
  bool satisfied = true;
  // c_holder_estimate above the caller's threshold (suggests a jump).
  bool flagged_large = false;
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped = 0;
};

// Sampled log-Hoelder diagnostic for alpha = 1/p. Coincident pairs are skipped.
LogHolderDiagnosis log_holder_diagnose(const ExponentField& field,
                                       std::span<const std::pair<Point, Point>> sample,
                                       double large_threshold = 1.0);

}  // namespace vexs
