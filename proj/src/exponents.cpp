#include "vexs/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vexs/errors.hpp"

namespace vexs {

namespace {

constexpr double kDriftTolerance = 1e-12;

void check_dimension(int dim) {
  if (dim < 1 || dim > kMaxDimension) throw DomainError("exponent dimension must be in 1..3");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

ExponentField::ExponentField(int dim, ExponentFamily family) : dim_(dim), family_(std::move(family)) {
  check_dimension(dim_);
  std::visit(Overloaded{
                 [&](const ConstantExponent& c) {
                   p_minus_ = p_plus_ = c.value;
                   p_infinity_ = c.value;
                 },
                 [&](const InverseQuadraticExponent& q) {
                   p_minus_ = std::min(q.a, q.a + q.b);
                   p_plus_ = std::max(q.a, q.a + q.b);
                   p_infinity_ = q.a;
                 },
                 [&](const SinSquaredExponent& s) {
                   const bool flat = s.b == 0.0 || s.direction.norm() == 0.0;
                   p_minus_ = flat ? s.a : std::min(s.a, s.a + s.b);
                   p_plus_ = flat ? s.a : std::max(s.a, s.a + s.b);
                   if (flat) p_infinity_ = s.a;
                 },
                 [&](const PiecewiseTableExponent& t) {
                   const auto [lo, hi] = std::minmax_element(t.values.begin(), t.values.end());
                   p_minus_ = *lo;
                   p_plus_ = *hi;
                   if (t.values.front() == t.values.back()) p_infinity_ = t.values.front();
                 },
             },
             family_);
  if (!std::isfinite(p_minus_) || !std::isfinite(p_plus_)) throw DomainError("exponent bounds must be finite");
  if (p_minus_ < 1.0) throw DomainError("exponent must satisfy p(x) >= 1 everywhere");
}

ExponentField ExponentField::constant(int dim, double p) { return ExponentField(dim, ConstantExponent{p}); }

ExponentField ExponentField::inverse_quadratic(int dim, double a, double b) {
  return ExponentField(dim, InverseQuadraticExponent{a, b});
}

ExponentField ExponentField::sin_squared(int dim, double a, double b, const Point& direction) {
  if (direction.dim() != dim) throw DomainError("sin-squared direction has the wrong dimension");
  return ExponentField(dim, SinSquaredExponent{a, b, direction});
}

ExponentField ExponentField::piecewise_table(std::vector<double> knots, std::vector<double> values) {
  if (knots.empty() || knots.size() != values.size())
    throw DomainError("piecewise table needs matching, non-empty knots and values");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i] < knots[i - 1]) throw DomainError("piecewise table knots must be non-decreasing");
    if (i >= 2 && knots[i] == knots[i - 2]) throw DomainError("a knot may appear at most twice");
  }
  for (double k : knots)
    if (!std::isfinite(k)) throw DomainError("piecewise table knots must be finite");
  return ExponentField(1, PiecewiseTableExponent{std::move(knots), std::move(values)});
}

double ExponentField::raw(const Point& x) const {
  return std::visit(Overloaded{
                        [](const ConstantExponent& c) { return c.value; },
                        [&](const InverseQuadraticExponent& q) { return q.a + q.b / (1.0 + x.norm_squared()); },
                        [&](const SinSquaredExponent& s) {
                          const double sn = std::sin(x.dot(s.direction));
                          return s.a + s.b * sn * sn;
                        },
                        [&](const PiecewiseTableExponent& t) {
                          const double xv = x[0];
                          const auto it = std::upper_bound(t.knots.begin(), t.knots.end(), xv);
                          if (it == t.knots.begin()) return t.values.front();
                          if (it == t.knots.end()) return t.values.back();
                          const auto i = static_cast<std::size_t>(it - t.knots.begin());
                          const double x0 = t.knots[i - 1], x1 = t.knots[i];
                          const double w = (xv - x0) / (x1 - x0);
                          return t.values[i - 1] + w * (t.values[i] - t.values[i - 1]);
                        },
                    },
                    family_);
}

double ExponentField::operator()(const Point& x) const {
  if (x.dim() != dim_) throw DomainError("exponent evaluated at a point of the wrong dimension");
  if (!x.is_finite()) throw DomainError("exponent evaluated at a non-finite point");
  const double p = raw(x);
  if (p < p_minus_) {
    if (p_minus_ - p > kDriftTolerance * p_minus_) throw InternalInconsistency("exponent fell below p_minus");
    return p_minus_;
  }
  if (p > p_plus_) {
    if (p - p_plus_ > kDriftTolerance * p_plus_) throw InternalInconsistency("exponent exceeded p_plus");
    return p_plus_;
  }
  return p;
}

std::string_view ExponentField::family_name() const noexcept {
  return std::visit(Overloaded{
                        [](const ConstantExponent&) { return std::string_view("constant"); },
                        [](const InverseQuadraticExponent&) { return std::string_view("inverse-quadratic"); },
                        [](const SinSquaredExponent&) { return std::string_view("sin-squared"); },
                        [](const PiecewiseTableExponent&) { return std::string_view("piecewise-table"); },
                    },
                    family_);
}

LogHolderDiagnosis log_holder_diagnose(const ExponentField& field,
                                       std::span<const std::pair<Point, Point>> sample,
                                       double large_threshold) {
  if (sample.empty()) throw DomainError("log-Hoelder diagnosis needs a non-empty sample");
  LogHolderDiagnosis out;
  const auto p_inf = field.p_infinity();
  double decay = 0.0;
  for (const auto& [x, y] : sample) {
    const double ax = 1.0 / field(x);
    const double ay = 1.0 / field(y);
    if (p_inf) {
      const double ainf = 1.0 / *p_inf;
      decay = std::max(decay, std::abs(ax - ainf) * std::log(std::numbers::e + x.norm()));
      decay = std::max(decay, std::abs(ay - ainf) * std::log(std::numbers::e + y.norm()));
    }
    const double dist = (x - y).norm();
    if (dist == 0.0) {
      ++out.pairs_skipped;
      continue;
    }
    ++out.pairs_used;
    const double ratio = std::abs(ax - ay) * std::log(std::numbers::e + 1.0 / dist);
    out.c_holder_estimate = std::max(out.c_holder_estimate, ratio);
  }
  if (p_inf) out.c_decay_estimate = decay;
  out.satisfied = std::isfinite(out.c_holder_estimate) && (!out.c_decay_estimate || std::isfinite(*out.c_decay_estimate));
  out.flagged_large = out.c_holder_estimate > large_threshold;
  return out;
}

}  // namespace vexs
