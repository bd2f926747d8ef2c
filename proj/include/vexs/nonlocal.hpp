#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "vexs/exponents.hpp"
#include "vexs/fields.hpp"
#include "vexs/quadrature_spec.hpp"

namespace vexs {

enum class WeightMode { unit, p_of_x };
enum class EpsMode { full, small_jump, large_jump_tail };

std::string_view to_string(WeightMode m) noexcept;
std::string_view to_string(EpsMode m) noexcept;

struct FunctionalValue {
  double value = 0.0;
  double error_estimate = 0.0;
  double truncation_radius = 0.0;
  std::size_t node_count = 0;
  bool empty_superlevel = false;
  bool converged = true;
};

// int int_{|u(x)-u(y)| > delta} delta^{p(x)} / |x-y|^{n+p(x)} dx dy, times
// p(x) in p_of_x mode. Inner h-integrals are exact on root-bracketed
// superlevel intervals.
FunctionalValue nguyen_functional(const ScalarField& u, const ExponentField& p, double delta, WeightMode mode,
                                  const QuadratureSpec& q = {});

// int K_{n,p(x)} |grad u(x)|^{p(x)} dx, times p(x) in p_of_x mode.
FunctionalValue local_energy(const ScalarField& u, const ExponentField& p, WeightMode mode,
                             const QuadratureSpec& q = {});

// full:            int int eps |u(x)-u(y)|^{p(x)+eps} / |x-y|^{n+p(x)}
// small_jump:      the same restricted to |u(x)-u(y)| <= 1
// large_jump_tail: int int_{|u(x)-u(y)| > 1} 1 / |x-y|^{n+p(x)} (eps unused)
FunctionalValue eps_functional(const ScalarField& u, const ExponentField& p, double eps, EpsMode mode,
                               const QuadratureSpec& q = {});

// (1 - s) int int |u(x)-u(y)|^p / |x-y|^{n+ps}, constant p > 1.
FunctionalValue bbm_functional(const ScalarField& u, double p, double s, const QuadratureSpec& q = {});

// Superlevel set {h in (h_lo, h_b) : |u(x + h omega) - u(x)| > delta} for one
// ray, as sorted disjoint intervals; h_lo = delta / Lip(u) when u has a
// Lipschitz bound. `unbounded` is set when the set continues past h_b
// (|u(x)| > delta with u vanishing outside the core).
struct SuperlevelSet {
  std::vector<std::pair<double, double>> intervals;
  bool unbounded = false;
  std::size_t evaluations = 0;
};

SuperlevelSet superlevel_along_ray(const ScalarField& u, const Point& x, const Point& omega, double delta,
                                   const QuadratureSpec& q = {});

struct UniformBound {
  std::vector<double> deltas;
  std::vector<double> values;
  double sup_value = 0.0;
  // ||grad u||_{p+}^{p+} + ||grad u||_{p-}^{p-}
  double rhs_bound = 0.0;
};

UniformBound uniform_bound_check(const ScalarField& u, const ExponentField& p, std::span<const double> delta_grid,
                                 const QuadratureSpec& q = {});

// For a fixed direction omega:
//   lhs = int_x int_{|u(x+h omega)-u(x)| > delta} delta^{p(x)} h^{-p(x)-1} dh dx
//   rhs = (1/p-) int |M_omega(grad u)(x)|^{p(x)} dx
// where M_omega is the one-sided directional maximal function of |grad u|.
struct KeyInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

KeyInequality key_inequality_check(const ScalarField& u, const ExponentField& p, double delta, const Point& omega,
                                   const QuadratureSpec& q = {}, int maximal_depth = 30);

// Weighted Luxemburg norm of |grad u| with weight p(x) K_{n,p(x)} against
// max over p+- of E(eps)^{1/p+-}, E the full eps functional.
struct LuxnormBound {
  double weighted_gradient_norm = 0.0;
  double eps_functional = 0.0;
  double rhs = 0.0;
};

LuxnormBound luxnorm_bound(const ScalarField& u, const ExponentField& p, double eps, const QuadratureSpec& q = {});

// ---- layer-cake identity on a square Omega x Omega, Omega = (a, b) ----

struct PairFunction {
  enum class Kind { constant, abs_diff, sine, exp_linear, field_diff };
  Kind kind = Kind::constant;
  // constant:   c0
  // abs_diff:   c0 |x - y|
  // sine:       c0 (1 + sin(k1 x + k2 y + theta))
  // exp_linear: c0 exp(k1 x + k2 y)
  // field_diff: |u(x) - u(y)|
  double c0 = 1.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double theta = 0.0;
  std::optional<ScalarField> field;

  double operator()(double x, double y) const;
  // y-values splitting (a, b) into pieces on which y -> f(x, y) is monotone.
  std::vector<double> monotone_splits(double x, double a, double b) const;

  static PairFunction constant(double c) { return {Kind::constant, c, 0.0, 0.0, 0.0, std::nullopt}; }
  static PairFunction abs_diff(double c = 1.0) { return {Kind::abs_diff, c, 0.0, 0.0, 0.0, std::nullopt}; }
  static PairFunction sine(double c0, double k1, double k2, double theta) { return {Kind::sine, c0, k1, k2, theta, std::nullopt}; }
  static PairFunction exp_linear(double c0, double k1, double k2) { return {Kind::exp_linear, c0, k1, k2, 0.0, std::nullopt}; }
  static PairFunction field_diff(ScalarField u);
};

// alpha(x) = base(x) + shift, which must stay > -1.
struct ShiftedExponent {
  ExponentField base;
  double shift = 0.0;
  double operator()(double x) const { return base(Point{x}) + shift; }
  double minimum() const { return base.p_minus() + shift; }
};

struct LayerCakeResult {
  double lhs = 0.0;
  double rhs_small = 0.0;
  double rhs_large = 0.0;
  double residual = 0.0;
  std::size_t node_count = 0;
};

LayerCakeResult layer_cake_check(const PairFunction& phi, const PairFunction& psi, const ShiftedExponent& alpha,
                                 double a, double b, const QuadratureSpec& q = {});

}  // namespace vexs
