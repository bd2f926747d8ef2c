#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vexs/exponents.hpp"
#include "vexs/fields.hpp"
#include "vexs/quadrature_spec.hpp"

namespace vexs {

using PointFunction = std::function<double(const Point&)>;

struct MaximalSearch {
  // Geometric radius grid from r_min to r_max with this many points per decade.
  double r_min = 1e-6;
  int per_decade = 12;
  // Golden-section iterations around the best grid radius.
  int depth = 30;
};

struct MaximalEstimate {
  double value = 0.0;
  // 0 when the supremum is the small-ball limit |g(x)|.
  double best_radius = 0.0;
  std::size_t evaluations = 0;
};

// sup_{r > 0} average of |g| over B(x, r). `breaks` are points (n = 1) across
// which g is not smooth. Returns +inf when an average diverges.
MaximalEstimate hl_maximal_of(const PointFunction& g, const Point& x, double r_max, const MaximalSearch& search,
                              std::span<const double> breaks = {}, const QuadratureSpec& q = {});

// sup_{h > 0} (1/h) int_0^h |g(x + s omega)| ds.
MaximalEstimate directional_maximal_of(const PointFunction& g, const Point& x, const Point& omega, double h_max,
                                       const MaximalSearch& search, std::span<const double> breaks = {},
                                       const QuadratureSpec& q = {});

// M(u)(x) and M_omega(u)(x) for a field.
double hl_maximal(const ScalarField& u, const Point& x, double r_max, int depth, const QuadratureSpec& q = {});
double directional_maximal(const ScalarField& u, const Point& x, const Point& omega, double h_max, int depth,
                           const QuadratureSpec& q = {});

struct MaximalProfile {
  std::vector<Point> points;
  std::vector<double> values;
  std::vector<double> best_radii;
  MaximalSearch search;
  double r_max = 0.0;
};

MaximalProfile hl_maximal_profile(const ScalarField& u, std::span<const Point> points, double r_max, int depth,
                                  const QuadratureSpec& q = {});

// ---- divergence counterexample: u = |x|^{-1/3} on [2, inf), p = 2 on
// (-inf, -2], 4 on [2, inf), linear in between ----

ExponentField counterexample_exponent();

struct CounterexampleRow {
  double R = 0.0;
  double modular_u = 0.0;
  double modular_Mu = 0.0;
};

struct CounterexampleReport {
  std::vector<CounterexampleRow> rows;
  double modular_u = 0.0;
  // beta of the fit modular_Mu(R) ~ m0 + c R^beta.
  double growth_exponent_fit = 0.0;
  // Plain least-squares slope of log modular_Mu against log R.
  double loglog_slope = 0.0;
  std::size_t node_count = 0;
};

// R_values increasing, each >= 10.
CounterexampleReport counterexample_experiment(std::span<const double> R_values, const QuadratureSpec& q = {},
                                               int depth = 40);

// ---- BMO quantity ----

struct Ball {
  Point center;
  double radius = 0.0;
};

struct BmoResult {
  std::vector<double> per_ball;
  // Sampled lower bound of the supremum over all balls in E.
  double sup = 0.0;
};

// |B|^{-(n+1)/n} int_B int_B |u(x) - u(y)| dx dy for each ball. E_interior is
// an open ball (n = 1: an interval given by center and radius); each ball
// must lie in its closure.
BmoResult bmo_quantity(const ScalarField& u, const Ball& e_interior, std::span<const Ball> balls,
                       const QuadratureSpec& q = {});

}  // namespace vexs
