#pragma once

#include <cstddef>
#include <functional>

#include "vexs/exponents.hpp"
#include "vexs/fields.hpp"
#include "vexs/quadrature_spec.hpp"

namespace vexs {

// A positive weight w(x). An empty function means w = 1.
using Weight = std::function<double(const Point&)>;

// Which function of u the modular is taken of.
enum class FieldPart { value, gradient_norm };

struct ModularValue {
  double value = 0.0;
  double truncation_radius = 0.0;
  std::size_t node_count = 0;
  double error_estimate = 0.0;
};

struct ModularOptions {
  double lambda = 1.0;
  Weight weight;
  FieldPart part = FieldPart::value;
};

// int |g(x)/lambda|^{p(x)} w(x) dx with g = u or |grad u|.
ModularValue modular(const ScalarField& u, const ExponentField& p, const ModularOptions& opt = {},
                     const QuadratureSpec& q = {});

struct NormResult {
  double norm = 0.0;
  double modular_at_norm = 0.0;
  int iterations = 0;
  std::size_t node_count = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// Bisection in log(lambda) on the monotone map lambda -> rho(u / lambda): the
// bracket starts at [eps_machine, lambda_hi] with lambda_hi doubling from 1,
// and shrinks until its width is <= 1e-10 lambda.
NormResult luxemburg_norm(const ScalarField& u, const ExponentField& p, const Weight& weight = {},
                          const QuadratureSpec& q = {}, FieldPart part = FieldPart::value);

struct NormModularCheck {
  double norm = 0.0;
  double modular_at_1 = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool holds = true;
};

// min(rho^{1/p-}, rho^{1/p+}) <= ||u|| <= max(rho^{1/p-}, rho^{1/p+}),
// with a 1e-8 relative slack.
NormModularCheck norm_modular_inequality_check(const ScalarField& u, const ExponentField& p,
                                               const Weight& weight = {}, const QuadratureSpec& q = {},
                                               FieldPart part = FieldPart::value);

// int int |u(x) - u(y)|^{p(x,y)} / (lambda^{p(x,y)} |x - y|^{n + s p(x,y)}) dx dy
ModularValue frac_modular(const ScalarField& u, double s, const PairExponent& p, double lambda,
                          const QuadratureSpec& q = {});

// [u]_{s, p(.,.)}: Luxemburg-type seminorm of the fractional modular.
NormResult frac_seminorm(const ScalarField& u, double s, const PairExponent& p, const QuadratureSpec& q = {});

struct FractionalSpaceNorm {
  double lq_norm = 0.0;
  double seminorm = 0.0;
  double total = 0.0;
};

// ||u||_{L^{q(.)}} + [u]_{s, p(.,.)}
FractionalSpaceNorm fractional_space_norm(const ScalarField& u, const ExponentField& q_exp, double s,
                                          const PairExponent& p, const QuadratureSpec& q = {});

// Generic bisection shared by the norms: smallest lambda with rho(lambda) <= 1
// for a non-increasing rho. Exposed for testing.
NormResult bisect_unit_level(const std::function<ModularValue(double)>& rho, const char* operation);

}  // namespace vexs
