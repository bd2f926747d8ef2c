#include "vexs/vex_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vexs/errors.hpp"
#include "vexs/polar.hpp"

namespace vexs {

namespace {

constexpr double kLambdaCeiling = 1e12;

// Smallest value p takes far out on the positive axis.
double exponent_toward_plus_infinity(const ExponentField& p) {
  if (auto pi = p.p_infinity()) return *pi;
  if (const auto* t = std::get_if<PiecewiseTableExponent>(&p.family())) return t->values.back();
  return p.p_minus();
}

// Algebraic decay rate of the integrand |g|^p outside the core, minus n.
double modular_tail_gamma(const ScalarField& u, const ExponentField& p, FieldPart part) {
  if (std::holds_alternative<PowerTailField>(u.family())) {
    const double decay = part == FieldPart::value ? 1.0 / 3.0 : 4.0 / 3.0;
    return decay * exponent_toward_plus_infinity(p) - 1.0;
  }
  return 1.0;
}

}  // namespace

ModularValue modular(const ScalarField& u, const ExponentField& p, const ModularOptions& opt, const QuadratureSpec& q) {
  if (!(opt.lambda > 0.0) || !std::isfinite(opt.lambda)) throw DomainError("modular scale must be positive and finite");
  if (u.dimension() != p.dimension()) throw DomainError("field and exponent dimensions differ");
  q.validate();
  ModularValue out;
  if (u.is_zero()) return out;
  if (opt.part == FieldPart::gradient_norm && std::holds_alternative<ConstantField>(u.family())) return out;

  const SpaceDomain dom = space_domain_for(u, p, q);
  out.truncation_radius = dom.core_radius;
  const double inv_lambda = 1.0 / opt.lambda;
  auto integrand = [&](const Point& x) {
    const double g = opt.part == FieldPart::value ? std::abs(u(x)) : u.gradient(x).norm();
    if (g == 0.0) return 0.0;
    double v = std::pow(g * inv_lambda, p(x));
    if (opt.weight) {
      const double w = opt.weight(x);
      if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("weight must be positive and finite where evaluated");
      v *= w;
    }
    return v;
  };
  const double gamma = modular_tail_gamma(u, p, opt.part);
  if (dom.tails && !(gamma > 0.0))
    throw DivergenceError("modular", "integrand decays too slowly at infinity for this exponent");
  const quad::Result r = integrate_space(integrand, dom, gamma, q);
  if (!std::isfinite(r.value)) throw DivergenceError("modular", "integral is not finite");
  out.value = r.value;
  out.error_estimate = r.error;
  out.node_count = r.evaluations;
  return out;
}

NormResult bisect_unit_level(const std::function<ModularValue(double)>& rho, const char* operation) {
  NormResult out;
  ModularValue at_hi = rho(1.0);
  out.node_count += at_hi.node_count;
  double lo = std::numeric_limits<double>::epsilon();
  double hi = 1.0;
  while (!(at_hi.value <= 1.0)) {
    lo = hi;
    hi *= 2.0;
    ++out.iterations;
    if (hi > kLambdaCeiling) throw DivergenceError(operation, "modular stays above 1 for every scale up to 1e12");
    at_hi = rho(hi);
    out.node_count += at_hi.node_count;
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = std::sqrt(lo * hi);
    const ModularValue m = rho(mid);
    out.node_count += m.node_count;
    ++out.iterations;
    if (m.value <= 1.0) {
      hi = mid;
      at_hi = m;
    } else {
      lo = mid;
    }
  }
  out.norm = hi;
  out.modular_at_norm = at_hi.value;
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  return out;
}

namespace {

// rho(u / lambda) for every lambda from one evaluation when the exponent is
// constant: rho(u / lambda) = lambda^{-p} rho(u).
std::function<ModularValue(double)> scaled_from(const ModularValue& at_one, double p) {
  return [at_one, p](double lambda) {
    ModularValue m = at_one;
    m.value = at_one.value * std::pow(lambda, -p);
    m.node_count = 0;
    return m;
  };
}

}  // namespace

NormResult luxemburg_norm(const ScalarField& u, const ExponentField& p, const Weight& weight, const QuadratureSpec& q,
                          FieldPart part) {
  if (u.is_zero()) return {};
  ModularOptions base{1.0, weight, part};
  const ModularValue at_one = modular(u, p, base, q);
  if (at_one.value == 0.0) return {};
  NormResult out;
  if (p.is_constant()) {
    out = bisect_unit_level(scaled_from(at_one, p.p_minus()), "luxemburg_norm");
  } else {
    out = bisect_unit_level(
        [&](double lambda) {
          ModularOptions o = base;
          o.lambda = lambda;
          return modular(u, p, o, q);
        },
        "luxemburg_norm");
  }
  out.node_count += at_one.node_count;
  return out;
}

NormModularCheck norm_modular_inequality_check(const ScalarField& u, const ExponentField& p, const Weight& weight,
                                               const QuadratureSpec& q, FieldPart part) {
  NormModularCheck out;
  out.modular_at_1 = modular(u, p, ModularOptions{1.0, weight, part}, q).value;
  out.norm = luxemburg_norm(u, p, weight, q, part).norm;
  const double a = std::pow(out.modular_at_1, 1.0 / p.p_minus());
  const double b = std::pow(out.modular_at_1, 1.0 / p.p_plus());
  out.lower = std::min(a, b);
  out.upper = std::max(a, b);
  constexpr double slack = 1e-8;
  out.holds = out.lower <= out.norm * (1.0 + slack) && out.norm <= out.upper * (1.0 + slack);
  return out;
}

ModularValue frac_modular(const ScalarField& u, double s, const PairExponent& p, double lambda, const QuadratureSpec& q) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order s must lie in (0, 1)");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("seminorm scale must be positive and finite");
  if (u.dimension() != p.dimension()) throw DomainError("field and exponent dimensions differ");
  q.validate();
  ModularValue out;
  if (u.is_zero() || std::holds_alternative<ConstantField>(u.family())) return out;

  const ExponentField& base = p.base();
  const double R = polar_core_radius(u, base, q);
  const bool constant_p = p.is_constant();
  const double inv_lambda = 1.0 / lambda;
  const quad::Options iopt = q.inner_options();

  RayIntegral inner = [&](const Ray& ray) {
    const double px = base(ray.x);
    auto f = [&](double h) {
      const double d = std::abs(ray.delta(u, h));
      if (d == 0.0) return 0.0;
      const double qe = constant_p ? px : p(ray.x, along_ray(ray.x, ray.omega, h));
      return std::pow(d * inv_lambda, qe) * std::pow(h, -1.0 - s * qe);
    };
    // |slope h|^p h^{-1-sp} on the Taylor range.
    auto head = [&](double h0) {
      const double a = std::abs(ray.slope) * inv_lambda;
      if (a == 0.0) return 0.0;
      const double e = px * (1.0 - s);
      return std::pow(a, px) * std::pow(h0, e) / e;
    };
    const double hb = q.h_max ? std::min(ray.h_exit, *q.h_max) : ray.h_exit;
    quad::Result acc;
    if (hb > ray.h_enter) {
      const auto pts = quad::breakpoints_within(ray.h_enter, hb, ray.h_splits);
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (i == 0 && ray.x_inside)
          acc += integrate_ray_head(f, ray, pts[1], px * (1.0 - s) - 1.0, head, iopt);
        else
          acc += quad::integrate(f, pts[i], pts[i + 1], iopt);
      }
    }
    if (ray.u0 != 0.0 && ray.x_inside) {
      const double a = std::abs(ray.u0) * inv_lambda;
      if (constant_p) {
        acc.value += std::pow(a, px) * std::pow(hb, -s * px) / (s * px);
      } else {
        auto tail = [&](double h) {
          const double qe = p(ray.x, along_ray(ray.x, ray.omega, h));
          return std::pow(a, qe) * std::pow(h, -1.0 - s * qe);
        };
        acc += quad::integrate_power_tail(tail, hb, s * p.p_minus(), iopt);
      }
    }
    return acc;
  };

  PolarProblem problem{&u, R, s * p.p_minus(), {}, std::nullopt};
  const PolarResult r = polar_double_integral(problem, inner, q);
  if (!std::isfinite(r.outer.value)) throw DivergenceError("frac_seminorm", "fractional modular is not finite");
  out.value = r.outer.value;
  out.error_estimate = r.outer.error + q.rel_tol * std::abs(r.outer.value);
  out.node_count = r.outer.evaluations + r.inner_evaluations;
  out.truncation_radius = R;
  return out;
}

NormResult frac_seminorm(const ScalarField& u, double s, const PairExponent& p, const QuadratureSpec& q) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order s must lie in (0, 1)");
  if (u.is_zero()) return {};
  const ModularValue at_one = frac_modular(u, s, p, 1.0, q);
  if (at_one.value == 0.0) return {};
  NormResult out;
  if (p.is_constant()) {
    out = bisect_unit_level(scaled_from(at_one, p.p_minus()), "frac_seminorm");
  } else {
    out = bisect_unit_level([&](double lambda) { return frac_modular(u, s, p, lambda, q); }, "frac_seminorm");
  }
  out.node_count += at_one.node_count;
  return out;
}

FractionalSpaceNorm fractional_space_norm(const ScalarField& u, const ExponentField& q_exp, double s,
                                          const PairExponent& p, const QuadratureSpec& q) {
  FractionalSpaceNorm out;
  out.lq_norm = luxemburg_norm(u, q_exp, {}, q).norm;
  out.seminorm = frac_seminorm(u, s, p, q).norm;
  out.total = out.lq_norm + out.seminorm;
  return out;
}

}  // namespace vexs
