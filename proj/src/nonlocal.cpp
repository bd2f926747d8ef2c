#include "vexs/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vexs/errors.hpp"
#include "vexs/maximal.hpp"
#include "vexs/polar.hpp"
#include "vexs/sphere.hpp"
#include "vexs/vex_spaces.hpp"

namespace vexs {

std::string_view to_string(WeightMode m) noexcept { return m == WeightMode::unit ? "unit" : "p_of_x"; }

std::string_view to_string(EpsMode m) noexcept {
  switch (m) {
    case EpsMode::full:
      return "full";
    case EpsMode::small_jump:
      return "small_jump";
    case EpsMode::large_jump_tail:
      return "large_jump_tail";
  }
  return "full";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dims(const ScalarField& u, const ExponentField& p) {
  if (u.dimension() != p.dimension()) throw DomainError("field and exponent dimensions differ");
}

double ray_end(const Ray& ray, const QuadratureSpec& q) {
  return q.h_max ? std::min(ray.h_exit, *q.h_max) : ray.h_exit;
}

// Splits [ha, hb] at the given roots and keeps the pieces whose midpoint
// satisfies `keep`, merging neighbours.
std::vector<std::pair<double, double>> select_pieces(double ha, double hb, const std::vector<double>& roots,
                                                     const std::function<bool(double)>& keep) {
  std::vector<std::pair<double, double>> out;
  if (!(hb > ha)) return out;
  const auto pts = quad::breakpoints_within(ha, hb, roots);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!keep(0.5 * (pts[i] + pts[i + 1]))) continue;
    if (!out.empty() && out.back().second == pts[i])
      out.back().second = pts[i + 1];
    else
      out.emplace_back(pts[i], pts[i + 1]);
  }
  return out;
}

SuperlevelSet superlevel_on_ray(const ScalarField& u, const Ray& ray, double delta, const QuadratureSpec& q) {
  SuperlevelSet out;
  const int n = u.dimension();
  double ha = ray.h_enter;
  if (auto lip = u.lipschitz_bound(); lip && *lip > 0.0) ha = std::max(ha, delta / *lip);
  const double hb = ray_end(ray, q);
  if (hb > ha) {
    auto g = [&](double h) { return ray.delta(u, h); };
    const auto roots = level_roots(g, ha, hb, ray.h_splits, delta, n == 1, q.h_bracket_grid, out.evaluations);
    out.intervals = select_pieces(ha, hb, roots, [&](double h) {
      ++out.evaluations;
      return std::abs(g(h)) > delta;
    });
  }
  out.unbounded = ray.x_inside && std::abs(ray.u0) > delta;
  if (out.unbounded) {
    const double from = std::max(hb, ha);
    if (!out.intervals.empty() && out.intervals.back().second >= from)
      out.intervals.back().second = kInf;
    else
      out.intervals.emplace_back(from, kInf);
  }
  return out;
}

// Breakpoints of the outer x-integral for thresholded integrands at `level`.
std::vector<double> threshold_breaks(const ScalarField& u, double R, double level, const QuadratureSpec& q) {
  std::vector<double> out = level_crossing_breaks(u, R, level, q);
  const double top = u.sup_bound() - level;
  if (top > 0.0 && top != level) {
    const auto more = level_crossing_breaks(u, R, top, q);
    out.insert(out.end(), more.begin(), more.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExponentField unit_square_exponent(int n) { return ExponentField::constant(n, 2.0); }

FunctionalValue from_polar(const PolarResult& r, double R, const char* operation) {
  if (!std::isfinite(r.outer.value)) throw DivergenceError(operation, "double integral is not finite");
  FunctionalValue out;
  out.value = r.outer.value;
  out.error_estimate = r.outer.error;
  out.truncation_radius = R;
  out.node_count = r.outer.evaluations + r.inner_evaluations;
  out.converged = r.outer.converged && r.inner_converged;
  return out;
}

// delta^p sum (a^-p - b^-p) / p over the superlevel intervals.
double threshold_ray_value(const SuperlevelSet& set, double delta, double px, double scale) {
  double s = 0.0;
  for (const auto& [a, b] : set.intervals) {
    if (!(a > 0.0)) throw DivergenceError("nguyen", "superlevel set reaches h = 0");
    s += std::pow(a, -px) - (std::isinf(b) ? 0.0 : std::pow(b, -px));
  }
  return scale * std::pow(delta, px) * s / px;
}

}  // namespace

SuperlevelSet superlevel_along_ray(const ScalarField& u, const Point& x, const Point& omega, double delta,
                                   const QuadratureSpec& q) {
  if (!(delta > 0.0)) throw DomainError("threshold delta must be positive");
  if (x.dim() != u.dimension() || omega.dim() != u.dimension()) throw DomainError("point dimension mismatch");
  q.validate();
  const double R = polar_core_radius(u, unit_square_exponent(u.dimension()), q);
  const auto cps = u.dimension() == 1 ? u.critical_points() : std::vector<double>{};
  Ray ray;
  if (!make_ray(u, R, cps, x, omega, ray)) return {};
  return superlevel_on_ray(u, ray, delta, q);
}

FunctionalValue nguyen_functional(const ScalarField& u, const ExponentField& p, double delta, WeightMode mode,
                                  const QuadratureSpec& q) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("threshold delta must be positive and finite");
  check_dims(u, p);
  q.validate();
  FunctionalValue out;
  if (u.is_zero() || delta >= u.oscillation_bound()) {
    out.empty_superlevel = true;
    return out;
  }
  const double R = polar_core_radius(u, p, q);
  RayIntegral inner = [&](const Ray& ray) {
    const SuperlevelSet set = superlevel_on_ray(u, ray, delta, q);
    const double px = p(ray.x);
    quad::Result r;
    r.value = threshold_ray_value(set, delta, px, mode == WeightMode::p_of_x ? px : 1.0);
    r.evaluations = set.evaluations;
    return r;
  };
  PolarProblem problem{&u, R, p.p_minus(), threshold_breaks(u, R, delta, q), std::nullopt};
  return from_polar(polar_double_integral(problem, inner, q), R, "nguyen");
}

FunctionalValue local_energy(const ScalarField& u, const ExponentField& p, WeightMode mode, const QuadratureSpec& q) {
  check_dims(u, p);
  const int n = u.dimension();
  ModularOptions opt;
  opt.part = FieldPart::gradient_norm;
  opt.weight = [&, n](const Point& x) {
    const double px = p(x);
    return k_np(n, px) * (mode == WeightMode::p_of_x ? px : 1.0);
  };
  const ModularValue m = modular(u, p, opt, q);
  FunctionalValue out;
  out.value = m.value;
  out.error_estimate = m.error_estimate;
  out.truncation_radius = m.truncation_radius;
  out.node_count = m.node_count;
  return out;
}

FunctionalValue eps_functional(const ScalarField& u, const ExponentField& p, double eps, EpsMode mode,
                               const QuadratureSpec& q) {
  if (mode == EpsMode::large_jump_tail) return nguyen_functional(u, p, 1.0, WeightMode::unit, q);
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive and finite");
  check_dims(u, p);
  q.validate();
  FunctionalValue out;
  if (u.is_zero() || std::holds_alternative<ConstantField>(u.family())) return out;
  const bool small = mode == EpsMode::small_jump;
  const double R = polar_core_radius(u, p, q);
  const int n = u.dimension();
  const quad::Options iopt = q.inner_options();

  RayIntegral inner = [&](const Ray& ray) {
    const double px = p(ray.x);
    const double e = px + eps;
    auto f = [&](double h) {
      const double d = std::abs(ray.delta(u, h));
      if (d == 0.0) return 0.0;
      return eps * std::pow(d, e) * std::pow(h, -px - 1.0);
    };
    // eps |slope|^{p+eps} h^{eps-1} on the Taylor range.
    auto head = [&](double h0) {
      const double a = std::abs(ray.slope);
      if (a == 0.0 || (small && a * h0 > 1.0)) return 0.0;
      return std::pow(a, e) * std::pow(h0, eps);
    };
    const double hb = ray_end(ray, q);
    quad::Result acc;
    if (hb > ray.h_enter) {
      std::vector<double> cuts = ray.h_splits;
      if (small) {
        auto g = [&](double h) { return ray.delta(u, h); };
        const auto roots = level_roots(g, ray.h_enter, hb, ray.h_splits, 1.0, n == 1, q.h_bracket_grid, acc.evaluations);
        cuts.insert(cuts.end(), roots.begin(), roots.end());
      }
      const auto pts = quad::breakpoints_within(ray.h_enter, hb, cuts);
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (small && !(std::abs(ray.delta(u, 0.5 * (pts[i] + pts[i + 1]))) <= 1.0)) continue;
        if (i == 0 && ray.x_inside)
          acc += integrate_ray_head(f, ray, pts[1], eps - 1.0, head, iopt);
        else
          acc += quad::integrate(f, pts[i], pts[i + 1], iopt);
      }
    }
    const double a = std::abs(ray.u0);
    if (ray.x_inside && a != 0.0 && (!small || a <= 1.0)) acc.value += eps * std::pow(a, e) * std::pow(hb, -px) / px;
    return acc;
  };

  PolarProblem problem{&u, R, p.p_minus(), small ? threshold_breaks(u, R, 1.0, q) : std::vector<double>{}, std::nullopt};
  return from_polar(polar_double_integral(problem, inner, q), R, "eps");
}

FunctionalValue bbm_functional(const ScalarField& u, double p, double s, const QuadratureSpec& q) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("BBM exponent p must exceed 1");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("BBM order s must lie in (0, 1)");
  ModularValue m;
  try {
    m = frac_modular(u, s, PairExponent(ExponentField::constant(u.dimension(), p)), 1.0, q);
  } catch (const DivergenceError& e) {
    throw DivergenceError("bbm", e.what());
  }
  FunctionalValue out;
  out.value = (1.0 - s) * m.value;
  out.error_estimate = (1.0 - s) * m.error_estimate;
  out.truncation_radius = m.truncation_radius;
  out.node_count = m.node_count;
  return out;
}

UniformBound uniform_bound_check(const ScalarField& u, const ExponentField& p, std::span<const double> delta_grid,
                                 const QuadratureSpec& q) {
  UniformBound out;
  for (double d : delta_grid) {
    out.deltas.push_back(d);
    out.values.push_back(nguyen_functional(u, p, d, WeightMode::unit, q).value);
    out.sup_value = std::max(out.sup_value, out.values.back());
  }
  const int n = u.dimension();
  ModularOptions grad;
  grad.part = FieldPart::gradient_norm;
  out.rhs_bound = modular(u, ExponentField::constant(n, p.p_plus()), grad, q).value +
                  modular(u, ExponentField::constant(n, p.p_minus()), grad, q).value;
  return out;
}

KeyInequality key_inequality_check(const ScalarField& u, const ExponentField& p, double delta, const Point& omega,
                                   const QuadratureSpec& q, int maximal_depth) {
  if (u.dimension() != 1) throw UnsupportedError("the directional key inequality is implemented for n = 1");
  if (!(delta > 0.0)) throw DomainError("threshold delta must be positive");
  if (omega.dim() != 1 || std::abs(std::abs(omega[0]) - 1.0) > 1e-12) throw DomainError("omega must be +1 or -1");
  check_dims(u, p);
  q.validate();
  KeyInequality out;
  if (u.is_zero() || std::holds_alternative<ConstantField>(u.family())) return out;
  const double R = polar_core_radius(u, p, q);

  if (delta < u.oscillation_bound()) {
    RayIntegral inner = [&](const Ray& ray) {
      const SuperlevelSet set = superlevel_on_ray(u, ray, delta, q);
      quad::Result r;
      r.value = threshold_ray_value(set, delta, p(ray.x), 1.0);
      r.evaluations = set.evaluations;
      return r;
    };
    PolarProblem problem{&u, R, p.p_minus(), threshold_breaks(u, R, delta, q), omega};
    out.lhs = from_polar(polar_double_integral(problem, inner, q), R, "keyineq").value;
  }

  if (!(p.p_minus() > 1.0))
    throw DivergenceError("keyineq", "directional maximal modular diverges for p- <= 1");
  const auto cps = u.critical_points();
  MaximalSearch search;
  search.depth = maximal_depth;
  auto grad = [&](const Point& y) { return u.gradient(y).norm(); };
  auto integrand = [&](double x) {
    const auto m = directional_maximal_of(grad, Point{x}, omega, std::abs(x) + R + 1.0, search, cps, q);
    return std::pow(m.value, p(Point{x}));
  };
  const quad::Options opt = q.outer_options();
  const auto pts = quad::breakpoints_within(-R, R, cps);
  quad::Result rhs = quad::integrate(integrand, std::span<const double>(pts), opt);
  quad::Options topt = opt;
  topt.abs_tol = 1e-2 * opt.rel_tol * std::abs(rhs.value);
  const double gamma = p.p_minus() - 1.0;
  rhs += quad::integrate_power_tail(integrand, R, gamma, topt);
  rhs += quad::integrate_power_tail([&](double x) { return integrand(-x); }, R, gamma, topt);
  if (!std::isfinite(rhs.value)) throw DivergenceError("keyineq", "directional maximal modular is not finite");
  out.rhs = rhs.value / p.p_minus();
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-8);
  return out;
}

LuxnormBound luxnorm_bound(const ScalarField& u, const ExponentField& p, double eps, const QuadratureSpec& q) {
  check_dims(u, p);
  const int n = u.dimension();
  LuxnormBound out;
  Weight w = [&, n](const Point& x) {
    const double px = p(x);
    return px * k_np(n, px);
  };
  out.weighted_gradient_norm = luxemburg_norm(u, p, w, q, FieldPart::gradient_norm).norm;
  out.eps_functional = eps_functional(u, p, eps, EpsMode::full, q).value;
  out.rhs = std::max(std::pow(out.eps_functional, 1.0 / p.p_minus()), std::pow(out.eps_functional, 1.0 / p.p_plus()));
  return out;
}

// ---- layer cake ----

PairFunction PairFunction::field_diff(ScalarField u) {
  if (u.dimension() != 1) throw DomainError("pair functions are one-dimensional");
  PairFunction f;
  f.kind = Kind::field_diff;
  f.field = std::move(u);
  return f;
}

double PairFunction::operator()(double x, double y) const {
  switch (kind) {
    case Kind::constant:
      return c0;
    case Kind::abs_diff:
      return c0 * std::abs(x - y);
    case Kind::sine:
      return c0 * (1.0 + std::sin(k1 * x + k2 * y + theta));
    case Kind::exp_linear:
      return c0 * std::exp(k1 * x + k2 * y);
    case Kind::field_diff:
      return std::abs((*field)(Point{x}) - (*field)(Point{y}));
  }
  return 0.0;
}

std::vector<double> PairFunction::monotone_splits(double x, double a, double b) const {
  std::vector<double> out;
  switch (kind) {
    case Kind::constant:
    case Kind::exp_linear:
      break;
    case Kind::abs_diff:
      out.push_back(x);
      break;
    case Kind::sine: {
      if (k2 == 0.0) break;
      // Extrema where k1 x + k2 y + theta = pi/2 + m pi.
      const double pi = std::numbers::pi;
      const double lo = std::min(k1 * x + k2 * a + theta, k1 * x + k2 * b + theta);
      const double hi = std::max(k1 * x + k2 * a + theta, k1 * x + k2 * b + theta);
      for (double m = std::ceil((lo - pi / 2) / pi); pi / 2 + m * pi <= hi; m += 1.0)
        out.push_back((pi / 2 + m * pi - k1 * x - theta) / k2);
      break;
    }
    case Kind::field_diff: {
      const ScalarField& u = *field;
      out = u.critical_points();
      const double ux = u(Point{x});
      std::size_t evals = 0;
      const auto roots = level_roots([&](double y) { return u(Point{y}) - ux; }, a, b, out, 0.0, true, 0, evals);
      out.insert(out.end(), roots.begin(), roots.end());
      break;
    }
  }
  std::vector<double> inside;
  for (double s : out)
    if (s > a && s < b) inside.push_back(s);
  std::sort(inside.begin(), inside.end());
  inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
  return inside;
}

LayerCakeResult layer_cake_check(const PairFunction& phi, const PairFunction& psi, const ShiftedExponent& alpha,
                                 double a, double b, const QuadratureSpec& q) {
  if (!(b > a)) throw DomainError("layer cake needs a < b");
  if (alpha.base.dimension() != 1) throw DomainError("layer cake exponent must be one-dimensional");
  if (!(alpha.minimum() > -1.0)) throw DomainError("layer cake exponent must stay above -1");
  q.validate();
  LayerCakeResult out;
  const quad::Options xopt{1e-15, 1e-10, q.max_intervals};
  const quad::Options dopt{1e-15, 1e-11, q.max_intervals};
  const quad::Options yopt{1e-16, 1e-12, q.max_intervals};

  auto y_pieces = [&](double x, double level, std::vector<double>& cuts) {
    const auto phi_splits = phi.monotone_splits(x, a, b);
    const auto psi_splits = psi.monotone_splits(x, a, b);
    std::size_t evals = 0;
    const auto roots = level_roots([&](double y) { return phi(x, y); }, a, b, phi_splits, level, true, 0, evals);
    out.node_count += evals;
    cuts = phi_splits;
    cuts.insert(cuts.end(), psi_splits.begin(), psi_splits.end());
    cuts.insert(cuts.end(), roots.begin(), roots.end());
    return quad::breakpoints_within(a, b, cuts);
  };

  // lhs: x outermost, then delta, then the thresholded y-integral.
  auto lhs_x = [&](double x) {
    const double ax = alpha(x);
    std::vector<double> cuts;
    const auto phi_splits = phi.monotone_splits(x, a, b);
    std::vector<double> dbreaks;
    for (double y : phi_splits) dbreaks.push_back(phi(x, y));
    dbreaks.push_back(phi(x, a));
    dbreaks.push_back(phi(x, b));
    auto s_of_delta = [&](double d) {
      const auto pts = y_pieces(x, d, cuts);
      double s = 0.0;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(phi(x, 0.5 * (pts[i] + pts[i + 1])) > d)) continue;
        const auto r = quad::integrate([&](double y) { return psi(x, y); }, pts[i], pts[i + 1], yopt);
        out.node_count += r.evaluations;
        s += r.value;
      }
      return std::pow(d, ax) * s;
    };
    const auto dpts = quad::breakpoints_within(0.0, 1.0, dbreaks);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < dpts.size(); ++i) {
      const auto r = i == 0 ? quad::integrate_left_singular(s_of_delta, dpts[0], dpts[1], std::min(ax, 0.0), dopt)
                            : quad::integrate(s_of_delta, dpts[i], dpts[i + 1], dopt);
      out.node_count += r.evaluations;
      total += r.value;
    }
    return total;
  };
  const auto lx = quad::integrate(lhs_x, a, b, xopt);
  out.lhs = lx.value;

  auto rhs_x = [&](double x, bool small) {
    const double ax = alpha(x);
    std::vector<double> cuts;
    const auto pts = y_pieces(x, 1.0, cuts);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const bool is_small = phi(x, 0.5 * (pts[i] + pts[i + 1])) <= 1.0;
      if (is_small != small) continue;
      const auto r = quad::integrate(
          [&](double y) {
            const double w = psi(x, y) / (ax + 1.0);
            return small ? std::pow(phi(x, y), ax + 1.0) * w : w;
          },
          pts[i], pts[i + 1], yopt);
      out.node_count += r.evaluations;
      s += r.value;
    }
    return s;
  };
  out.rhs_small = quad::integrate([&](double x) { return rhs_x(x, true); }, a, b, xopt).value;
  out.rhs_large = quad::integrate([&](double x) { return rhs_x(x, false); }, a, b, xopt).value;
  const double rhs = out.rhs_small + out.rhs_large;
  out.residual = std::abs(out.lhs - rhs) / std::max(1.0, std::abs(rhs));
  return out;
}

}  // namespace vexs
