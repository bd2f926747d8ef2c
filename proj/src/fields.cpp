#include "vexs/fields.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "vexs/errors.hpp"
#include "vexs/quadrature.hpp"

namespace vexs {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double sphere_measure(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    default: return 4.0 * std::numbers::pi;
  }
}

// max_r |d/dr exp(-1/(1-r^2))| on (0,1), by a dense scan with a small margin.
double bump_slope_bound() {
  static const double bound = [] {
    double best = 0.0;
    constexpr int n = 200000;
    for (int i = 1; i < n; ++i) {
      const double r = static_cast<double>(i) / n;
      const double t = 1.0 - r * r;
      best = std::max(best, 2.0 * r / (t * t) * std::exp(-1.0 / t));
    }
    return best * (1.0 + 1e-3);
  }();
  return bound;
}

}  // namespace

ScalarField::ScalarField(int dim, FieldFamily family) : dim_(dim), family_(std::move(family)) {
  if (dim_ < 1 || dim_ > kMaxDimension) throw DomainError("field dimension must be in 1..3");
}

ScalarField ScalarField::gaussian(int dim, double sigma, Point center) {
  if (!(sigma > 0.0)) throw DomainError("gaussian sigma must be positive");
  if (center.dim() != dim) throw DomainError("gaussian center has the wrong dimension");
  return ScalarField(dim, GaussianField{center, sigma});
}
ScalarField ScalarField::gaussian(int dim, double sigma) { return gaussian(dim, sigma, Point(dim)); }
ScalarField ScalarField::tent(int dim) { return ScalarField(dim, TentField{}); }
ScalarField ScalarField::smooth_bump(int dim) { return ScalarField(dim, SmoothBumpField{}); }
ScalarField ScalarField::power_tail() { return ScalarField(1, PowerTailField{}); }

ScalarField ScalarField::log_singular(int dim, double window) {
  if (!(window > 0.0)) throw DomainError("log-singular window must be positive");
  return ScalarField(dim, LogSingularField{window});
}

ScalarField ScalarField::sampled_table(std::vector<double> x, std::vector<double> u) {
  if (x.size() < 2 || x.size() != u.size()) throw DomainError("sampled table needs >= 2 matching samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(u[i])) throw DomainError("sampled table values must be finite");
    if (i > 0 && !(x[i] > x[i - 1])) throw DomainError("sampled table x must be strictly increasing");
  }
  return ScalarField(1, SampledTableField{std::move(x), std::move(u)});
}

ScalarField ScalarField::sampled_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sampled-table CSV: " + path);
  std::vector<double> xs, us;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x = 0, u = 0;
    if (!(row >> x >> u)) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("malformed sampled-table CSV row: " + line);
    }
    first = false;
    xs.push_back(x);
    us.push_back(u);
  }
  try {
    return sampled_table(std::move(xs), std::move(us));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("sampled-table CSV ") + path + ": " + e.what());
  }
}

ScalarField ScalarField::constant(int dim, double value) { return ScalarField(dim, ConstantField{value}); }

ScalarField ScalarField::scaled(double factor) const {
  ScalarField copy = *this;
  copy.amplitude_ *= factor;
  return copy;
}

ScalarField ScalarField::with_gradient(GradientKind kind) const {
  ScalarField copy = *this;
  copy.gradient_kind_ = kind;
  return copy;
}

std::string_view ScalarField::family_name() const noexcept {
  return std::visit(Overloaded{
                        [](const GaussianField&) { return std::string_view("gaussian"); },
                        [](const TentField&) { return std::string_view("tent"); },
                        [](const SmoothBumpField&) { return std::string_view("smooth-bump"); },
                        [](const PowerTailField&) { return std::string_view("power-tail"); },
                        [](const LogSingularField&) { return std::string_view("log-singular"); },
                        [](const SampledTableField&) { return std::string_view("sampled-table"); },
                        [](const ConstantField&) { return std::string_view("constant"); },
                    },
                    family_);
}

double ScalarField::raw(const Point& x) const {
  return std::visit(Overloaded{
                        [&](const GaussianField& g) {
                          return std::exp(-(x - g.center).norm_squared() / (g.sigma * g.sigma));
                        },
                        [&](const TentField&) { return std::max(0.0, 1.0 - x.norm()); },
                        [&](const SmoothBumpField&) {
                          const double r2 = x.norm_squared();
                          return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
                        },
                        [&](const PowerTailField&) { return x[0] >= 2.0 ? std::cbrt(1.0 / x[0]) : 0.0; },
                        [&](const LogSingularField& l) {
                          const double r = x.norm();
                          if (r == 0.0) throw DomainError("log-singular field evaluated at its singular point");
                          return r <= l.window ? std::log(r) : 0.0;
                        },
                        [&](const SampledTableField& t) {
                          const double xv = x[0];
                          if (xv < t.x.front() || xv > t.x.back()) return 0.0;
                          auto it = std::upper_bound(t.x.begin(), t.x.end(), xv);
                          if (it == t.x.end()) return t.u.back();
                          const auto i = static_cast<std::size_t>(it - t.x.begin());
                          const double w = (xv - t.x[i - 1]) / (t.x[i] - t.x[i - 1]);
                          return t.u[i - 1] + w * (t.u[i] - t.u[i - 1]);
                        },
                        [](const ConstantField& c) { return c.value; },
                    },
                    family_);
}

double ScalarField::operator()(const Point& x) const {
  if (x.dim() != dim_) throw DomainError("field evaluated at a point of the wrong dimension");
  if (!x.is_finite()) throw DomainError("field evaluated at a non-finite point");
  return amplitude_ * raw(x);
}

Point ScalarField::analytic_gradient(const Point& x) const {
  Point g(dim_);
  std::visit(Overloaded{
                 [&](const GaussianField& gf) {
                   const Point d = x - gf.center;
                   const double s2 = gf.sigma * gf.sigma;
                   g = d * (-2.0 / s2 * std::exp(-d.norm_squared() / s2));
                 },
                 [&](const TentField&) {
                   // Interior branch on |x| = 1; zero at the apex.
                   const double r = x.norm();
                   if (r > 0.0 && r <= 1.0) g = x * (-1.0 / r);
                 },
                 [&](const SmoothBumpField&) {
                   const double r2 = x.norm_squared();
                   if (r2 < 1.0) {
                     const double t = 1.0 - r2;
                     g = x * (-2.0 / (t * t) * std::exp(-1.0 / t));
                   }
                 },
                 [&](const PowerTailField&) {
                   if (x[0] >= 2.0) g[0] = -std::cbrt(1.0 / x[0]) / (3.0 * x[0]);
                 },
                 [&](const LogSingularField& l) {
                   const double r2 = x.norm_squared();
                   if (r2 == 0.0) throw DomainError("log-singular gradient evaluated at its singular point");
                   if (std::sqrt(r2) <= l.window) g = x * (1.0 / r2);
                 },
                 [&](const SampledTableField& t) {
                   const double xv = x[0];
                   if (xv < t.x.front() || xv > t.x.back()) return;
                   auto it = std::upper_bound(t.x.begin(), t.x.end(), xv);
                   if (it == t.x.end()) --it;
                   const auto i = static_cast<std::size_t>(it - t.x.begin());
                   g[0] = (t.u[i] - t.u[i - 1]) / (t.x[i] - t.x[i - 1]);
                 },
                 [](const ConstantField&) {},
             },
             family_);
  return g * amplitude_;
}

Point ScalarField::finite_difference_gradient(const Point& x) const {
  const double h = 1e-5 * std::max(1.0, x.norm());
  Point g(dim_);
  for (int i = 0; i < dim_; ++i) {
    Point xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = ((*this)(xp) - (*this)(xm)) / (2.0 * h);
  }
  return g;
}

Point ScalarField::gradient(const Point& x) const {
  if (x.dim() != dim_) throw DomainError("gradient evaluated at a point of the wrong dimension");
  if (!x.is_finite()) throw DomainError("gradient evaluated at a non-finite point");
  return gradient_kind_ == GradientKind::analytic ? analytic_gradient(x) : finite_difference_gradient(x);
}

std::optional<double> ScalarField::lipschitz_bound() const {
  const double a = std::abs(amplitude_);
  return std::visit(Overloaded{
                        [&](const GaussianField& g) -> std::optional<double> {
                          return a * std::numbers::sqrt2 * std::exp(-0.5) / g.sigma;
                        },
                        [&](const TentField&) -> std::optional<double> { return a; },
                        [&](const SmoothBumpField&) -> std::optional<double> { return a * bump_slope_bound(); },
                        [](const PowerTailField&) -> std::optional<double> { return std::nullopt; },
                        [](const LogSingularField&) -> std::optional<double> { return std::nullopt; },
                        [&](const SampledTableField& t) -> std::optional<double> {
                          if (t.u.front() != 0.0 || t.u.back() != 0.0) return std::nullopt;
                          double s = 0.0;
                          for (std::size_t i = 1; i < t.x.size(); ++i)
                            s = std::max(s, std::abs((t.u[i] - t.u[i - 1]) / (t.x[i] - t.x[i - 1])));
                          return a * s;
                        },
                        [](const ConstantField&) -> std::optional<double> { return 0.0; },
                    },
                    family_);
}

double ScalarField::sup_bound() const {
  const double a = std::abs(amplitude_);
  return std::visit(Overloaded{
                        [&](const GaussianField&) { return a; },
                        [&](const TentField&) { return a; },
                        [&](const SmoothBumpField&) { return a * std::exp(-1.0); },
                        [&](const PowerTailField&) { return a * std::cbrt(0.5); },
                        [&](const LogSingularField&) { return a == 0.0 ? 0.0 : kInf; },
                        [&](const SampledTableField& t) {
                          double m = 0.0;
                          for (double v : t.u) m = std::max(m, std::abs(v));
                          return a * m;
                        },
                        [&](const ConstantField& c) { return a * std::abs(c.value); },
                    },
                    family_);
}

double ScalarField::oscillation_bound() const {
  const double a = std::abs(amplitude_);
  return std::visit(Overloaded{
                        [&](const SampledTableField& t) {
                          auto [lo, hi] = std::minmax_element(t.u.begin(), t.u.end());
                          return a * (std::max(*hi, 0.0) - std::min(*lo, 0.0));
                        },
                        [](const ConstantField&) { return 0.0; },
                        [&](const LogSingularField&) { return a == 0.0 ? 0.0 : kInf; },
                        [&](const auto&) { return sup_bound(); },
                    },
                    family_);
}

double ScalarField::tail_bound(double radius) const {
  const double a = std::abs(amplitude_);
  return std::visit(Overloaded{
                        [&](const GaussianField& g) {
                          const double c = g.center.norm();
                          if (radius <= c) return a;
                          const double d = (radius - c) / g.sigma;
                          return a * std::exp(-d * d);
                        },
                        [&](const TentField&) { return radius >= 1.0 ? 0.0 : a * (1.0 - std::max(radius, 0.0)); },
                        [&](const SmoothBumpField&) {
                          if (radius >= 1.0) return 0.0;
                          const double r = std::max(radius, 0.0);
                          return a * std::exp(-1.0 / (1.0 - r * r));
                        },
                        [&](const PowerTailField&) { return a * std::cbrt(1.0 / std::max(radius, 2.0)); },
                        [&](const LogSingularField& l) {
                          if (a == 0.0 || radius > l.window) return 0.0;
                          if (radius <= 0.0) return kInf;
                          return a * std::max(std::abs(std::log(radius)), std::abs(std::log(l.window)));
                        },
                        [&](const SampledTableField& t) {
                          return radius > std::max(std::abs(t.x.front()), std::abs(t.x.back())) ? 0.0 : sup_bound();
                        },
                        [&](const ConstantField& c) { return a * std::abs(c.value); },
                    },
                    family_);
}

std::optional<double> ScalarField::support_radius() const {
  if (is_zero()) return 0.0;
  return std::visit(Overloaded{
                        [](const TentField&) -> std::optional<double> { return 1.0; },
                        [](const SmoothBumpField&) -> std::optional<double> { return 1.0; },
                        [](const SampledTableField& t) -> std::optional<double> {
                          return std::max(std::abs(t.x.front()), std::abs(t.x.back()));
                        },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    family_);
}

bool ScalarField::is_decaying() const {
  if (is_zero()) return true;
  return std::visit(Overloaded{
                        [](const LogSingularField&) { return false; },
                        [](const ConstantField&) { return false; },
                        [](const auto&) { return true; },
                    },
                    family_);
}

bool ScalarField::is_zero() const noexcept {
  if (amplitude_ == 0.0) return true;
  if (const auto* c = std::get_if<ConstantField>(&family_)) return c->value == 0.0;
  return false;
}

std::vector<double> ScalarField::critical_points() const {
  std::vector<double> pts = std::visit(Overloaded{
                                           [](const GaussianField& g) { return std::vector<double>{g.center[0]}; },
                                           [](const TentField&) { return std::vector<double>{-1.0, 0.0, 1.0}; },
                                           [](const SmoothBumpField&) { return std::vector<double>{-1.0, 0.0, 1.0}; },
                                           [](const PowerTailField&) { return std::vector<double>{2.0}; },
                                           [](const LogSingularField& l) {
                                             return std::vector<double>{-l.window, 0.0, l.window};
                                           },
                                           [](const SampledTableField& t) { return t.x; },
                                           [](const ConstantField&) { return std::vector<double>{}; },
                                       },
                                       family_);
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::vector<double> ScalarField::critical_radii() const {
  return std::visit(Overloaded{
                        [](const GaussianField& g) { return std::vector<double>{g.center.norm()}; },
                        [](const TentField&) { return std::vector<double>{1.0}; },
                        [](const SmoothBumpField&) { return std::vector<double>{1.0}; },
                        [](const LogSingularField& l) { return std::vector<double>{l.window}; },
                        [](const auto&) { return std::vector<double>{}; },
                    },
                    family_);
}

bool ScalarField::is_radial() const {
  if (const auto* g = std::get_if<GaussianField>(&family_)) return g->center.norm() == 0.0;
  return !std::holds_alternative<SampledTableField>(family_) && !std::holds_alternative<PowerTailField>(family_);
}

std::optional<Point> ScalarField::singular_point() const {
  if (std::holds_alternative<LogSingularField>(family_)) return Point(dim_);
  return std::nullopt;
}

double tail_integral_bound(const ScalarField& u, const ExponentField& p, double radius) {
  const double qs[2] = {p.p_minus(), p.p_plus()};
  const int n = u.dimension();
  const double a = std::abs(u.amplitude());
  if (u.is_zero()) return 0.0;
  if (auto supp = u.support_radius()) return radius >= *supp ? 0.0 : kInf;

  if (const auto* g = std::get_if<GaussianField>(&u.family())) {
    const double c = g->center.norm();
    const double s2 = g->sigma * g->sigma;
    if (radius < c) return kInf;
    auto majorant = [&](double r) {
      const double e = std::exp(-(r - c) * (r - c) / s2);
      const double m = a * e;
      const double gr = 2.0 * a * (r + c) / s2 * e;
      double s = 0.0;
      for (double q : qs) s += std::pow(m, q) + std::pow(gr, q);
      return std::pow(r, n - 1) * s;
    };
    const auto res = quad::integrate_semi_infinite(majorant, radius, +1, {0.0, 1e-10, 500});
    return sphere_measure(n) * res.value;
  }
  if (std::holds_alternative<PowerTailField>(u.family())) {
    const double r = std::max(radius, 2.0);
    double s = 0.0;
    for (double q : qs) {
      if (q <= 3.0) return kInf;
      s += std::pow(a, q) * std::pow(r, 1.0 - q / 3.0) / (q / 3.0 - 1.0);
      s += std::pow(a / 3.0, q) * std::pow(r, 1.0 - 4.0 * q / 3.0) / (4.0 * q / 3.0 - 1.0);
    }
    return s;
  }
  return kInf;
}

double truncation_radius(const ScalarField& u, const ExponentField& p, double tol) {
  if (!(tol > 0.0)) throw DomainError("truncation tolerance must be positive");
  if (!u.is_decaying()) throw UnsupportedError(std::string("field family '") + std::string(u.family_name()) +
                                               "' does not decay; domain truncation unsupported");
  if (auto supp = u.support_radius()) return *supp;
  double lo = 0.0;
  if (const auto* g = std::get_if<GaussianField>(&u.family())) lo = g->center.norm();
  if (std::holds_alternative<PowerTailField>(u.family())) lo = 2.0;
  double hi = lo + 1.0;
  if (!std::isfinite(tail_integral_bound(u, p, hi))) {
    throw UnsupportedError("tail integral of the field diverges for this exponent");
  }
  int guard = 0;
  while (tail_integral_bound(u, p, hi) >= tol) {
    lo = hi;
    hi = 2.0 * hi;
    if (++guard > 200) throw UnsupportedError("truncation radius search did not terminate");
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (tail_integral_bound(u, p, mid) < tol)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace vexs
