#include "vexs/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "vexs/errors.hpp"

namespace vexs {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double misfit = std::numeric_limits<double>::infinity();
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  if (!(sxx > 0.0)) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double ss_res = std::max(0.0, syy - f.slope * sxy);
  f.misfit = syy > 0.0 ? ss_res / syy : 0.0;
  return f;
}

}  // namespace

double loglog_slope(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size() || t.size() < 2) throw DomainError("log-log slope needs >= 2 matching points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(v[i] > 0.0)) throw DomainError("log-log slope needs positive data");
    lx.push_back(std::log(t[i]));
    ly.push_back(std::log(v[i]));
  }
  return fit_line(lx, ly).slope;
}

PowerFit fit_power_law(std::span<const double> t, std::span<const double> v, double anchor, double side) {
  PowerFit out;
  const std::size_t n = t.size();
  if (n != v.size() || n < 3) return out;
  std::vector<double> lt(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(t[i] > 0.0) || !std::isfinite(v[i])) return out;
    lt[i] = std::log(t[i]);
  }
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double spread = *hi - *lo;
  if (!(spread > 0.0)) return out;
  const double sgn = side >= 0.0 ? 1.0 : -1.0;
  // The offset must clear every sample.
  const double base = sgn > 0.0 ? std::max(anchor, *hi) : std::min(anchor, *lo);

  std::vector<double> ly(n);
  auto evaluate = [&](double log_d) {
    const double v0 = base + sgn * spread * std::exp(log_d);
    for (std::size_t i = 0; i < n; ++i) ly[i] = std::log(std::abs(v[i] - v0));
    return fit_line(lt, ly);
  };

  const double a = std::log(1e-12), b = std::log(1e6);
  constexpr int scan = 600;
  int best = 0;
  double best_misfit = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= scan; ++i) {
    const double m = evaluate(a + (b - a) * i / scan).misfit;
    if (m < best_misfit) {
      best_misfit = m;
      best = i;
    }
  }
  double l = a + (b - a) * std::max(0, best - 1) / scan;
  double r = a + (b - a) * std::min(scan, best + 1) / scan;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c1 = r - g * (r - l), c2 = l + g * (r - l);
  double f1 = evaluate(c1).misfit, f2 = evaluate(c2).misfit;
  for (int it = 0; it < 80; ++it) {
    if (f1 <= f2) {
      r = c2;
      c2 = c1;
      f2 = f1;
      c1 = r - g * (r - l);
      f1 = evaluate(c1).misfit;
    } else {
      l = c1;
      c1 = c2;
      f1 = f2;
      c2 = l + g * (r - l);
      f2 = evaluate(c2).misfit;
    }
  }
  const double log_d = f1 <= f2 ? c1 : c2;
  const LineFit fit = evaluate(log_d);
  out.v0 = base + sgn * spread * std::exp(log_d);
  out.beta = fit.slope;
  out.c = -sgn * std::exp(fit.intercept);
  out.misfit = fit.misfit;
  // A minimiser on the edge of the search range means no finite offset fits.
  out.ok = std::isfinite(fit.misfit) && best > 0 && best < scan;
  return out;
}

}  // namespace vexs
