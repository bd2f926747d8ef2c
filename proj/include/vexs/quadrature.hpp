#pragma once

// Adaptive Gauss-Kronrod (7/15) integration on finite intervals, with
// breakpoints, semi-infinite ranges and integrable power singularities at a
// left endpoint. Node/weight tables come from Boost.Math; the global adaptive
// driver (largest-error-first bisection) is ours so that evaluation counts
// and refinement order are observable and deterministic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace vexs::quad {

struct Options {
  double abs_tol = 1e-14;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;

  Result& operator+=(const Result& o) noexcept {
    value += o.value;
    error += o.error;
    evaluations += o.evaluations;
    converged = converged && o.converged;
    return *this;
  }
};

namespace detail {

struct Panel {
  double a, b;
  double value, error;
  std::size_t seq;
};

struct PanelOrder {
  bool operator()(const Panel& l, const Panel& r) const noexcept {
    if (l.error != r.error) return l.error < r.error;
    return l.seq > r.seq;
  }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b, std::size_t seq) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fvals[15];
  fvals[0] = f(center);
  for (int j = 1; j < 8; ++j) {
    const double dx = half * xk[j];
    fvals[2 * j - 1] = f(center - dx);
    fvals[2 * j] = f(center + dx);
  }

  double kronrod = wk[0] * fvals[0];
  double gauss = wg[0] * fvals[0];
  double absk = std::abs(kronrod);
  for (int j = 1; j < 8; ++j) {
    const double pair = fvals[2 * j - 1] + fvals[2 * j];
    kronrod += wk[j] * pair;
    absk += wk[j] * (std::abs(fvals[2 * j - 1]) + std::abs(fvals[2 * j]));
    // Gauss-7 nodes are the even-indexed Kronrod abscissae.
    if (j % 2 == 0) gauss += wg[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = wk[0] * std::abs(fvals[0] - mean);
  for (int j = 1; j < 8; ++j)
    asc += wk[j] * (std::abs(fvals[2 * j - 1] - mean) + std::abs(fvals[2 * j] - mean));

  const double value = kronrod * half;
  double err = std::abs((kronrod - gauss) * half);
  const double resasc = asc * std::abs(half);
  const double resabs = absk * std::abs(half);
  // QUADPACK error scaling.
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
  return Panel{a, b, value, err, seq};
}

}  // namespace detail

// Integrates f over [points[0], points.back()], starting from the panels
// delimited by the (sorted) points. Panels are refined largest-error first
// until the summed error is below max(abs_tol, rel_tol*|value|).
template <class F>
Result integrate(F&& f, std::span<const double> points, const Options& opt = {}) {
  Result out;
  if (points.size() < 2) return out;

  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelOrder> queue;
  std::vector<detail::Panel> finished;
  std::size_t seq = 0;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    auto p = detail::gauss_kronrod_15(f, points[i], points[i + 1], seq++);
    out.evaluations += 15;
    total += p.value;
    total_err += p.error;
    queue.push(p);
  }

  int panels = static_cast<int>(queue.size());
  while (!queue.empty()) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (total_err <= target) break;
    if (panels >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    detail::Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    // Panel too narrow to split in double precision: freeze it.
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 64.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(std::abs(worst.a), std::abs(worst.b))) {
      finished.push_back(worst);
      if (queue.empty()) break;
      continue;
    }
    auto left = detail::gauss_kronrod_15(f, worst.a, mid, seq++);
    auto right = detail::gauss_kronrod_15(f, mid, worst.b, seq++);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  while (!queue.empty()) {
    finished.push_back(queue.top());
    queue.pop();
  }
  // Fixed summation order: left to right.
  std::sort(finished.begin(), finished.end(),
            [](const detail::Panel& l, const detail::Panel& r) { return l.a < r.a; });
  out.value = 0.0;
  out.error = 0.0;
  for (const auto& p : finished) {
    out.value += p.value;
    out.error += p.error;
  }
  if (!std::isfinite(out.value)) out.converged = false;
  return out;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
  if (a == b) return {};
  if (a > b) {
    Result r = integrate(f, b, a, opt);
    r.value = -r.value;
    return r;
  }
  const double pts[2] = {a, b};
  return integrate(f, std::span<const double>(pts, 2), opt);
}

// Sorted, de-duplicated breakpoints restricted to (a, b), with a and b added.
inline std::vector<double> breakpoints_within(double a, double b, std::span<const double> interior) {
  std::vector<double> pts;
  pts.reserve(interior.size() + 2);
  pts.push_back(a);
  for (double c : interior)
    if (c > a && c < b) pts.push_back(c);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Integral over [a, +inf) (direction > 0) or (-inf, a] (direction < 0) via
// x = a +- t/(1-t).
template <class F>
Result integrate_semi_infinite(F&& f, double a, int direction, const Options& opt = {}) {
  const double sgn = direction >= 0 ? 1.0 : -1.0;
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    if (one_minus <= 0.0) return 0.0;
    const double x = a + sgn * t / one_minus;
    const double jac = 1.0 / (one_minus * one_minus);
    const double v = f(x);
    if (v == 0.0) return 0.0;
    return v * jac;
  };
  return integrate(mapped, 0.0, 1.0, opt);
}

// Integral over [a, b] of f with f(x) ~ (x-a)^beta, beta > -1, near a. For
// beta < 0 the substitution x = a + (b-a) t^m, m = 1/(1+beta), makes the
// transformed integrand bounded at t = 0.
template <class F>
Result integrate_left_singular(F&& f, double a, double b, double beta, const Options& opt = {}) {
  if (!(b > a)) return {};
  if (beta >= 0.0) return integrate(f, a, b, opt);
  const double m = 1.0 / (1.0 + beta);
  const double len = b - a;
  auto mapped = [&](double t) {
    const double tm1 = std::pow(t, m - 1.0);
    const double x = a + len * tm1 * t;
    if (!(x > a)) return 0.0;
    const double v = f(x);
    if (v == 0.0) return 0.0;
    return v * len * m * tm1;
  };
  return integrate(mapped, 0.0, 1.0, opt);
}

// Integral over [a, b], 0 < a < b, in the variable log x; suited to
// integrands behaving like a power of x across many decades.
template <class F>
Result integrate_log_scale(F&& f, double a, double b, const Options& opt = {}) {
  if (!(b > a) || !(a > 0.0)) return {};
  auto mapped = [&](double tau) {
    const double x = std::exp(tau);
    const double v = f(x);
    if (v == 0.0) return 0.0;
    return v * x;
  };
  return integrate(mapped, std::log(a), std::log(b), opt);
}

// Integral over [a, inf) of f with f(x) ~ C x^(-1-gamma), gamma > 0, via
// x = a t^(-1/gamma), which gives a bounded integrand on (0, 1].
template <class F>
Result integrate_power_tail(F&& f, double a, double gamma, const Options& opt = {}) {
  const double m = 1.0 / gamma;
  auto mapped = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double x = a * std::pow(t, -m);
    if (!std::isfinite(x)) return 0.0;
    const double v = f(x);
    if (v == 0.0) return 0.0;
    return v * a * m * std::pow(t, -m - 1.0);
  };
  return integrate(mapped, 0.0, 1.0, opt);
}

}  // namespace vexs::quad
