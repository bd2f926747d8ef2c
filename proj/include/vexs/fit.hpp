#pragma once

#include <span>

namespace vexs {

// v(t) ~ v0 + c t^beta.
struct PowerFit {
  double v0 = 0.0;
  double c = 0.0;
  double beta = 0.0;
  // 1 - R^2 of the log-log regression at the chosen v0.
  double misfit = 0.0;
  bool ok = false;
};

// Fits log|v_i - v0| = log|c| + beta log t_i by least squares, choosing
// v0 = anchor + side * D (D > 0, searched in log scale over
// [1e-12, 1e6] x the spread of v) to minimise the normalised misfit. The
// offset must lie beyond every v_i on the given side. t_i > 0.
PowerFit fit_power_law(std::span<const double> t, std::span<const double> v, double anchor, double side);

// Least-squares slope of log v against log t (all positive).
double loglog_slope(std::span<const double> t, std::span<const double> v);

}  // namespace vexs
