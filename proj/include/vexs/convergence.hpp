#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vexs/exponents.hpp"
#include "vexs/fields.hpp"
#include "vexs/fit.hpp"
#include "vexs/nonlocal.hpp"
#include "vexs/quadrature_spec.hpp"

namespace vexs {

enum class SweepKind { nguyen_unit, nguyen_weighted, eps_small_jump, eps_full, bbm };

std::string_view to_string(SweepKind k) noexcept;
std::optional<SweepKind> sweep_kind_from_string(std::string_view name);
// "delta", "epsilon" or "s".
std::string_view parameter_name(SweepKind k) noexcept;

struct SweepReport {
  SweepKind kind = SweepKind::nguyen_unit;
  std::string parameter_name;
  std::vector<double> grid;
  std::vector<FunctionalValue> values;
  double target = 0.0;
  double extrapolated = 0.0;
  double fit_exponent = 0.0;
  // c of v0 + c t^beta, and the number of trailing points fitted.
  double fit_coefficient = 0.0;
  int fit_points = 0;
  // The fit failed or gave beta <= 0; extrapolated is then the last value.
  bool flagged = false;
  std::string flag_reason;
  // |value - target| / target, or |value - target| when the target is 0.
  std::vector<double> deviations;
};

// Evaluates the functional at each grid point (in parallel), the matching
// local-energy target, and the power-law extrapolation through the last
// three points in t = delta, eps or 1 - s. bbm requires a constant p.
SweepReport run_sweep(SweepKind kind, const ScalarField& u, const ExponentField& p, std::span<const double> grid,
                      const QuadratureSpec& q = {});

double sup_over_grid(const SweepReport& report);

// Default grids: geometric with ratio 1/2 from `start` (t-values for bbm,
// returned as s = 1 - t).
std::vector<double> default_grid(SweepKind kind, double start, int count);

}  // namespace vexs
