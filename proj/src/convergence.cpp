#include "vexs/convergence.hpp"

#include <algorithm>
#include <cmath>

#include "vexs/errors.hpp"
#include "vexs/parallel.hpp"

namespace vexs {

std::string_view to_string(SweepKind k) noexcept {
  switch (k) {
    case SweepKind::nguyen_unit:
      return "nguyen-unit";
    case SweepKind::nguyen_weighted:
      return "nguyen-weighted";
    case SweepKind::eps_small_jump:
      return "eps-small-jump";
    case SweepKind::eps_full:
      return "eps-full";
    case SweepKind::bbm:
      return "bbm";
  }
  return "nguyen-unit";
}

std::optional<SweepKind> sweep_kind_from_string(std::string_view name) {
  for (SweepKind k : {SweepKind::nguyen_unit, SweepKind::nguyen_weighted, SweepKind::eps_small_jump,
                      SweepKind::eps_full, SweepKind::bbm})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::string_view parameter_name(SweepKind k) noexcept {
  switch (k) {
    case SweepKind::nguyen_unit:
    case SweepKind::nguyen_weighted:
      return "delta";
    case SweepKind::eps_small_jump:
    case SweepKind::eps_full:
      return "epsilon";
    case SweepKind::bbm:
      return "s";
  }
  return "delta";
}

namespace {

void validate_grid(SweepKind kind, std::span<const double> grid) {
  if (grid.size() < 3) throw DomainError("a sweep needs at least 3 grid points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = grid[i];
    if (!std::isfinite(g)) throw DomainError("sweep grid values must be finite");
    if (kind == SweepKind::bbm) {
      if (!(g > 0.0 && g < 1.0)) throw DomainError("bbm grid values must lie in (0, 1)");
      if (i > 0 && !(g > grid[i - 1])) throw DomainError("bbm grid must increase toward 1");
    } else {
      if (!(g > 0.0)) throw DomainError("sweep grid values must be positive");
      if (i > 0 && !(g < grid[i - 1])) throw DomainError("sweep grid must decrease");
    }
  }
}

FunctionalValue evaluate(SweepKind kind, const ScalarField& u, const ExponentField& p, double g,
                         const QuadratureSpec& q) {
  switch (kind) {
    case SweepKind::nguyen_unit:
      return nguyen_functional(u, p, g, WeightMode::unit, q);
    case SweepKind::nguyen_weighted:
      return nguyen_functional(u, p, g, WeightMode::p_of_x, q);
    case SweepKind::eps_small_jump:
      return eps_functional(u, p, g, EpsMode::small_jump, q);
    case SweepKind::eps_full:
      return eps_functional(u, p, g, EpsMode::full, q);
    case SweepKind::bbm:
      return bbm_functional(u, p.p_minus(), g, q);
  }
  return {};
}

}  // namespace

SweepReport run_sweep(SweepKind kind, const ScalarField& u, const ExponentField& p, std::span<const double> grid,
                      const QuadratureSpec& q) {
  validate_grid(kind, grid);
  if (kind == SweepKind::bbm && !p.is_constant()) throw DomainError("bbm sweeps need a constant exponent");
  if (u.dimension() != p.dimension()) throw DomainError("field and exponent dimensions differ");
  q.validate();

  SweepReport out;
  out.kind = kind;
  out.parameter_name = std::string(parameter_name(kind));
  out.grid.assign(grid.begin(), grid.end());
  out.values.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { out.values[i] = evaluate(kind, u, p, grid[i], q); });

  const bool weighted = kind == SweepKind::nguyen_weighted || kind == SweepKind::eps_small_jump ||
                        kind == SweepKind::eps_full;
  out.target = local_energy(u, p, weighted ? WeightMode::p_of_x : WeightMode::unit, q).value;

  for (const auto& v : out.values) {
    const double d = std::abs(v.value - out.target);
    out.deviations.push_back(out.target != 0.0 ? d / std::abs(out.target) : d);
  }

  const std::size_t m = 3;
  const std::size_t first = grid.size() - m;
  std::vector<double> t, v;
  for (std::size_t i = first; i < grid.size(); ++i) {
    t.push_back(kind == SweepKind::bbm ? 1.0 - grid[i] : grid[i]);
    v.push_back(out.values[i].value);
  }
  out.fit_points = static_cast<int>(m);
  out.extrapolated = v.back();

  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
    out.fit_exponent = 0.0;
    return out;
  }
  bool monotone_up = true, monotone_down = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    monotone_up = monotone_up && v[i] > v[i - 1];
    monotone_down = monotone_down && v[i] < v[i - 1];
  }
  if (!monotone_up && !monotone_down) {
    out.flagged = true;
    out.flag_reason = "values are not monotone over the fitted points";
    return out;
  }
  // The limit lies beyond the last value in the direction of travel.
  const double side = monotone_up ? 1.0 : -1.0;
  const PowerFit f = fit_power_law(t, v, v.back(), side);
  out.fit_exponent = f.beta;
  out.fit_coefficient = f.c;
  if (!f.ok || !(f.beta > 0.0) || !std::isfinite(f.v0)) {
    out.flagged = true;
    out.flag_reason = f.ok ? "fitted exponent is not positive" : "power-law fit did not converge";
    return out;
  }
  out.extrapolated = f.v0;
  return out;
}

double sup_over_grid(const SweepReport& report) {
  double s = 0.0;
  for (const auto& v : report.values) s = std::max(s, v.value);
  return s;
}

std::vector<double> default_grid(SweepKind kind, double start, int count) {
  if (count < 1 || !(start > 0.0)) throw DomainError("default grid needs a positive start and count");
  std::vector<double> g;
  double t = start;
  for (int i = 0; i < count; ++i, t *= 0.5) g.push_back(kind == SweepKind::bbm ? 1.0 - t : t);
  return g;
}

}  // namespace vexs
