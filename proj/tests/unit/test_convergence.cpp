#include <doctest.h>

#include <numbers>

#include "vexs/convergence.hpp"
#include "vexs/errors.hpp"

using namespace vexs;

TEST_CASE("kind names round-trip") {
  for (auto k : {SweepKind::nguyen_unit, SweepKind::nguyen_weighted, SweepKind::eps_small_jump, SweepKind::eps_full,
                 SweepKind::bbm}) {
    const auto back = sweep_kind_from_string(to_string(k));
    REQUIRE(back);
    CHECK(*back == k);
  }
  CHECK_FALSE(sweep_kind_from_string("bogus"));
  CHECK(parameter_name(SweepKind::bbm) == "s");
  CHECK(parameter_name(SweepKind::eps_full) == "epsilon");
}

TEST_CASE("default grids halve the parameter") {
  const auto g = default_grid(SweepKind::nguyen_unit, 0.2, 5);
  REQUIRE(g.size() == 5);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(g[i - 1] / 2));
  const auto s = default_grid(SweepKind::bbm, 0.4, 4);
  CHECK(s.front() == doctest::Approx(0.6));
  CHECK(s.back() == doctest::Approx(0.95));
}

TEST_CASE("tent threshold sweep extrapolates to the local energy") {
  // The tent's local energy with p = 2 is 2.
  const auto u = ScalarField::tent(1);
  const auto p = ExponentField::constant(1, 2.0);
  const double grid[] = {0.2, 0.1, 0.05, 0.025};
  const auto r = run_sweep(SweepKind::nguyen_unit, u, p, grid);
  CHECK(r.target == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(r.flagged);
  CHECK(r.extrapolated == doctest::Approx(2.0).epsilon(2e-3));
  CHECK(r.fit_points == 3);
  for (std::size_t i = 1; i < r.deviations.size(); ++i) CHECK(r.deviations[i] < r.deviations[i - 1]);
  CHECK(sup_over_grid(r) == doctest::Approx(r.values.back().value));
}

TEST_CASE("weighted sweep is p times the unit sweep for constant p") {
  const auto u = ScalarField::gaussian(1);
  const auto p = ExponentField::constant(1, 3.0);
  const double grid[] = {0.2, 0.1, 0.05};
  const auto a = run_sweep(SweepKind::nguyen_unit, u, p, grid);
  const auto b = run_sweep(SweepKind::nguyen_weighted, u, p, grid);
  for (std::size_t i = 0; i < 3; ++i) CHECK(b.values[i].value == doctest::Approx(3.0 * a.values[i].value).epsilon(1e-12));
  CHECK(b.target == doctest::Approx(3.0 * a.target).epsilon(1e-12));
}

TEST_CASE("zero target uses absolute deviations") {
  const auto u = ScalarField::constant(1, 0.0);
  QuadratureSpec q;
  q.truncation_radius = 1.0;
  const double grid[] = {0.2, 0.1, 0.05};
  const auto r = run_sweep(SweepKind::nguyen_unit, u, ExponentField::constant(1, 2.0), grid, q);
  CHECK(r.target == 0.0);
  for (double d : r.deviations) CHECK(d == 0.0);
  CHECK_FALSE(r.flagged);
}

TEST_CASE("grid validation") {
  const auto u = ScalarField::gaussian(1);
  const auto p = ExponentField::constant(1, 2.0);
  const double short_grid[] = {0.2, 0.1};
  CHECK_THROWS_AS(run_sweep(SweepKind::nguyen_unit, u, p, short_grid), DomainError);
  const double rising[] = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(run_sweep(SweepKind::nguyen_unit, u, p, rising), DomainError);
  const double s_grid[] = {0.7, 0.8, 1.0};
  CHECK_THROWS_AS(run_sweep(SweepKind::bbm, u, p, s_grid), DomainError);
  const double ok[] = {0.7, 0.8, 0.9};
  CHECK_THROWS_AS(run_sweep(SweepKind::bbm, u, ExponentField::inverse_quadratic(1, 2.0, 1.0), ok), DomainError);
}
