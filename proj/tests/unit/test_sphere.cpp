#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vexs/errors.hpp"
#include "vexs/sphere.hpp"

using namespace vexs;

namespace {

constexpr double pi = std::numbers::pi;

// (1/p) int_{S^{n-1}} |omega_1|^p by elementary reductions.
double k_reference(int n, double p) {
  if (n == 1) return 2.0 / p;
  if (n == 2) return 4.0 * oracle::finite([p](double t) { return std::pow(std::cos(t), p); }, 0.0, pi / 2) / p;
  return 4.0 * pi / (p * (p + 1.0));
}

}  // namespace

TEST_CASE("sphere constants against elementary integrals") {
  for (int n = 1; n <= 3; ++n)
    for (double p : {1.0, 1.25, 2.0, 3.0, 4.5, 7.0, 12.0}) CHECK(oracle::rel(k_np(n, p), k_reference(n, p)) < 1e-12);
  CHECK(k_np(1, 2.0) == doctest::Approx(1.0));
  CHECK(k_np(2, 2.0) == doctest::Approx(pi / 2));
  CHECK(k_np(3, 2.0) == doctest::Approx(2 * pi / 3));
  CHECK_THROWS_AS(k_np(4, 2.0), DomainError);
  CHECK_THROWS_AS(k_np(2, 0.5), DomainError);
}

TEST_CASE("surface measures") {
  CHECK(sphere_surface_measure(1) == doctest::Approx(2.0));
  CHECK(sphere_surface_measure(2) == doctest::Approx(2 * pi));
  CHECK(sphere_surface_measure(3) == doctest::Approx(4 * pi));
}

TEST_CASE("rules have positive weights summing to the surface measure") {
  for (int n = 1; n <= 3; ++n) {
    const auto rule = make_sphere_rule(n, n == 3 ? 16 : 64);
    double s = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      s += w;
    }
    CHECK(s == doctest::Approx(sphere_surface_measure(n)).epsilon(1e-13));
    for (const auto& x : rule.nodes) CHECK(x.norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS(make_sphere_rule(2, 30));
  CHECK_THROWS(make_sphere_rule(3, 15));
}

TEST_CASE("sphere rules integrate low-degree polynomials") {
  // int_{S^2} x^2 = 4 pi / 3, int_{S^2} x^2 y^2 = 4 pi / 15, int_{S^1} x^4 = 3 pi / 4.
  const auto r3 = make_sphere_rule(3, 16);
  CHECK(r3.integrate([](const Point& w) { return w[0] * w[0]; }) == doctest::Approx(4 * pi / 3).epsilon(1e-12));
  CHECK(r3.integrate([](const Point& w) { return w[0] * w[0] * w[1] * w[1]; }) ==
        doctest::Approx(4 * pi / 15).epsilon(1e-12));
  const auto r2 = make_sphere_rule(2, 64);
  CHECK(r2.integrate([](const Point& w) { return std::pow(w[0], 4); }) == doctest::Approx(3 * pi / 4).epsilon(1e-12));
}

TEST_CASE("Gauss-Legendre exactness") {
  std::vector<double> x, w;
  gauss_legendre(12, x, w);
  for (int k = 0; k <= 23; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
    const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("directional identity for random vectors") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const int n = 1 + i % 3;
    const double p = 1.0 + 4.0 * (U(rng) + 1.0) / 2.0;
    Point v(n);
    for (int k = 0; k < n; ++k) v[k] = 3.0 * U(rng);
    const auto r = directional_identity_check(p, v, n == 2 ? 1 << 16 : 128);
    CHECK(r.relative_residual() < 1e-8);
    CHECK(r.rhs == doctest::Approx(p * k_np(n, p) * std::pow(v.norm(), p)));
  }
}

TEST_CASE("constant table") {
  const int ns[] = {1, 2, 3};
  const double ps[] = {1.0, 2.0, 7.0};
  const auto rows = sphere_constant_table(ns, ps);
  REQUIRE(rows.size() == 9);
  for (const auto& row : rows) CHECK(row.rel_diff < 1e-8);
}
