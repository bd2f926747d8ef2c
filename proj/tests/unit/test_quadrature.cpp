#include <doctest.h>

#include <numbers>
#include <random>

#include "vexs/errors.hpp"
#include "vexs/fit.hpp"
#include "vexs/parallel.hpp"
#include "vexs/quadrature.hpp"
#include "vexs/quadrature_spec.hpp"

using namespace vexs;

TEST_CASE("adaptive integration of smooth and kinked integrands") {
  const auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r.converged);
  const double pts[] = {-1.0, 0.3, 2.0};
  const auto k = quad::integrate([](double x) { return std::abs(x - 0.3); }, std::span<const double>(pts));
  CHECK(k.value == doctest::Approx(0.5 * 1.3 * 1.3 + 0.5 * 1.7 * 1.7).epsilon(1e-13));
}

TEST_CASE("left-singular and log-scale integration") {
  // int_0^1 x^-0.9 = 10, int_0^1 x^-0.5 log(1/x) = 4
  const auto a = quad::integrate_left_singular([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0, -0.9);
  CHECK(a.value == doctest::Approx(10.0).epsilon(1e-9));
  const auto b = quad::integrate_left_singular([](double x) { return -std::log(x) / std::sqrt(x); }, 0.0, 1.0, -0.5);
  CHECK(b.value == doctest::Approx(4.0).epsilon(1e-9));
  const auto c = quad::integrate_log_scale([](double x) { return 1.0 / x; }, 1e-8, 1.0);
  CHECK(c.value == doctest::Approx(8.0 * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("power tails") {
  // int_2^inf x^-4/3 = 3 2^-1/3
  const auto r = quad::integrate_power_tail([](double x) { return std::pow(x, -4.0 / 3.0); }, 2.0, 1.0 / 3.0);
  CHECK(r.value == doctest::Approx(3.0 * std::pow(2.0, -1.0 / 3.0)).epsilon(1e-10));
}

TEST_CASE("quadrature spec validation") {
  QuadratureSpec q;
  CHECK_NOTHROW(q.validate());
  q.rel_tol = -1.0;
  CHECK_THROWS(q.validate());
  q = {};
  q.truncation_radius = 0.0;
  CHECK_THROWS(q.validate());
  q = {};
  q.sphere_resolution = 30;
  CHECK_THROWS(q.validate());
}

TEST_CASE("power-law fit recovers synthetic rates") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double v0 = 0.5 + 2 * U(rng), c = (U(rng) < 0.5 ? -1 : 1) * (0.1 + U(rng)), beta = 0.4 + 1.6 * U(rng);
    std::vector<double> t, v;
    for (double x : {0.2, 0.1, 0.05, 0.025}) {
      t.push_back(x);
      v.push_back(v0 + c * std::pow(x, beta));
    }
    const double side = c > 0 ? -1.0 : 1.0;
    const auto tail_t = std::span<const double>(t).subspan(1);
    const auto tail_v = std::span<const double>(v).subspan(1);
    const auto f = fit_power_law(tail_t, tail_v, v.back(), side);
    REQUIRE(f.ok);
    CHECK(f.v0 == doctest::Approx(v0).epsilon(1e-5));
    CHECK(f.beta == doctest::Approx(beta).epsilon(1e-4));
    CHECK(f.c == doctest::Approx(c).epsilon(1e-3));
  }
}

TEST_CASE("log-log slope") {
  const double t[] = {1.0, 10.0, 100.0};
  const double v[] = {2.0, 2.0 * std::sqrt(10.0), 20.0};
  CHECK(loglog_slope(t, v) == doctest::Approx(0.5));
}

TEST_CASE("parallel_for runs every index once and rethrows the lowest failure") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  try {
    parallel_for(50, [](std::size_t i) {
      if (i == 7 || i == 31) throw DivergenceError("op", std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const DivergenceError& e) {
    CHECK(std::string(e.what()) == "op: 7");
  }
  CHECK(worker_count() >= 1);
}
