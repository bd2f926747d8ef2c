#include <doctest.h>

#include <boost/math/tools/minima.hpp>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "vexs/errors.hpp"
#include "vexs/maximal.hpp"

using namespace vexs;

namespace {

// sup over r of the average of |u| over [x - r, x + r]: dense scan in r, then
// Brent's method on the best bracket.
double hl_reference_1d(const ScalarField& u, double x, double r_max) {
  auto ext = [&](double r) {
    // Split at the kinks so the double-exponential rule sees smooth pieces.
    std::vector<double> cuts{x - r};
    for (double c : u.critical_points())
      if (c > x - r && c < x + r) cuts.push_back(c);
    cuts.push_back(x + r);
    double m = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i)
      m += oracle::finite([&](double y) { return std::abs(u(Point{y})); }, cuts[i - 1], cuts[i], 1e-14);
    return -m / (2 * r);
  };
  double best_r = 1e-3, best = ext(best_r);
  const int N = 400;
  for (int i = 1; i <= N; ++i) {
    const double r = 1e-3 * std::pow(r_max / 1e-3, static_cast<double>(i) / N);
    const double v = ext(r);
    if (v < best) best = v, best_r = r;
  }
  const double ratio = std::pow(r_max / 1e-3, 1.0 / N);
  const auto res = boost::math::tools::brent_find_minima(ext, best_r / ratio, std::min(r_max, best_r * ratio), 50);
  return -std::min(best, res.second);
}

}  // namespace

TEST_CASE("maximal function of the tent against a direct search") {
  const auto u = ScalarField::tent(1);
  for (double x : {0.0, 0.5, -0.8, 1.5, 3.0, -2.0}) {
    const double ref = std::max(hl_reference_1d(u, x, 40.0), std::abs(u(Point{x})));
    CHECK(hl_maximal(u, Point{x}, 40.0, 40) == doctest::Approx(ref).epsilon(1e-9));
  }
  // At x = 3 the optimal radius solves r m'(r) = m(r), m(r) = 1/2 + (r - 3) - (r - 3)^2 / 2.
  const double r = std::sqrt(14.0);
  const double m = 0.5 + (r - 3.0) - 0.5 * (r - 3.0) * (r - 3.0);
  CHECK(hl_maximal(u, Point{3.0}, 40.0, 40) == doctest::Approx(m / (2.0 * r)).epsilon(1e-12));
}

TEST_CASE("maximal function bounds in two and three dimensions") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int n = 2; n <= 3; ++n) {
    const auto u = ScalarField::gaussian(n);
    for (int i = 0; i < 6; ++i) {
      Point x(n);
      for (int k = 0; k < n; ++k) x[k] = U(rng);
      const double m = hl_maximal(u, x, 10.0, 30);
      CHECK(m >= u(x) * (1 - 1e-12));
      CHECK(m <= 1.0 + 1e-12);
    }
    CHECK(hl_maximal(u, Point::filled(n, 0.0), 10.0, 30) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("directional maximal function") {
  const auto u = ScalarField::tent(1);
  CHECK(directional_maximal(u, Point{0.0}, Point{1.0}, 10.0, 40) == doctest::Approx(1.0).epsilon(1e-12));
  // From x = -2 along +1 the average over [0, h] of tent(-2 + s) peaks for h in (2, 3).
  auto avg = [](double h) {
    const double m = h <= 1 ? 0.0 : h <= 2 ? 0.5 * (h - 1) * (h - 1) : h <= 3 ? 1.0 - 0.5 * (3 - h) * (3 - h) : 1.0;
    return -m / h;
  };
  const auto best = boost::math::tools::brent_find_minima(avg, 2.0, 3.0, 50);
  CHECK(directional_maximal(u, Point{-2.0}, Point{1.0}, 10.0, 40) == doctest::Approx(-best.second).epsilon(1e-9));
  // Nothing lies ahead in the other direction.
  CHECK(directional_maximal(u, Point{-2.0}, Point{-1.0}, 10.0, 40) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("generic maximal of a point function") {
  // |g| = indicator of [-1, 1]: at x = 3 the best ball is [-1, 7] with average 2/8.
  const PointFunction g = [](const Point& x) { return std::abs(x[0]) <= 1.0 ? 1.0 : 0.0; };
  const double breaks[] = {-1.0, 1.0};
  const auto m = hl_maximal_of(g, Point{3.0}, 20.0, MaximalSearch{}, breaks);
  CHECK(m.value == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(m.best_radius == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("divergence counterexample") {
  const auto p = counterexample_exponent();
  CHECK(p(Point{-3.0}) == 2.0);
  CHECK(p(Point{0.0}) == doctest::Approx(3.0));
  CHECK(p(Point{5.0}) == 4.0);
  const double R[] = {10.0, 100.0, 1000.0};
  const auto r = counterexample_experiment(R);
  CHECK(r.modular_u == doctest::Approx(3.0 * std::pow(2.0, -1.0 / 3.0)).epsilon(1e-9));
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].modular_Mu < r.rows[1].modular_Mu);
  CHECK(r.rows[1].modular_Mu < r.rows[2].modular_Mu);
  const double bad[] = {5.0};
  CHECK_THROWS_AS(counterexample_experiment(bad), DomainError);
}

TEST_CASE("BMO quantity") {
  const Ball e{Point{0.5}, 0.5};
  const std::vector<Ball> whole{{Point{0.5}, 0.5}, {Point{0.25}, 0.25}};
  const auto c = bmo_quantity(ScalarField::constant(1, 4.0), e, whole);
  CHECK(c.sup == 0.0);
  // u(x) = x: the mean of |x - y| over a ball of radius r is 2r/3.
  const auto lin = bmo_quantity(ScalarField::sampled_table({0.0, 1.0}, {0.0, 1.0}), e, whole);
  CHECK(lin.per_ball[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(lin.per_ball[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
  // log|x| on (0, 2r): E|log X - log Y| = 1 for every r.
  std::vector<Ball> dyadic;
  for (int k = 1; k <= 6; ++k) dyadic.push_back({Point{std::ldexp(1.0, -k - 1)}, std::ldexp(1.0, -k - 1)});
  const auto lg = bmo_quantity(ScalarField::log_singular(1, 1.0), e, dyadic);
  for (double v : lg.per_ball) CHECK(v == doctest::Approx(1.0).epsilon(1e-7));
  const std::vector<Ball> outside{{Point{2.0}, 0.5}};
  CHECK_THROWS_AS(bmo_quantity(ScalarField::constant(1, 1.0), e, outside), DomainError);
}
