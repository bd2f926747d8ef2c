#pragma once

// Reference integrators for test oracles. They deliberately use Boost's
// double-exponential rules rather than the library's Gauss-Kronrod driver.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace oracle {

template <class F>
double finite(F f, double a, double b, double tol = 1e-13) {
  static boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, a, b, tol);
}

// int_a^inf f
template <class F>
double to_infinity(F f, double a, double tol = 1e-13) {
  static boost::math::quadrature::exp_sinh<double> rule;
  return rule.integrate([&](double t) { return f(a + t); }, 0.0, std::numeric_limits<double>::infinity(), tol);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
