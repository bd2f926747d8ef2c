#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <span>

namespace vexs {

inline constexpr int kMaxDimension = 3;

// A point (or vector) of R^n with n <= 3, stored inline so inner quadrature
// loops never allocate.
class Point {
 public:
  Point() = default;
  explicit Point(int dim) : dim_(dim) { assert(dim >= 1 && dim <= kMaxDimension); }
  Point(std::initializer_list<double> coords) : dim_(static_cast<int>(coords.size())) {
    assert(dim_ >= 1 && dim_ <= kMaxDimension);
    int i = 0;
    for (double c : coords) c_[i++] = c;
  }
  explicit Point(std::span<const double> coords) : dim_(static_cast<int>(coords.size())) {
    assert(dim_ >= 1 && dim_ <= kMaxDimension);
    for (int i = 0; i < dim_; ++i) c_[i] = coords[i];
  }

  static Point axis(int dim, int k) {
    Point e(dim);
    e[k] = 1.0;
    return e;
  }
  static Point filled(int dim, double v) {
    Point e(dim);
    for (int i = 0; i < dim; ++i) e[i] = v;
    return e;
  }

  int dim() const noexcept { return dim_; }
  double& operator[](int i) noexcept { return c_[i]; }
  double operator[](int i) const noexcept { return c_[i]; }
  std::span<const double> coords() const noexcept { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  double dot(const Point& o) const noexcept {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += c_[i] * o.c_[i];
    return s;
  }
  double norm_squared() const noexcept { return dot(*this); }
  double norm() const noexcept { return std::sqrt(norm_squared()); }

  bool is_finite() const noexcept {
    for (int i = 0; i < dim_; ++i)
      if (!std::isfinite(c_[i])) return false;
    return true;
  }

  Point& operator+=(const Point& o) noexcept {
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Point& operator-=(const Point& o) noexcept {
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Point& operator*=(double s) noexcept {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) noexcept { return a += b; }
  friend Point operator-(Point a, const Point& b) noexcept { return a -= b; }
  friend Point operator*(Point a, double s) noexcept { return a *= s; }
  friend Point operator*(double s, Point a) noexcept { return a *= s; }
  friend bool operator==(const Point& a, const Point& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDimension> c_{};
  int dim_ = 1;
};

// x + h*omega without temporaries.
inline Point along_ray(const Point& x, const Point& omega, double h) noexcept {
  Point y = x;
  for (int i = 0; i < x.dim(); ++i) y[i] += h * omega[i];
  return y;
}

}  // namespace vexs
