#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nusample {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Points in time or frequency space. Only the first `dim` coordinates are
// meaningful; unused coordinates are kept at zero so dot products and norms
// need no dimension argument.
using Point = std::array<double, 2>;

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Point& a) { return std::hypot(a[0], a[1]); }
inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point operator-(const Point& a) { return {-a[0], -a[1]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1]}; }

inline Point point1(double x) { return {x, 0.0}; }

// e^{2 pi i t}
inline cplx cis(double t) { return std::polar(1.0, two_pi * t); }

// Axis-aligned closed box [lo, hi] in the first `dim` coordinates.
struct Box {
  int dim = 1;
  Point lo{};
  Point hi{};

  static Box symmetric(int dim, double half_width) {
    Box b{dim, {}, {}};
    for (int i = 0; i < dim; ++i) {
      b.lo[i] = -half_width;
      b.hi[i] = half_width;
    }
    return b;
  }

  static Box interval(double lo, double hi) { return Box{1, {lo, 0.0}, {hi, 0.0}}; }

  bool contains(const Point& p, double tol = 1e-12) const {
    for (int i = 0; i < dim; ++i)
      if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
    return true;
  }

  double extent(int axis) const { return hi[axis] - lo[axis]; }
};

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Balayage fit could not reach the requested tolerance.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

// Problem exceeds the dense-matrix capacity of the module.
class CapacityError : public Error {
public:
  using Error::Error;
};

// The sampling family does not form a frame at the discretization scale.
class NotAFrameError : public Error {
public:
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline double sinc(double u) {
  if (std::abs(u) < 1e-12) return 1.0;
  return std::sin(pi * u) / (pi * u);
}

}  // namespace nusample
