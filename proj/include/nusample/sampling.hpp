#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "nusample/core.hpp"

namespace nusample {

/// Finite sampling configuration E intersected with a declared window.
class SamplingSet {
public:
  SamplingSet() = default;

  SamplingSet(int dim, std::vector<Point> points, Box window)
      : dim_(dim), points_(std::move(points)), window_(window) {
    require(dim_ == 1 || dim_ == 2, "sampling dimension must be 1 or 2");
    require(window_.dim == dim_, "window dimension differs from set dimension");
    for (auto& p : points_) {
      for (int i = dim_; i < 2; ++i) p[i] = 0.0;
      require(window_.contains(p, 1e-9), "sample point lies outside the declared window");
    }
    std::vector<Point> sorted = points_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
      require(sorted[i] != sorted[i - 1], "sampling set contains duplicate points");
  }

  /// Builds a set whose window is the bounding box of the points.
  static SamplingSet from_points(int dim, std::vector<Point> points) {
    Box w{dim, {}, {}};
    if (!points.empty()) {
      w.lo = w.hi = points.front();
      for (const auto& p : points)
        for (int i = 0; i < dim; ++i) {
          w.lo[i] = std::min(w.lo[i], p[i]);
          w.hi[i] = std::max(w.hi[i], p[i]);
        }
    }
    for (int i = dim; i < 2; ++i) w.lo[i] = w.hi[i] = 0.0;
    return SamplingSet(dim, std::move(points), w);
  }

  int dim() const { return dim_; }
  const std::vector<Point>& points() const { return points_; }
  const Box& window() const { return window_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// E/j with the window scaled accordingly.
  SamplingSet dilated(double factor) const {
    require(factor > 0.0, "dilation factor must be positive");
    std::vector<Point> p;
    p.reserve(points_.size());
    for (const auto& x : points_) p.push_back(factor * x);
    Box w{dim_, factor * window_.lo, factor * window_.hi};
    return SamplingSet(dim_, std::move(p), w);
  }

private:
  int dim_ = 1;
  std::vector<Point> points_;
  Box window_{};
};

/// Minimum pairwise Euclidean distance.
inline double separation(const SamplingSet& E) {
  if (E.size() < 2) throw std::invalid_argument("undefined separation: fewer than two points");
  const auto& p = E.points();
  double best = std::numeric_limits<double>::infinity();
  if (E.dim() == 1) {
    std::vector<double> x;
    x.reserve(p.size());
    for (const auto& q : p) x.push_back(q[0]);
    std::sort(x.begin(), x.end());
    for (std::size_t i = 1; i < x.size(); ++i) best = std::min(best, x[i] - x[i - 1]);
    return best;
  }
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) best = std::min(best, norm(p[i] - p[j]));
  return best;
}

inline bool is_separated(const SamplingSet& E, double r) { return separation(E) >= r; }

struct DensityEntry {
  double r = 0.0;
  std::size_t min_count = 0;  // n^-(r) over the centre grid
  double value = 0.0;         // n^-(r) / r^d
  bool skipped = false;       // no ball of radius r/2 fits in the window
};

struct DensityReport {
  std::vector<DensityEntry> entries;
  double estimate = 0.0;  // value at the largest usable radius
  bool any_skipped = false;
};

/// Lower Beurling density curve. n^-(r) is the minimum point count over
/// balls of radius r/2 centred on a grid of step r/10, restricted to balls
/// that fit inside the declared window; the exponent is r^d.
inline DensityReport lower_beurling_density(const SamplingSet& E, const std::vector<double>& radii) {
  DensityReport rep;
  const Box& w = E.window();
  const int d = E.dim();
  double prev = 0.0;
  for (double r : radii) {
    require(r > 0.0, "density radii must be positive");
    require(r > prev, "density radii must be increasing");
    prev = r;
    DensityEntry e;
    e.r = r;
    const double half = 0.5 * r;
    const double step = r / 10.0;
    std::array<int, 2> n{1, 1};
    bool fits = true;
    for (int i = 0; i < d; ++i) {
      const double span = w.extent(i) - r;
      if (span < -1e-12) fits = false;
      n[i] = fits ? static_cast<int>(std::floor(std::max(0.0, span) / step + 1e-9)) + 1 : 0;
    }
    if (!fits) {
      e.skipped = true;
      rep.any_skipped = true;
      rep.entries.push_back(e);
      continue;
    }
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        Point c{w.lo[0] + half + i * step, d == 2 ? w.lo[1] + half + j * step : 0.0};
        std::size_t count = 0;
        for (const auto& p : E.points())
          if (norm(p - c) <= half + 1e-12) ++count;
        best = std::min(best, count);
      }
    }
    e.min_count = best;
    e.value = static_cast<double>(best) / std::pow(r, d);
    rep.entries.push_back(e);
  }
  for (auto it = rep.entries.rbegin(); it != rep.entries.rend(); ++it) {
    if (!it->skipped) {
      rep.estimate = it->value;
      break;
    }
  }
  return rep;
}

/// delta*Z^d intersected with the window.
inline SamplingSet uniform_grid(double delta, const Box& window) {
  require(delta > 0.0, "grid spacing must be positive");
  std::array<long, 2> lo{0, 0}, hi{0, 0};
  for (int i = 0; i < window.dim; ++i) {
    lo[i] = static_cast<long>(std::ceil(window.lo[i] / delta - 1e-9));
    hi[i] = static_cast<long>(std::floor(window.hi[i] / delta + 1e-9));
  }
  std::vector<Point> pts;
  for (long j = lo[1]; j <= hi[1]; ++j)
    for (long i = lo[0]; i <= hi[0]; ++i)
      pts.push_back({i * delta, window.dim == 2 ? j * delta : 0.0});
  return SamplingSet(window.dim, std::move(pts), window);
}

/// Uniform grid with each point perturbed by U[-jitter, jitter]^d. Points
/// pushed outside the window are clamped back to its boundary.
inline SamplingSet generate_jittered_grid(double delta, double jitter, const Box& window,
                                          std::uint64_t seed) {
  require(jitter >= 0.0, "jitter must be nonnegative");
  if (!(jitter < 0.5 * delta)) throw std::invalid_argument("jitter must be below half the grid spacing");
  SamplingSet base = uniform_grid(delta, window);
  if (jitter == 0.0) return base;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  std::vector<Point> pts = base.points();
  for (auto& p : pts)
    for (int i = 0; i < window.dim; ++i) p[i] = std::clamp(p[i] + u(rng), window.lo[i], window.hi[i]);
  return SamplingSet(window.dim, std::move(pts), window);
}

/// E union -E, duplicates removed; the window is symmetrized too.
inline SamplingSet symmetrize(const SamplingSet& E) {
  std::vector<Point> pts = E.points();
  for (const auto& p : E.points()) pts.push_back(-p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& a, const Point& b) { return norm(a - b) <= 1e-12; }),
            pts.end());
  Box w = E.window();
  for (int i = 0; i < w.dim; ++i) {
    const double h = std::max(std::abs(w.lo[i]), std::abs(w.hi[i]));
    w.lo[i] = -h;
    w.hi[i] = h;
  }
  return SamplingSet(E.dim(), std::move(pts), w);
}

inline bool is_symmetric(const SamplingSet& E, double tol = 1e-12) {
  for (const auto& p : E.points()) {
    const bool found = std::any_of(E.points().begin(), E.points().end(),
                                   [&](const Point& q) { return norm(p + q) <= tol; });
    if (!found) return false;
  }
  return true;
}

}  // namespace nusample
