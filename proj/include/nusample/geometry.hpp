#pragma once

// Compact convex spectra symmetric about the origin: boxes, Euclidean balls
// and vertex polytopes in one or two dimensions, with their gauges, polar
// bodies, quadrature grids and the grid-based covering test.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nusample/core.hpp"

namespace nusample {

enum class Shape { box, ball, polytope };

inline std::string to_string(Shape s) {
  switch (s) {
    case Shape::box: return "box";
    case Shape::ball: return "ball";
    case Shape::polytope: return "polytope";
  }
  return "unknown";
}

class SpectrumSet {
public:
  static SpectrumSet box(int dim, Point half_widths) {
    SpectrumSet s;
    s.dim_ = dim;
    s.shape_ = Shape::box;
    s.half_widths_ = half_widths;
    s.validate();
    return s;
  }

  static SpectrumSet interval(double half_width) { return box(1, {half_width, 0.0}); }

  static SpectrumSet ball(int dim, double radius) {
    SpectrumSet s;
    s.dim_ = dim;
    s.shape_ = Shape::ball;
    s.radius_ = radius;
    s.validate();
    return s;
  }

  /// The vertex list must be closed under negation. In two dimensions the
  /// convex hull is computed; interior vertices are allowed and ignored.
  static SpectrumSet polytope(int dim, std::vector<Point> vertices) {
    SpectrumSet s;
    s.dim_ = dim;
    s.shape_ = Shape::polytope;
    s.vertices_ = std::move(vertices);
    s.validate();
    return s;
  }

  int dim() const { return dim_; }
  Shape shape() const { return shape_; }
  const Point& half_widths() const { return half_widths_; }
  double radius() const { return radius_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  /// Hull vertices in counter-clockwise order (polytopes only).
  const std::vector<Point>& hull() const { return hull_; }

  /// Minkowski gauge inf{rho > 0 : gamma in rho * Lambda}.
  double gauge(const Point& g) const {
    switch (shape_) {
      case Shape::box: {
        double v = 0.0;
        for (int i = 0; i < dim_; ++i) v = std::max(v, std::abs(g[i]) / half_widths_[i]);
        return v;
      }
      case Shape::ball: return norm(g) / radius_;
      case Shape::polytope: {
        if (dim_ == 1) return std::abs(g[0]) / hull_[0][0];
        double v = 0.0;
        for (std::size_t i = 0; i < facet_normals_.size(); ++i)
          v = std::max(v, dot(facet_normals_[i], g) / facet_offsets_[i]);
        return v;
      }
    }
    return 0.0;
  }

  bool contains(const Point& g, double tol = 1e-12) const { return gauge(g) <= 1.0 + tol; }

  /// Support function max_{gamma in Lambda} x . gamma.
  double support(const Point& x) const {
    switch (shape_) {
      case Shape::box: {
        double v = 0.0;
        for (int i = 0; i < dim_; ++i) v += std::abs(x[i]) * half_widths_[i];
        return v;
      }
      case Shape::ball: return radius_ * norm(x);
      case Shape::polytope: {
        double v = -std::numeric_limits<double>::infinity();
        for (const auto& p : hull_) v = std::max(v, dot(x, p));
        return v;
      }
    }
    return 0.0;
  }

  /// Euclidean distance from gamma to the set (0 inside).
  double distance(const Point& g) const {
    switch (shape_) {
      case Shape::box: {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) {
          const double e = std::max(0.0, std::abs(g[i]) - half_widths_[i]);
          s += e * e;
        }
        return std::sqrt(s);
      }
      case Shape::ball: return std::max(0.0, norm(g) - radius_);
      case Shape::polytope: {
        if (dim_ == 1) return std::max(0.0, std::abs(g[0]) - hull_[0][0]);
        if (contains(g, 0.0)) return 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < hull_.size(); ++i) {
          const Point& a = hull_[i];
          const Point& b = hull_[(i + 1) % hull_.size()];
          const Point ab = b - a;
          double t = dot(g - a, ab) / dot(ab, ab);
          t = std::clamp(t, 0.0, 1.0);
          best = std::min(best, norm(g - (a + t * ab)));
        }
        return best;
      }
    }
    return 0.0;
  }

  /// Half-widths of the smallest origin-centred box containing the set.
  Point bounding_half_widths() const {
    Point b{};
    switch (shape_) {
      case Shape::box: return half_widths_;
      case Shape::ball:
        for (int i = 0; i < dim_; ++i) b[i] = radius_;
        return b;
      case Shape::polytope:
        for (const auto& p : hull_)
          for (int i = 0; i < dim_; ++i) b[i] = std::max(b[i], std::abs(p[i]));
        return b;
    }
    return b;
  }

  double volume() const {
    switch (shape_) {
      case Shape::box: {
        double v = 1.0;
        for (int i = 0; i < dim_; ++i) v *= 2.0 * half_widths_[i];
        return v;
      }
      case Shape::ball: return dim_ == 1 ? 2.0 * radius_ : pi * radius_ * radius_;
      case Shape::polytope: {
        if (dim_ == 1) return 2.0 * hull_[0][0];
        double a = 0.0;
        for (std::size_t i = 0; i < hull_.size(); ++i) {
          const Point& p = hull_[i];
          const Point& q = hull_[(i + 1) % hull_.size()];
          a += p[0] * q[1] - q[0] * p[1];
        }
        return 0.5 * std::abs(a);
      }
    }
    return 0.0;
  }

  double diameter() const {
    switch (shape_) {
      case Shape::box: {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) s += half_widths_[i] * half_widths_[i];
        return 2.0 * std::sqrt(s);
      }
      case Shape::ball: return 2.0 * radius_;
      case Shape::polytope: {
        double d = 0.0;
        for (const auto& p : hull_)
          for (const auto& q : hull_) d = std::max(d, norm(p - q));
        return d;
      }
    }
    return 0.0;
  }

  SpectrumSet scaled(double rho) const {
    require(rho > 0.0, "scale factor must be positive");
    switch (shape_) {
      case Shape::box: return box(dim_, rho * half_widths_);
      case Shape::ball: return ball(dim_, rho * radius_);
      case Shape::polytope: {
        std::vector<Point> v;
        v.reserve(vertices_.size());
        for (const auto& p : vertices_) v.push_back(rho * p);
        return polytope(dim_, std::move(v));
      }
    }
    return *this;
  }

  /// Polar body {x : x . gamma <= 1 for all gamma in Lambda}. Symmetry makes
  /// this the same as the absolute-value polar.
  SpectrumSet polar() const {
    switch (shape_) {
      case Shape::box: {
        if (dim_ == 1) return interval(1.0 / half_widths_[0]);
        const double a = 1.0 / half_widths_[0];
        const double b = 1.0 / half_widths_[1];
        return polytope(2, {{a, 0.0}, {-a, 0.0}, {0.0, b}, {0.0, -b}});
      }
      case Shape::ball: return ball(dim_, 1.0 / radius_);
      case Shape::polytope: {
        if (dim_ == 1) {
          const double a = 1.0 / hull_[0][0];
          return polytope(1, {{a, 0.0}, {-a, 0.0}});
        }
        std::vector<Point> v;
        v.reserve(facet_normals_.size());
        for (std::size_t i = 0; i < facet_normals_.size(); ++i)
          v.push_back((1.0 / facet_offsets_[i]) * facet_normals_[i]);
        return polytope(2, std::move(v));
      }
    }
    return *this;
  }

private:
  SpectrumSet() = default;

  void validate() {
    require(dim_ == 1 || dim_ == 2, "spectrum dimension must be 1 or 2");
    for (int i = dim_; i < 2; ++i) half_widths_[i] = 0.0;
    switch (shape_) {
      case Shape::box:
        for (int i = 0; i < dim_; ++i)
          require(half_widths_[i] > 0.0 && std::isfinite(half_widths_[i]),
                  "box half-widths must be positive");
        break;
      case Shape::ball:
        require(radius_ > 0.0 && std::isfinite(radius_), "ball radius must be positive");
        break;
      case Shape::polytope: build_polytope(); break;
    }
  }

  void build_polytope() {
    require(!vertices_.empty(), "polytope needs vertices");
    for (auto& v : vertices_)
      for (int i = dim_; i < 2; ++i) v[i] = 0.0;
    double scale = 0.0;
    for (const auto& v : vertices_) scale = std::max(scale, norm(v));
    require(scale > 0.0, "polytope vertices must not all be the origin");
    const double tol = 1e-9 * scale;
    for (const auto& v : vertices_) {
      const bool closed = std::any_of(vertices_.begin(), vertices_.end(),
                                      [&](const Point& w) { return norm(v + w) <= tol; });
      require(closed, "polytope vertex list must be closed under negation");
    }
    if (dim_ == 1) {
      double a = 0.0;
      for (const auto& v : vertices_) a = std::max(a, std::abs(v[0]));
      hull_ = {{a, 0.0}, {-a, 0.0}};
      return;
    }
    // Andrew's monotone chain, counter-clockwise, collinear points dropped.
    std::vector<Point> pts = vertices_;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](const Point& a, const Point& b) { return norm(a - b) <= tol; }),
              pts.end());
    auto cross = [](const Point& o, const Point& a, const Point& b) {
      return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
      while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= tol * scale) --k;
      h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
      while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= tol * scale) --k;
      h[k++] = pts[i];
    }
    h.resize(k > 0 ? k - 1 : 0);
    require(h.size() >= 3, "polytope vertices must affinely span the plane");
    hull_ = std::move(h);
    facet_normals_.clear();
    facet_offsets_.clear();
    for (std::size_t i = 0; i < hull_.size(); ++i) {
      const Point& a = hull_[i];
      const Point& b = hull_[(i + 1) % hull_.size()];
      const Point n{b[1] - a[1], a[0] - b[0]};
      const double c = dot(n, a);
      require(c > tol * scale, "polytope must contain the origin in its interior");
      facet_normals_.push_back(n);
      facet_offsets_.push_back(c);
    }
  }

  int dim_ = 1;
  Shape shape_ = Shape::box;
  Point half_widths_{};
  double radius_ = 0.0;
  std::vector<Point> vertices_;
  std::vector<Point> hull_;
  std::vector<Point> facet_normals_;
  std::vector<double> facet_offsets_;
};

inline double lambda_norm(const SpectrumSet& s, const Point& g) { return s.gauge(g); }
inline SpectrumSet polar_set(const SpectrumSet& s) { return s.polar(); }
inline SpectrumSet scale(const SpectrumSet& s, double rho) { return s.scaled(rho); }

/// Quadrature nodes and weights discretizing L^2 of a spectrum.
struct SpectralGrid {
  enum class Kind { midpoint, nested };

  int dim = 1;
  Kind kind = Kind::midpoint;
  std::vector<Point> nodes;
  std::vector<double> weights;
  std::array<int, 2> counts{1, 1};  // ambient nodes per axis
  std::array<double, 2> step{0.0, 0.0};
  int nested_half = 0;  // M for nested grids: nodes k*step, |k| <= M

  std::size_t size() const { return nodes.size(); }
  double weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
  bool same_as(const SpectralGrid& o) const {
    return dim == o.dim && kind == o.kind && nodes == o.nodes && weights == o.weights;
  }
};

namespace detail {
inline SpectralGrid midpoint_grid(int dim, Point half, int n, auto&& keep) {
  require(n >= 2, "grid needs at least 2 nodes per axis");
  SpectralGrid g;
  g.dim = dim;
  g.kind = SpectralGrid::Kind::midpoint;
  for (int i = 0; i < dim; ++i) {
    g.counts[i] = n;
    g.step[i] = 2.0 * half[i] / n;
  }
  double cell = 1.0;
  for (int i = 0; i < dim; ++i) cell *= g.step[i];
  const int ny = dim == 2 ? n : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < n; ++i) {
      Point p{-half[0] + (i + 0.5) * g.step[0], 0.0};
      if (dim == 2) p[1] = -half[1] + (j + 0.5) * g.step[1];
      if (keep(p)) {
        g.nodes.push_back(p);
        g.weights.push_back(cell);
      }
    }
  }
  if (g.nodes.empty()) throw Error("no grid node falls inside the spectrum; increase node count");
  return g;
}
}  // namespace detail

/// Tensor-product midpoint rule on the bounding box, restricted to Lambda.
/// For boxes the weights sum to |Lambda| exactly; for curved or slanted
/// boundaries the weight sum converges at first order in the step
/// (about 1-2% for a disc at 64 nodes per axis).
inline SpectralGrid build_grid(const SpectrumSet& s, int nodes_per_axis) {
  return detail::midpoint_grid(s.dim(), s.bounding_half_widths(), nodes_per_axis,
                               [&](const Point& p) { return s.contains(p); });
}

/// Midpoint grid on Lambda_eps = {gamma : dist(gamma, Lambda) <= eps}.
inline SpectralGrid build_enlarged_grid(const SpectrumSet& s, double eps, int nodes_per_axis) {
  require(eps >= 0.0, "enlargement must be nonnegative");
  Point half = s.bounding_half_widths();
  for (int i = 0; i < s.dim(); ++i) half[i] += eps;
  return detail::midpoint_grid(s.dim(), half, nodes_per_axis,
                               [&](const Point& p) { return s.distance(p) <= eps + 1e-12; });
}

/// Grid of nodes k*h, |k| <= M, on a box with trapezoid weights. With M a
/// multiple of 6, the dilates 2*gamma and 3*gamma of every node are nodes or
/// fall outside the box.
inline SpectralGrid build_nested_grid(const SpectrumSet& s, int M) {
  require(s.shape() == Shape::box, "nested grids are defined on boxes");
  if (M <= 0 || M % 6 != 0) throw std::invalid_argument("nested grid half-count must be a positive multiple of 6");
  SpectralGrid g;
  g.dim = s.dim();
  g.kind = SpectralGrid::Kind::nested;
  g.nested_half = M;
  for (int i = 0; i < g.dim; ++i) {
    g.counts[i] = 2 * M + 1;
    g.step[i] = s.half_widths()[i] / M;
  }
  const int ny = g.dim == 2 ? 2 * M + 1 : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < 2 * M + 1; ++i) {
      const int ki = i - M;
      const int kj = j - M;
      Point p{ki * g.step[0], g.dim == 2 ? kj * g.step[1] : 0.0};
      double w = g.step[0] * (std::abs(ki) == M ? 0.5 : 1.0);
      if (g.dim == 2) w *= g.step[1] * (std::abs(kj) == M ? 0.5 : 1.0);
      g.nodes.push_back(p);
      g.weights.push_back(w);
    }
  }
  return g;
}

struct CoveringResult {
  bool covered = false;
  std::vector<Point> witnesses;  // uncovered grid points
  double resolution = 0.0;
  std::size_t grid_points = 0;
};

/// Checks that every point of a regular grid over `region` lies in some
/// translate y + K, y in E. A bounded region at finite resolution stands in
/// for covering all of R^d.
inline CoveringResult covering_check(std::span<const Point> E, const SpectrumSet& K,
                                     const Box& region, double resolution) {
  require(resolution > 0.0, "covering resolution must be positive");
  require(region.dim == K.dim(), "region and body dimensions differ");
  std::array<int, 2> n{1, 1};
  for (int i = 0; i < region.dim; ++i) {
    require(region.hi[i] >= region.lo[i], "region must be a bounded box");
    n[i] = static_cast<int>(std::floor(region.extent(i) / resolution + 1e-9)) + 1;
  }
  CoveringResult r;
  r.resolution = resolution;
  for (int j = 0; j < n[1]; ++j) {
    for (int i = 0; i < n[0]; ++i) {
      Point p{region.lo[0] + i * resolution, region.dim == 2 ? region.lo[1] + j * resolution : 0.0};
      ++r.grid_points;
      const bool hit = std::any_of(E.begin(), E.end(), [&](const Point& y) { return K.contains(p - y, 1e-12); });
      if (!hit) r.witnesses.push_back(p);
    }
  }
  r.covered = r.witnesses.empty();
  return r;
}

}  // namespace nusample
