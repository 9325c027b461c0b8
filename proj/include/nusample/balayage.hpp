#pragma once

// Balayage of point masses onto a sampling set E relative to a spectrum:
// coefficients a_x(y) with sum_x a_x(y) e^{-2 pi i x.gamma} = e^{-2 pi i y.gamma}
// on a grid of the enlarged spectrum Lambda_eps, found by l1-regularized
// least squares; the Ingham-type window h used to glue the pointwise
// identity f(y) = sum_x f(x) a_x(y) h(x - y); and the empirical l^p bound of
// the induced operator k -> {k_x}.

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/QR>

#include "nusample/core.hpp"
#include "nusample/detail/linalg.hpp"
#include "nusample/detail/parallel.hpp"
#include "nusample/geometry.hpp"
#include "nusample/sampling.hpp"
#include "nusample/spectral.hpp"

namespace nusample {

/// Window h with h(0) = 1, h >= 0, supp(h^) in the closed eps-ball and
/// super-polynomial decay. Built from the bump b(r) = exp(-1/(1 - (2r/eps)^2))
/// on |gamma| < eps/2: h^ = (b * b) / (int b)^2, equivalently
/// h = (b_check / b_check(0))^2. The profile h^ >= 0 gives |h| <= h(0) = 1.
class InghamWindow {
public:
  InghamWindow(double eps, int dim, int profile_nodes = 2048)
      : eps_(eps), dim_(dim), nodes_(profile_nodes) {
    require(eps > 0.0, "Ingham window radius must be positive");
    require(dim == 1 || dim == 2, "Ingham window dimension must be 1 or 2");
    require(profile_nodes >= 64, "Ingham window needs at least 64 profile nodes");
    r0_ = 0.5 * eps_;
    const double dr = (dim_ == 1 ? 2.0 * r0_ : r0_) / nodes_;
    quad_r_.resize(static_cast<std::size_t>(nodes_));
    quad_w_.resize(static_cast<std::size_t>(nodes_));
    for (int i = 0; i < nodes_; ++i) {
      const double r = (dim_ == 1 ? -r0_ : 0.0) + (i + 0.5) * dr;
      quad_r_[static_cast<std::size_t>(i)] = r;
      quad_w_[static_cast<std::size_t>(i)] = bump(std::abs(r)) * dr * (dim_ == 2 ? two_pi * r : 1.0);
    }
    bcheck0_ = 0.0;
    for (double w : quad_w_) bcheck0_ += w;
    build_profile();
  }

  double epsilon() const { return eps_; }
  int dim() const { return dim_; }

  double bump(double r) const {
    const double u = r / r0_;
    if (u >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
  }

  /// Inverse transform of the bump, real and radial.
  double bump_check(double radius) const {
    double s = 0.0;
    if (dim_ == 1) {
      for (std::size_t i = 0; i < quad_r_.size(); ++i) s += quad_w_[i] * std::cos(two_pi * radius * quad_r_[i]);
    } else {
      for (std::size_t i = 0; i < quad_r_.size(); ++i)
        s += quad_w_[i] * std::cyl_bessel_j(0.0, two_pi * radius * quad_r_[i]);
    }
    return s;
  }

  double operator()(const Point& x) const {
    const double v = bump_check(norm(x)) / bcheck0_;
    return v * v;
  }

  /// h^ at gamma from the tabulated radial profile; exactly 0 beyond eps.
  double hat(const Point& g) const {
    const double r = norm(g);
    if (r >= eps_) return 0.0;
    const double t = r / profile_step_;
    const auto i = static_cast<std::size_t>(t);
    if (i + 1 >= profile_.size()) return profile_.back();
    const double f = t - static_cast<double>(i);
    return (1.0 - f) * profile_[i] + f * profile_[i + 1];
  }

  const std::vector<double>& profile() const { return profile_; }
  double profile_step() const { return profile_step_; }

  /// int h^ over the ball, by the profile quadrature (should be 1).
  double profile_integral() const { return radial_integral([](double v) { return v; }); }

  /// ||h||_2^2 = int |h^|^2 (Plancherel, profile quadrature).
  double norm_l2_sq() const { return radial_integral([](double v) { return v * v; }); }
  double norm_l2() const { return std::sqrt(norm_l2_sq()); }

private:
  template <class Fn>
  double radial_integral(Fn&& fn) const {
    // Trapezoid in the radius; the profile vanishes smoothly at eps.
    double s = 0.0;
    for (std::size_t i = 0; i < profile_.size(); ++i) {
      const double r = static_cast<double>(i) * profile_step_;
      double w = profile_step_ * (i == 0 || i + 1 == profile_.size() ? 0.5 : 1.0);
      w *= dim_ == 1 ? 2.0 : two_pi * r;
      s += w * fn(profile_[i]);
    }
    return s;
  }

  void build_profile() {
    const int m = 256;
    profile_step_ = eps_ / m;
    profile_.assign(static_cast<std::size_t>(m) + 1, 0.0);
    const double norm2 = bcheck0_ * bcheck0_;
    if (dim_ == 1) {
      const int n = 1024;
      const double dt = 2.0 * r0_ / n;
      for (int i = 0; i <= m; ++i) {
        const double g = i * profile_step_;
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
          const double t = -r0_ + (j + 0.5) * dt;
          s += bump(std::abs(t)) * bump(std::abs(g - t));
        }
        profile_[static_cast<std::size_t>(i)] = s * dt / norm2;
      }
    } else {
      const int n = 160;
      const double dt = 2.0 * r0_ / n;
      for (int i = 0; i <= m; ++i) {
        const Point g{i * profile_step_, 0.0};
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            const Point t{-r0_ + (a + 0.5) * dt, -r0_ + (b + 0.5) * dt};
            const double bt = bump(norm(t));
            if (bt > 0.0) s += bt * bump(norm(g - t));
          }
        profile_[static_cast<std::size_t>(i)] = s * dt * dt / norm2;
      }
    }
    profile_.back() = 0.0;
  }

  double eps_;
  int dim_;
  int nodes_;
  double r0_ = 0.0;
  double bcheck0_ = 0.0;
  std::vector<double> quad_r_;
  std::vector<double> quad_w_;
  std::vector<double> profile_;
  double profile_step_ = 0.0;
};

inline InghamWindow ingham_window(double eps, int dim, int profile_nodes = 2048) {
  return InghamWindow(eps, dim, profile_nodes);
}

/// Default enlargement eps = 0.05 * diam(Lambda).
inline double default_epsilon(const SpectrumSet& lambda) { return 0.05 * lambda.diameter(); }

struct BalayageOptions {
  double tolerance = 1e-3;  // eta: required sup fit residual
  double reg = 1e-8;        // l1 weight
  int max_iter = 50;        // IRLS iterations
  double irls_tolerance = 1e-8;
  double truncation = 1e-10;
};

struct BalayageSolution {
  Point y{};
  CVec coeffs;  // a_x(y), one per point of E in order
  double fit_residual = 0.0;
  double l1_mass = 0.0;
  int iterations = 0;
  bool feasible = false;
};

/// One (E, Lambda_eps grid) pair with its exponential system factored once
/// and a memo of solved centres. Safe to share between threads.
class BalayageProblem {
public:
  BalayageProblem(SamplingSet E, GridPtr grid, BalayageOptions opts = {})
      : E_(std::move(E)), grid_(std::move(grid)), opts_(opts) {
    require(!E_.empty(), "balayage needs a nonempty sampling set");
    require(grid_ && grid_->size() > 0, "balayage needs a spectral grid");
    require(opts_.tolerance > 0.0, "balayage tolerance must be positive");
    require(grid_->dim == E_.dim(), "grid and sampling set dimensions differ");
    const auto n = static_cast<Eigen::Index>(grid_->size());
    const auto m = static_cast<Eigen::Index>(E_.size());
    // Columns in lexicographic point order, so results do not depend on how E
    // is listed.
    order_.resize(E_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    const auto& pts = E_.points();
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return pts[a][0] != pts[b][0] ? pts[a][0] < pts[b][0] : pts[a][1] < pts[b][1];
    });
    phi_.resize(n, m);
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        phi_(k, j) = cis(-dot(pts[order_[static_cast<std::size_t>(j)]], grid_->nodes[static_cast<std::size_t>(k)]));
    ls_.setThreshold(opts_.truncation);
    ls_.compute(phi_);
    qr_.compute(phi_);
    r_ = qr_.matrixQR().topRows(std::min(n, m)).template triangularView<Eigen::Upper>();
    if (n < m) r_.conservativeResize(m, m), r_.bottomRows(m - n).setZero();
  }

  const SamplingSet& sampling_set() const { return E_; }
  const SpectralGrid& grid() const { return *grid_; }
  const BalayageOptions& options() const { return opts_; }

  /// Right-hand side of a finite measure sum_j m_j delta_{y_j}.
  CVec measure_rhs(std::span<const Point> ys, std::span<const cplx> masses) const {
    CVec b = CVec::Zero(phi_.rows());
    for (std::size_t j = 0; j < ys.size(); ++j)
      for (Eigen::Index k = 0; k < b.size(); ++k) b[k] += masses[j] * cis(-dot(ys[j], grid_->nodes[static_cast<std::size_t>(k)]));
    return b;
  }

  /// Balayage of an arbitrary finite measure; no feasibility gate.
  BalayageSolution solve_measure(std::span<const Point> ys, std::span<const cplx> masses) const {
    return fit(measure_rhs(ys, masses));
  }

  /// Solves for delta_y, memoized. The returned solution carries the
  /// feasibility flag; use solve() to raise on failure.
  BalayageSolution try_solve(const Point& y) const {
    const Key key{y[0], y[1]};
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    BalayageSolution s = solve_uncached(y);
    std::lock_guard lock(mutex_);
    cache_.emplace(key, s);
    return s;
  }

  BalayageSolution solve(const Point& y) const {
    BalayageSolution s = try_solve(y);
    if (!s.feasible) {
      std::ostringstream os;
      os << "balayage infeasible at tolerance " << opts_.tolerance << " for y = (" << y[0] << ", " << y[1]
         << "): fit residual " << s.fit_residual;
      throw InfeasibleError(os.str());
    }
    return s;
  }

  std::size_t cache_size() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
  }

private:
  using Key = std::pair<double, double>;

  BalayageSolution solve_uncached(const Point& y) const {
    const auto& pts = E_.points();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (norm(pts[j] - y) <= 1e-12) {
        // delta_y is already carried by E; mass 1 is the l1 minimum because
        // the transform at gamma = 0 forces sum_x a_x = 1.
        BalayageSolution s;
        s.y = y;
        s.coeffs = CVec::Zero(static_cast<Eigen::Index>(pts.size()));
        s.coeffs[static_cast<Eigen::Index>(j)] = 1.0;
        s.l1_mass = 1.0;
        s.feasible = true;
        return s;
      }
    }
    const Point ys[1] = {y};
    const cplx ms[1] = {cplx(1.0)};
    BalayageSolution s = fit(measure_rhs(ys, ms));
    s.y = y;
    return s;
  }

  // IRLS for min sum_k |(Phi a - b)_k|^2 + reg * sum_x |a_x| over the grid
  // nodes. Each step is a stacked least-squares problem solved by QR, so the
  // conditioning of Phi is not squared.
  BalayageSolution fit(const CVec& b) const {
    CVec a = ls_.solve(b);
    int it = 0;
    if (opts_.reg > 0.0) {
      // ||Phi a - b||^2 = ||R a - Q^* b||^2 + const, so each reweighted step
      // only needs the m x m triangular factor.
      const Eigen::Index m = phi_.cols();
      const CVec qb = (qr_.householderQ().adjoint() * b).head(m);
      CMat stacked = CMat::Zero(2 * m, m);
      stacked.topRows(m) = r_;
      CVec rhs = CVec::Zero(2 * m);
      rhs.head(m) = qb;
      const double floor = 1e-14 * std::max(1.0, a.cwiseAbs().maxCoeff());
      for (; it < opts_.max_iter; ++it) {
        for (Eigen::Index j = 0; j < m; ++j)
          stacked(m + j, j) = std::sqrt(opts_.reg / (2.0 * std::max(std::abs(a[j]), floor)));
        CVec next = Eigen::HouseholderQR<CMat>(stacked).solve(rhs);
        const double change = (next - a).norm() / std::max(1e-300, next.norm());
        a = std::move(next);
        if (change < opts_.irls_tolerance) {
          ++it;
          break;
        }
      }
    }
    BalayageSolution s;
    s.coeffs.resize(a.size());
    for (Eigen::Index j = 0; j < a.size(); ++j) s.coeffs[static_cast<Eigen::Index>(order_[static_cast<std::size_t>(j)])] = a[j];
    s.iterations = it;
    s.l1_mass = a.cwiseAbs().sum();
    const CVec r = phi_ * a - b;
    s.fit_residual = r.cwiseAbs().maxCoeff();
    s.feasible = s.fit_residual <= opts_.tolerance;
    return s;
  }

  SamplingSet E_;
  GridPtr grid_;
  BalayageOptions opts_;
  std::vector<std::size_t> order_;  // column j of phi_ is point order_[j]
  CMat phi_;
  Eigen::CompleteOrthogonalDecomposition<CMat> ls_;
  Eigen::HouseholderQR<CMat> qr_;
  CMat r_;
  mutable std::mutex mutex_;
  mutable std::map<Key, BalayageSolution> cache_;
};

inline BalayageSolution solve_balayage(const SamplingSet& E, GridPtr grid, const Point& y,
                                       double eta, double reg = 1e-8) {
  BalayageOptions o;
  o.tolerance = eta;
  o.reg = reg;
  return BalayageProblem(E, std::move(grid), o).solve(y);
}

struct BalayageConstant {
  double K = 0.0;  // max l1 mass over the y sample
  Point argmax{};
};

inline BalayageConstant balayage_constant(const BalayageProblem& P, std::span<const Point> ys) {
  std::vector<BalayageSolution> sols(ys.size());
  parallel_for(ys.size(), [&](std::size_t i) { sols[i] = P.try_solve(ys[i]); });
  BalayageConstant c;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!sols[i].feasible) P.solve(ys[i]);  // throws with the offending y
    if (sols[i].l1_mass > c.K) {
      c.K = sols[i].l1_mass;
      c.argmax = ys[i];
    }
  }
  return c;
}

/// max_y |f(y) - sum_x f(x) a_x(y) h(x - y)| / max|f|, where max|f| is taken
/// over the y sample and E.
inline double fundamental_identity_residual(const TrigPolynomial& f, const BalayageProblem& P,
                                            const InghamWindow& h, std::span<const Point> ys) {
  const auto& pts = P.sampling_set().points();
  std::vector<cplx> fx(pts.size());
  double scale = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    fx[j] = eval_trigpoly(f, pts[j]);
    scale = std::max(scale, std::abs(fx[j]));
  }
  std::vector<double> res(ys.size(), 0.0);
  parallel_for(ys.size(), [&](std::size_t i) {
    const Point& y = ys[i];
    const BalayageSolution s = P.solve(y);
    cplx sum{0.0, 0.0};
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const cplx a = s.coeffs[static_cast<Eigen::Index>(j)];
      if (a == cplx(0.0)) continue;
      sum += fx[j] * a * h(pts[j] - y);
    }
    res[i] = std::abs(eval_trigpoly(f, y) - sum);
  });
  for (const auto& y : ys) scale = std::max(scale, std::abs(eval_trigpoly(f, y)));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, r);
  return worst / scale;
}

/// Quadrature rule in time (nodes and weights).
struct QuadratureRule {
  int dim = 1;
  std::vector<Point> nodes;
  std::vector<double> weights;
};

/// Midpoint rule on a box with the given step.
inline QuadratureRule uniform_rule(const Box& box, double step) {
  require(step > 0.0, "quadrature step must be positive");
  QuadratureRule q;
  q.dim = box.dim;
  std::array<int, 2> n{1, 1};
  for (int i = 0; i < box.dim; ++i) n[i] = std::max(1, static_cast<int>(std::round(box.extent(i) / step)));
  double cell = 1.0;
  std::array<double, 2> h{0.0, 0.0};
  for (int i = 0; i < box.dim; ++i) {
    h[i] = box.extent(i) / n[i];
    cell *= h[i];
  }
  for (int j = 0; j < n[1]; ++j)
    for (int i = 0; i < n[0]; ++i) {
      q.nodes.push_back({box.lo[0] + (i + 0.5) * h[0], box.dim == 2 ? box.lo[1] + (j + 0.5) * h[1] : 0.0});
      q.weights.push_back(cell);
    }
  return q;
}

struct LpBound {
  double lhs = 0.0;     // sum_x |k_x|^p
  double norm_p = 0.0;  // int |k|^p
  double ratio = 0.0;   // lhs / norm_p (0 when k = 0)
  std::vector<cplx> kx;
};

/// k_x = int a_x(y) h(x - y) k(y) dy by the given rule, solving balayage at
/// each quadrature node (memoized in the problem).
inline LpBound lp_balayage_bound(const BalayageProblem& P, const InghamWindow& h, const QuadratureRule& rule,
                                 std::span<const cplx> k, double p) {
  require(p > 1.0, "l^p exponent must exceed 1");
  require(k.size() == rule.nodes.size(), "test function must be sampled on the quadrature nodes");
  const auto& pts = P.sampling_set().points();
  LpBound out;
  out.kx.assign(pts.size(), cplx(0.0));
  for (std::size_t m = 0; m < rule.nodes.size(); ++m) out.norm_p += std::pow(std::abs(k[m]), p) * rule.weights[m];
  if (out.norm_p == 0.0) return out;
  std::vector<std::size_t> active;
  for (std::size_t m = 0; m < rule.nodes.size(); ++m)
    if (k[m] != cplx(0.0)) active.push_back(m);
  std::vector<BalayageSolution> sols(active.size());
  parallel_for(active.size(), [&](std::size_t i) { sols[i] = P.solve(rule.nodes[active[i]]); });
  for (std::size_t i = 0; i < active.size(); ++i) {
    const std::size_t m = active[i];
    const Point& y = rule.nodes[m];
    for (std::size_t j = 0; j < pts.size(); ++j)
      out.kx[j] += sols[i].coeffs[static_cast<Eigen::Index>(j)] * h(pts[j] - y) * k[m] * rule.weights[m];
  }
  for (const auto& v : out.kx) out.lhs += std::pow(std::abs(v), p);
  out.ratio = out.lhs / out.norm_p;
  return out;
}

}  // namespace nusample
