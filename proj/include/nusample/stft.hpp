#pragma once

// Short-time Fourier transform on uniform time grids (d = 1):
//
//   V_g f(x, w) = int f(t) conj(g(t - x)) e^{-2 pi i t w} dt,
//
// Gaussian window g0, the time-frequency and closed-form transform
// identities, the Feichtinger norm, the PW-restricted STFT frame bound and
// nonuniform Gabor frames with atoms M_sigma T_s g.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nusample/core.hpp"
#include "nusample/detail/linalg.hpp"
#include "nusample/detail/parallel.hpp"
#include "nusample/frames.hpp"
#include "nusample/sampling.hpp"
#include "nusample/spectral.hpp"

namespace nusample {

/// Nodes i * step for |i| <= half.
struct TimeGrid {
  double step = 0.125;
  int half = 64;

  TimeGrid() = default;
  TimeGrid(double s, int h) : step(s), half(h) {
    require(step > 0.0, "time grid step must be positive");
    require(half >= 1, "time grid needs at least 2 nodes");
  }
  /// Grid of the given step covering [-extent, extent].
  static TimeGrid covering(double step, double extent) {
    return TimeGrid(step, std::max(1, static_cast<int>(std::ceil(extent / step - 1e-9))));
  }
  std::size_t size() const { return static_cast<std::size_t>(2 * half + 1); }
  double node(std::size_t i) const { return (static_cast<int>(i) - half) * step; }
  double extent() const { return half * step; }
  TimeGrid refined() const { return TimeGrid(step / 2.0, half * 2); }
  bool operator==(const TimeGrid&) const = default;
};

struct TimeSignal {
  TimeGrid grid;
  CVec values;

  TimeSignal() = default;
  TimeSignal(TimeGrid g, CVec v) : grid(g), values(std::move(v)) {
    require(static_cast<std::size_t>(values.size()) == grid.size(), "signal length must match its grid");
  }
  static TimeSignal sample(const TimeGrid& g, const std::function<cplx(double)>& fn) {
    CVec v(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) v[static_cast<Eigen::Index>(i)] = fn(g.node(i));
    return TimeSignal(g, std::move(v));
  }
  double norm() const { return std::sqrt(values.squaredNorm() * grid.step); }
  cplx at(int index) const {
    if (std::abs(index) > grid.half) return cplx(0.0);
    return values[index + grid.half];
  }
};

inline TimeSignal operator*(cplx a, const TimeSignal& f) { return TimeSignal(f.grid, a * f.values); }

/// Window samples on a time grid plus an optional analytic evaluator for
/// shifts off the grid.
struct WindowFunction {
  TimeSignal samples;
  std::function<cplx(double)> analytic;
  std::string tag;
  double scale = 1.0;  // normalization applied to the analytic form

  WindowFunction() = default;
  WindowFunction(TimeSignal s, std::function<cplx(double)> fn = {}, std::string name = "sampled",
                 bool normalize = true)
      : samples(std::move(s)), analytic(std::move(fn)), tag(std::move(name)) {
    const double n = samples.norm();
    require(n > 0.0, "window must be nonzero");
    if (normalize) {
      scale = 1.0 / n;
      samples.values *= scale;
    }
  }

  const TimeGrid& grid() const { return samples.grid; }
  double norm() const { return samples.norm(); }

  /// g(t) at an arbitrary point: grid lookup when t is a node, else analytic.
  cplx operator()(double t) const {
    const double q = t / grid().step;
    const double r = std::round(q);
    if (std::abs(q - r) < 1e-9) return samples.at(static_cast<int>(r));
    if (!analytic) throw std::invalid_argument("window has no analytic form for off-grid shifts");
    return scale * analytic(t);
  }
};

inline double g0(double t) { return std::pow(2.0, 0.25) * std::exp(-pi * t * t); }

/// g0(t) = 2^{1/4} e^{-pi t^2}, normalized on the grid.
inline WindowFunction gaussian_window(const TimeGrid& grid, int dim = 1) {
  require(dim == 1, "STFT windows are implemented for d = 1");
  return WindowFunction(TimeSignal::sample(grid, [](double t) { return cplx(g0(t)); }),
                        [](double t) { return cplx(g0(t)); }, "gaussian");
}

struct TimeFrequencyGrid {
  double x_step = 0.5;
  int x_half = 8;
  double w_step = 0.5;
  int w_half = 8;

  TimeFrequencyGrid() = default;
  TimeFrequencyGrid(double xs, int xh, double ws, int wh) : x_step(xs), x_half(xh), w_step(ws), w_half(wh) {
    require(x_step > 0.0 && w_step > 0.0, "time-frequency steps must be positive");
    require(x_half >= 1 && w_half >= 1, "time-frequency grid needs at least 2 nodes per axis");
  }
  std::size_t nx() const { return static_cast<std::size_t>(2 * x_half + 1); }
  std::size_t nw() const { return static_cast<std::size_t>(2 * w_half + 1); }
  double x(std::size_t m) const { return (static_cast<int>(m) - x_half) * x_step; }
  double w(std::size_t n) const { return (static_cast<int>(n) - w_half) * w_step; }
  TimeFrequencyGrid refined() const { return {x_step / 2.0, x_half * 2, w_step / 2.0, w_half * 2}; }
};

namespace detail {
inline int commensurate(double coarse, double fine) {
  const double q = coarse / fine;
  const double r = std::round(q);
  if (r < 1.0 || std::abs(q - r) > 1e-9 * std::max(1.0, q))
    throw std::invalid_argument("incommensurate grids: time-frequency step must be a multiple of the signal step");
  return static_cast<int>(r);
}
}  // namespace detail

/// V_g f on the time-frequency grid; rows are x, columns are w.
inline CMat stft(const TimeSignal& f, const WindowFunction& g, const TimeFrequencyGrid& tf) {
  require(std::abs(f.grid.step - g.grid().step) <= 1e-15 * f.grid.step, "signal and window grids differ in step");
  const int p = detail::commensurate(tf.x_step, f.grid.step);
  CMat V(static_cast<Eigen::Index>(tf.nx()), static_cast<Eigen::Index>(tf.nw()));
  const double dt = f.grid.step;
  parallel_for(tf.nx(), [&](std::size_t m) {
    const int shift = (static_cast<int>(m) - tf.x_half) * p;
    std::vector<std::pair<double, cplx>> terms;
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
      const int gi = static_cast<int>(i) - f.grid.half - shift;
      const cplx gv = g.samples.at(gi);
      if (gv == cplx(0.0)) continue;
      const cplx prod = f.values[static_cast<Eigen::Index>(i)] * std::conj(gv);
      if (prod != cplx(0.0)) terms.emplace_back(f.grid.node(i), prod);
    }
    for (std::size_t n = 0; n < tf.nw(); ++n) {
      const double w = tf.w(n);
      cplx s{0.0, 0.0};
      for (const auto& [t, v] : terms) s += v * cis(-t * w);
      V(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = s * dt;
    }
  });
  return V;
}

/// Single STFT value at an arbitrary (x, w); uses the window's analytic form
/// when x is not a multiple of the grid step.
inline cplx stft_at(const TimeSignal& f, const WindowFunction& g, double x, double w) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    const double t = f.grid.node(i);
    s += f.values[static_cast<Eigen::Index>(i)] * std::conj(g(t - x)) * cis(-t * w);
  }
  return s * f.grid.step;
}

/// F(nu) = int f(t) e^{-2 pi i t nu} dt on a frequency grid.
inline TimeSignal fourier_transform(const TimeSignal& f, const TimeGrid& nu) {
  CVec F(static_cast<Eigen::Index>(nu.size()));
  parallel_for(nu.size(), [&](std::size_t j) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < f.grid.size(); ++i) s += f.values[static_cast<Eigen::Index>(i)] * cis(-f.grid.node(i) * nu.node(j));
    F[static_cast<Eigen::Index>(j)] = s * f.grid.step;
  });
  return TimeSignal(nu, std::move(F));
}

inline double stft_norm(const CMat& V, const TimeFrequencyGrid& tf) {
  return std::sqrt(V.squaredNorm() * tf.x_step * tf.w_step);
}

/// | ||V_g f|| - ||g|| ||f|| | / (||g|| ||f||); 0 when f = 0.
inline double isometry_check(const TimeSignal& f, const WindowFunction& g, const TimeFrequencyGrid& tf) {
  const double target = g.norm() * f.norm();
  const double got = stft_norm(stft(f, g, tf), tf);
  if (target == 0.0) return got;
  return std::abs(got - target) / target;
}

/// max |V_g f(x,w) - e^{-2 pi i x w} V_G F(w, -x)| over the grid, with F, G
/// computed on the frequency grid nu by quadrature.
inline double tf_identity_check(const TimeSignal& f, const WindowFunction& g, const TimeFrequencyGrid& tf,
                                const TimeGrid& nu) {
  const CMat V = stft(f, g, tf);
  const TimeSignal F = fourier_transform(f, nu);
  const WindowFunction G(fourier_transform(g.samples, nu), {}, "transform", false);
  // V_G F(w, -x): translations w on the nu grid, modulations -x.
  const TimeFrequencyGrid dual(tf.w_step, tf.w_half, tf.x_step, tf.x_half);
  const CMat W = stft(F, G, dual);
  double worst = 0.0;
  for (std::size_t m = 0; m < tf.nx(); ++m)
    for (std::size_t n = 0; n < tf.nw(); ++n) {
      const double x = tf.x(m);
      const double w = tf.w(n);
      const cplx rhs = cis(-x * w) * W(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(tf.nx() - 1 - m));
      worst = std::max(worst, std::abs(V(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) - rhs));
    }
  return worst;
}

/// Frequency grid for the transforms of signals on `grid`: same step, one
/// period [-1/(2 step), 1/(2 step)] of the sampled transform.
inline TimeGrid transform_grid(const TimeGrid& grid) {
  return TimeGrid(grid.step, std::max(1, static_cast<int>(std::round(0.5 / (grid.step * grid.step)))));
}

inline double tf_identity_check(const TimeSignal& f, const WindowFunction& g, const TimeFrequencyGrid& tf) {
  return tf_identity_check(f, g, tf, transform_grid(f.grid));
}

struct ClosedFormResult {
  double deviation = 0.0;          // against e^{+2 pi i z zeta} f(-z) conj(g^(zeta))
  double flipped_deviation = 0.0;  // against e^{-2 pi i z zeta} f(-z) g^(-zeta)
};

/// Two-dimensional transform of the STFT matrix,
///   (V_g f)^(zeta, z) = int int V_g f(x, w) e^{-2 pi i (x zeta + w z)} dx dw,
/// evaluated by quadrature at (zeta_a, z_b) and compared with the closed
/// form. z values must be nodes of the signal grid.
inline ClosedFormResult stft_fourier_closed_form(const TimeSignal& f, const WindowFunction& g,
                                                 const TimeFrequencyGrid& tf, std::span<const double> zetas,
                                                 std::span<const double> zs) {
  const CMat V = stft(f, g, tf);
  ClosedFormResult r;
  for (double zeta : zetas) {
    cplx ghat{0.0, 0.0};
    for (std::size_t i = 0; i < g.grid().size(); ++i)
      ghat += g.samples.values[static_cast<Eigen::Index>(i)] * cis(-g.grid().node(i) * zeta);
    ghat *= g.grid().step;
    cplx ghat_neg{0.0, 0.0};
    for (std::size_t i = 0; i < g.grid().size(); ++i)
      ghat_neg += g.samples.values[static_cast<Eigen::Index>(i)] * cis(g.grid().node(i) * zeta);
    ghat_neg *= g.grid().step;
    // Row transform in x once per zeta.
    CVec row(static_cast<Eigen::Index>(tf.nw()));
    for (std::size_t n = 0; n < tf.nw(); ++n) {
      cplx s{0.0, 0.0};
      for (std::size_t m = 0; m < tf.nx(); ++m) s += V(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) * cis(-tf.x(m) * zeta);
      row[static_cast<Eigen::Index>(n)] = s * tf.x_step;
    }
    for (double z : zs) {
      cplx s{0.0, 0.0};
      for (std::size_t n = 0; n < tf.nw(); ++n) s += row[static_cast<Eigen::Index>(n)] * cis(-tf.w(n) * z);
      s *= tf.w_step;
      const double q = -z / f.grid.step;
      const double qr = std::round(q);
      require(std::abs(q - qr) < 1e-9, "closed-form slices must lie on signal grid nodes");
      const cplx fmz = f.at(static_cast<int>(qr));
      const cplx derived = cis(z * zeta) * fmz * std::conj(ghat);
      const cplx flipped = cis(-z * zeta) * fmz * ghat_neg;
      r.deviation = std::max(r.deviation, std::abs(s - derived));
      r.flipped_deviation = std::max(r.flipped_deviation, std::abs(s - flipped));
    }
  }
  return r;
}

/// ||V_{g0} f||_1 by phase-space quadrature.
inline double feichtinger_norm(const TimeSignal& f, const TimeFrequencyGrid& tf) {
  const WindowFunction w = gaussian_window(f.grid);
  return stft(f, w, tf).cwiseAbs().sum() * tf.x_step * tf.w_step;
}

/// C = sup_u sum_x e^{-|x - u|^2}, maximized over a u grid of the given step
/// spanning the points' hull.
inline std::pair<double, double> gaussian_sum_constant(std::span<const Point> E, double u_step = 1e-3) {
  require(!E.empty(), "need at least one point");
  require(u_step > 0.0, "u step must be positive");
  double lo = E.front()[0], hi = E.front()[0];
  for (const auto& p : E) {
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / u_step)) + 1;
  std::vector<double> vals(n);
  parallel_for(n, [&](std::size_t i) {
    const double u = lo + static_cast<double>(i) * u_step;
    double s = 0.0;
    for (const auto& p : E) s += std::exp(-(p[0] - u) * (p[0] - u));
    vals[i] = s;
  });
  const auto it = std::max_element(vals.begin(), vals.end());
  return {*it, lo + static_cast<double>(it - vals.begin()) * u_step};
}

struct StftFrameCheck {
  double energy = 0.0;       // sum_x int |V_g f(x, w)|^2 dw
  double norm_sq = 0.0;      // ||f||^2
  double ratio = 0.0;        // energy / ||f||^2
  double C = 0.0;
  double feichtinger = 0.0;  // ||V_{g0} g||_1
  double B_formula = 0.0;    // 2^{1/2} C ||V_{g0} g||_1^2
  bool holds = true;
};

struct StftFrameOptions {
  double time_step = 0.125;
  double window_extent = 4.0;  // |t - x| beyond which the window is treated as 0
  double w_step = 0.0625;
  double w_extent = 4.0;
  double u_step = 1e-3;
};

/// STFT energy of a PW signal sampled at a symmetric E, against the explicit
/// upper constant. The window is g0 sampled on the STFT time grid.
inline StftFrameCheck pw_stft_frame_check(const BandlimitedSignal& f, const SamplingSet& E_in,
                                          const StftFrameOptions& o = {}) {
  require(E_in.dim() == 1, "STFT frame check is implemented for d = 1");
  const SamplingSet E = is_symmetric(E_in) ? E_in : symmetrize(E_in);
  StftFrameCheck r;
  r.norm_sq = f.norm_sq();
  const TimeGrid wgrid = TimeGrid::covering(o.time_step, o.window_extent);
  const WindowFunction g = gaussian_window(wgrid);
  const TimeFrequencyGrid ftf(o.time_step * 4, std::max(1, static_cast<int>(std::round(o.window_extent / (o.time_step * 4)))),
                              o.w_step, std::max(1, static_cast<int>(std::round(o.w_extent / o.w_step))));
  r.feichtinger = feichtinger_norm(g.samples, ftf);
  const auto [C, u] = gaussian_sum_constant(std::span<const Point>(E.points()), o.u_step);
  r.C = C;
  r.B_formula = std::sqrt(2.0) * r.C * r.feichtinger * r.feichtinger;
  const TimeFrequencyGrid at_zero(o.time_step, 1, o.w_step, std::max(1, static_cast<int>(std::round(o.w_extent / o.w_step))));
  std::vector<double> per(E.size(), 0.0);
  parallel_for(E.size(), [&](std::size_t j) {
    const double x = E.points()[j][0];
    const double q = x / o.time_step;
    require(std::abs(q - std::round(q)) < 1e-9, "sample points must lie on the STFT time grid");
    // Local grid centred at x: V_g f(x, w) = e^{...} * V_g (T_{-x} f)(0, w); modulus only.
    std::vector<Point> ts(wgrid.size());
    for (std::size_t i = 0; i < wgrid.size(); ++i) ts[i] = point1(x + wgrid.node(i));
    CVec fx(static_cast<Eigen::Index>(ts.size()));
    for (std::size_t i = 0; i < ts.size(); ++i) fx[static_cast<Eigen::Index>(i)] = evaluate(f, ts[i]);
    const CMat V = stft(TimeSignal(wgrid, std::move(fx)), g, at_zero);
    per[j] = V.row(1).squaredNorm() * o.w_step;
  });
  for (double v : per) r.energy += v;
  r.ratio = r.norm_sq > 0.0 ? r.energy / r.norm_sq : 0.0;
  r.holds = r.energy <= r.B_formula * r.norm_sq * (1.0 + 1e-12);
  return r;
}

// ---------------------------------------------------------------------------
// Gabor frames

struct PhaseSpacePoint {
  double s = 0.0;
  double sigma = 0.0;
};

struct PhaseSpaceSamples {
  std::vector<PhaseSpacePoint> points;

  double separation() const {
    if (points.size() < 2) throw std::invalid_argument("undefined separation: fewer than two points");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j)
        best = std::min(best, std::hypot(points[i].s - points[j].s, points[i].sigma - points[j].sigma));
    return best;
  }
};

/// a Z x b Z restricted to |s| <= s_max, |sigma| <= sigma_max.
inline PhaseSpaceSamples gabor_lattice(double a, double b, double s_max, double sigma_max) {
  require(a > 0.0 && b > 0.0, "lattice steps must be positive");
  PhaseSpaceSamples P;
  const int ns = static_cast<int>(std::floor(s_max / a + 1e-9));
  const int nw = static_cast<int>(std::floor(sigma_max / b + 1e-9));
  for (int i = -ns; i <= ns; ++i)
    for (int j = -nw; j <= nw; ++j) P.points.push_back({i * a, j * b});
  return P;
}

/// Each point moved by U[-jitter, jitter] in both coordinates.
inline PhaseSpaceSamples jittered(const PhaseSpaceSamples& P, double jitter, std::uint64_t seed) {
  require(jitter >= 0.0, "jitter must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  PhaseSpaceSamples Q = P;
  for (auto& p : Q.points) {
    p.s += u(rng);
    p.sigma += u(rng);
  }
  return Q;
}

/// Columns are the atoms (M_sigma T_s g)(t_i) = e^{2 pi i sigma t_i} g(t_i - s).
inline CMat gabor_atoms(const TimeGrid& grid, const WindowFunction& g, const PhaseSpaceSamples& P) {
  CMat A(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(P.points.size()));
  parallel_for(P.points.size(), [&](std::size_t n) {
    const auto& p = P.points[n];
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid.node(i);
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) = cis(p.sigma * t) * g(t - p.s);
    }
  });
  return A;
}

/// <f, M_sigma T_s g> = V_g f(s, sigma) for each point.
inline CVec gabor_coefficients(const TimeSignal& f, const WindowFunction& g, const PhaseSpaceSamples& P) {
  const CMat A = gabor_atoms(f.grid, g, P);
  return A.adjoint() * f.values * f.grid.step;
}

/// S_{g,E} f = sum_n <f, atom_n> atom_n.
inline TimeSignal gabor_frame_operator(const TimeSignal& f, const WindowFunction& g, const PhaseSpaceSamples& P) {
  if (P.points.empty()) return TimeSignal(f.grid, CVec::Zero(f.values.size()));
  const CMat A = gabor_atoms(f.grid, g, P);
  const CVec c = A.adjoint() * f.values * f.grid.step;
  return TimeSignal(f.grid, A * c);
}

struct GaborBounds {
  double A = 0.0;
  double B = 0.0;
  double condition = std::numeric_limits<double>::infinity();
};

/// Extreme eigenvalues of S on the time grid (dense, at most 4096 nodes).
inline GaborBounds gabor_frame_bounds(const TimeGrid& grid, const WindowFunction& g, const PhaseSpaceSamples& P) {
  if (grid.size() > dense_capacity) throw CapacityError("time grid exceeds the dense capacity of 4096 nodes");
  GaborBounds b;
  if (P.points.empty()) return b;
  const CMat A = gabor_atoms(grid, g, P);
  const CMat S = A * A.adjoint() * grid.step;
  const RVec ev = detail::hermitian_eigenvalues(S);
  b.B = std::max(0.0, ev[ev.size() - 1]);
  b.A = std::max(0.0, ev[0]);
  b.condition = b.A > eigen_floor * std::max(1.0, b.B) ? b.B / b.A : std::numeric_limits<double>::infinity();
  return b;
}

struct GaborReconstruction {
  TimeSignal signal;
  double error = 0.0;  // relative L2 error against the input
  int iterations = 0;
  bool converged = true;
  double condition = 0.0;
};

inline constexpr double gabor_condition_limit = 1e8;

/// f = sum_n <f, atom_n> S^{-1} atom_n, with S^{-1} applied by CG.
inline GaborReconstruction gabor_reconstruct(const TimeSignal& f, const WindowFunction& g,
                                             const PhaseSpaceSamples& P, double tol = 1e-12, int max_iter = 500) {
  GaborReconstruction r;
  r.signal = TimeSignal(f.grid, CVec::Zero(f.values.size()));
  if (f.values.isZero(0.0)) return r;
  if (P.points.empty()) throw NotAFrameError("not a frame at this scale: no atoms");
  const CMat A = gabor_atoms(f.grid, g, P);
  const double dt = f.grid.step;
  std::optional<CMat> S;
  if (f.grid.size() <= dense_capacity) {
    S = A * A.adjoint() * dt;
    const RVec ev = detail::hermitian_eigenvalues(*S);
    const double lo = ev[0];
    const double hi = ev[ev.size() - 1];
    r.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(r.condition <= gabor_condition_limit))
      throw NotAFrameError("not a frame at this scale: condition of S exceeds 1e8");
  }
  auto apply = [&](const CVec& x) -> CVec {
    if (S) return *S * x;
    return A * (A.adjoint() * x) * dt;
  };
  const CVec coeffs = A.adjoint() * f.values * dt;
  const CVec Sf = A * coeffs;
  auto cg = detail::conjugate_gradient(apply, Sf, tol, max_iter);
  r.signal = TimeSignal(f.grid, cg.x);
  r.iterations = cg.iterations;
  r.converged = cg.converged;
  r.error = (cg.x - f.values).norm() / f.values.norm();
  return r;
}

/// Example pair with supp (V_g f)^ in [-Omega, Omega] x [-T, T]: g has the
/// smooth even bump spectrum on [-Omega, Omega]; f is the even bump
/// supported in [-T, T].
struct SupportPair {
  WindowFunction g;
  TimeSignal f;
};

inline double unit_bump(double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

inline SupportPair example_support_pair(const TimeGrid& grid, double Omega, double T, int quad_nodes = 512) {
  require(Omega > 0.0 && T > 0.0, "band and support limits must be positive");
  std::vector<double> nu(static_cast<std::size_t>(quad_nodes)), wt(static_cast<std::size_t>(quad_nodes));
  const double dn = 2.0 * Omega / quad_nodes;
  for (int k = 0; k < quad_nodes; ++k) {
    nu[static_cast<std::size_t>(k)] = -Omega + (k + 0.5) * dn;
    wt[static_cast<std::size_t>(k)] = unit_bump(nu[static_cast<std::size_t>(k)] / Omega) * dn;
  }
  auto gfun = [nu, wt](double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < nu.size(); ++k) s += wt[k] * std::cos(two_pi * nu[k] * t);
    return cplx(s);
  };
  SupportPair p{WindowFunction(TimeSignal::sample(grid, gfun), gfun, "bandlimited-bump"),
                TimeSignal::sample(grid, [T](double t) { return cplx(unit_bump(t / T)); })};
  return p;
}

}  // namespace nusample
