#pragma once

// Fourier frames on the discretized Paley-Wiener space. In orthonormal
// coordinates u_k = sqrt(w_k) F_k the sampling operator is the matrix
// Psi_{x,k} = sqrt(w_k) e^{2 pi i x.gamma_k}, and the frame operator is
// T = Psi^* Psi.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nusample/balayage.hpp"
#include "nusample/core.hpp"
#include "nusample/detail/linalg.hpp"
#include "nusample/detail/parallel.hpp"
#include "nusample/geometry.hpp"
#include "nusample/sampling.hpp"
#include "nusample/spectral.hpp"

namespace nusample {

inline constexpr std::size_t dense_capacity = 4096;
inline constexpr double eigen_floor = 1e-12;

struct FrameReport {
  double A = 0.0;
  double B = 0.0;
  double condition = std::numeric_limits<double>::infinity();
  std::size_t node_count = 0;
  std::size_t sample_count = 0;
  std::size_t subspace_dim = 0;
  std::string method;
};

struct SampleVector {
  SamplingSet set;
  CVec values;

  SampleVector() = default;
  SampleVector(SamplingSet s, CVec v) : set(std::move(s)), values(std::move(v)) {
    require(static_cast<std::size_t>(values.size()) == set.size(), "sample vector length must match the set");
  }
};

inline RVec sqrt_weights(const SpectralGrid& g) {
  RVec s(static_cast<Eigen::Index>(g.size()));
  for (std::size_t k = 0; k < g.size(); ++k) s[static_cast<Eigen::Index>(k)] = std::sqrt(g.weights[k]);
  return s;
}

/// Psi_{x,k} = sqrt(w_k) e^{2 pi i x.gamma_k}.
inline CMat sampling_matrix(const SamplingSet& E, const SpectralGrid& g) {
  const auto m = static_cast<Eigen::Index>(E.size());
  const auto n = static_cast<Eigen::Index>(g.size());
  CMat psi(m, n);
  const RVec sw = sqrt_weights(g);
  parallel_for(E.size(), [&](std::size_t i) {
    const Point& x = E.points()[i];
    for (Eigen::Index k = 0; k < n; ++k)
      psi(static_cast<Eigen::Index>(i), k) = sw[k] * cis(dot(x, g.nodes[static_cast<std::size_t>(k)]));
  });
  return psi;
}

/// Dense frame operator T = Psi^* Psi in orthonormal coordinates.
inline CMat frame_operator_matrix(const SamplingSet& E, const SpectralGrid& g) {
  if (g.size() > dense_capacity) throw CapacityError("spectral grid exceeds the dense capacity of 4096 nodes");
  const CMat psi = sampling_matrix(E, g);
  return psi.adjoint() * psi;
}

inline SampleVector analysis(const BandlimitedSignal& f, const SamplingSet& E) {
  return SampleVector(E, evaluate(f, std::span<const Point>(E.points())));
}

/// G(gamma_k) = sum_x v_x e^{-2 pi i x.gamma_k}; adjoint of analysis.
inline BandlimitedSignal synthesis(const SampleVector& v, GridPtr grid) {
  const auto& g = *grid;
  CVec G(static_cast<Eigen::Index>(g.size()));
  parallel_for(g.size(), [&](std::size_t k) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < v.set.size(); ++i) s += v.values[static_cast<Eigen::Index>(i)] * cis(-dot(v.set.points()[i], g.nodes[k]));
    G[static_cast<Eigen::Index>(k)] = s;
  });
  return BandlimitedSignal(std::move(grid), std::move(G));
}

inline BandlimitedSignal frame_operator_apply(const SampleVector& v, GridPtr grid) { return synthesis(v, std::move(grid)); }

/// Orthonormal basis (columns, orthonormal coordinates) of the signals whose
/// energy inside the time box is at least 1 - leak of their total energy.
/// Eigenvectors of the exact time-limiting operator on the grid.
inline CMat interior_subspace(const SpectralGrid& g, const Box& interior, double leak = 1e-10) {
  require(interior.dim == g.dim, "interior box dimension differs from grid");
  if (g.size() > dense_capacity) throw CapacityError("spectral grid exceeds the dense capacity of 4096 nodes");
  const auto n = static_cast<Eigen::Index>(g.size());
  const RVec sw = sqrt_weights(g);
  Point c{}, L{};
  for (int i = 0; i < g.dim; ++i) {
    c[i] = 0.5 * (interior.lo[i] + interior.hi[i]);
    L[i] = interior.extent(i);
  }
  CMat C(n, n);
  parallel_for(g.size(), [&](std::size_t li) {
    const auto l = static_cast<Eigen::Index>(li);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Point d = g.nodes[static_cast<std::size_t>(k)] - g.nodes[li];
      double v = sw[l] * sw[k];
      for (int i = 0; i < g.dim; ++i) v *= L[i] * sinc(L[i] * d[i]);
      C(l, k) = v * cis(dot(c, d));
    }
  });
  Eigen::SelfAdjointEigenSolver<CMat> es(C);
  const RVec& ev = es.eigenvalues();
  Eigen::Index first = n;
  for (Eigen::Index i = 0; i < n; ++i)
    if (ev[i] >= 1.0 - leak) {
      first = i;
      break;
    }
  return es.eigenvectors().rightCols(n - first);
}

struct FrameOptions {
  std::optional<Box> interior;  // restrict to the time-concentrated subspace
  double leak = 1e-10;
};

inline FrameReport make_report(double a, double b, std::size_t nodes, std::size_t samples, std::size_t dim,
                               std::string method) {
  FrameReport r;
  r.B = std::max(0.0, b);
  r.A = a < eigen_floor ? 0.0 : a;
  r.condition = r.A > 0.0 ? r.B / r.A : std::numeric_limits<double>::infinity();
  r.node_count = nodes;
  r.sample_count = samples;
  r.subspace_dim = dim;
  r.method = std::move(method);
  return r;
}

/// Extreme eigenvalues of the discrete frame operator (dense eigensolve).
inline FrameReport frame_bounds(const SamplingSet& E, const SpectralGrid& g, const FrameOptions& opts = {}) {
  require(!E.empty(), "frame bounds need at least one sample");
  if (g.size() > dense_capacity) throw CapacityError("spectral grid exceeds the dense capacity of 4096 nodes");
  const CMat psi = sampling_matrix(E, g);
  if (opts.interior) {
    const CMat U = interior_subspace(g, *opts.interior, opts.leak);
    if (U.cols() == 0) throw Error("interior subspace is empty; enlarge the interior box or the grid");
    const CMat PU = psi * U;
    const RVec ev = detail::hermitian_eigenvalues(PU.adjoint() * PU);
    return make_report(ev[0], ev[ev.size() - 1], g.size(), E.size(), static_cast<std::size_t>(U.cols()),
                       "dense-eigen/interior-subspace");
  }
  const bool sample_side = E.size() < g.size();
  const RVec ev = detail::hermitian_eigenvalues(sample_side ? CMat(psi * psi.adjoint()) : CMat(psi.adjoint() * psi));
  const double a = sample_side ? 0.0 : ev[0];
  return make_report(a, ev[ev.size() - 1], g.size(), E.size(), g.size(), "dense-eigen/full-grid");
}

/// Upper sampling bound sum_x |f(x)|^2 <= B ||f||^2 on the full grid.
inline double plancherel_polya_bound(const SamplingSet& E, const SpectralGrid& g) { return frame_bounds(E, g).B; }

/// Rayleigh quotients ||analysis f||^2 / ||F||^2 for random unit f, drawn from
/// the interior subspace when one is given.
inline std::vector<double> rayleigh_quotients(const SamplingSet& E, const SpectralGrid& g, int trials,
                                              std::uint64_t seed, const FrameOptions& opts = {}) {
  const CMat psi = sampling_matrix(E, g);
  std::optional<CMat> U;
  if (opts.interior) U = interior_subspace(g, *opts.interior, opts.leak);
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  for (int t = 0; t < trials; ++t) {
    CVec u = U ? CVec(*U * detail::complex_normal(static_cast<std::size_t>(U->cols()), rng))
               : detail::complex_normal(g.size(), rng);
    u.normalize();
    out.push_back((psi * u).squaredNorm());
  }
  return out;
}

struct ReconstructionResult {
  BandlimitedSignal signal;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> history;
  std::string method;
};

/// Recovers F from samples by conjugate gradients on the frame operator.
/// With fewer samples than nodes the sample-side system Psi Psi^* c = v is
/// solved instead and u = Psi^* c (minimum-norm solution).
inline ReconstructionResult reconstruct(const SampleVector& v, GridPtr grid, double tol = 1e-10,
                                        int max_iter = 200) {
  const auto& g = *grid;
  require(tol >= 0.0, "tolerance must be nonnegative");
  require(max_iter >= 0, "max_iter must be nonnegative");
  if (g.size() > dense_capacity) throw CapacityError("spectral grid exceeds the dense capacity of 4096 nodes");
  const RVec sw = sqrt_weights(g);
  if (v.values.size() == 0 || v.values.isZero(0.0)) {
    ReconstructionResult r{BandlimitedSignal::zero(grid), 0, 0.0, true, {}, "zero-input"};
    return r;
  }
  const CMat psi = sampling_matrix(v.set, g);
  const bool sample_side = v.set.size() < g.size();
  const CMat M = sample_side ? CMat(psi * psi.adjoint()) : CMat(psi.adjoint() * psi);
  const RVec ev = detail::hermitian_eigenvalues(M);
  if (ev[0] < eigen_floor * std::max(1.0, ev[ev.size() - 1]))
    throw NotAFrameError("not a frame: minimum eigenvalue of the frame operator is below the floor");
  const CVec rhs = sample_side ? v.values : CVec(psi.adjoint() * v.values);
  auto cg = detail::conjugate_gradient([&](const CVec& x) { return CVec(M * x); }, rhs, tol, max_iter);
  CVec u = sample_side ? CVec(psi.adjoint() * cg.x) : cg.x;
  CVec F = u.cwiseQuotient(sw.cast<cplx>());
  ReconstructionResult r{BandlimitedSignal(std::move(grid), std::move(F)), cg.iterations, cg.residual,
                         cg.converged, std::move(cg.history),
                         sample_side ? "cg/sample-space" : "cg/spectral-space"};
  return r;
}

inline double relative_error(const BandlimitedSignal& approx, const BandlimitedSignal& exact) {
  require(approx.same_grid(exact), "signals live on different grids");
  BandlimitedSignal d(exact.grid_ptr(), approx.coeffs() - exact.coeffs());
  const double n = exact.norm();
  return n > 0.0 ? d.norm() / n : d.norm();
}

// ---------------------------------------------------------------------------
// Dilated and weighted frame inequalities

struct ChainResult {
  double lhs = 0.0;
  double mid = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

inline bool chain_holds(double lhs, double mid, double rhs) {
  const double slack = 1e-12 * std::max({1.0, std::abs(lhs), std::abs(mid), std::abs(rhs)});
  return lhs <= mid + slack && mid <= rhs + slack;
}

struct ThreeDilateConstants {
  double sqrtA = 0.0;
  double sqrtB = 0.0;
  std::array<double, 3> Bj{};
};

/// A^{1/2} = 1 / (K ||h||_2 (1 + 2^{-1/2} + 3^{-1/2})) from the l^2 balayage
/// bound applied to each dilate; B^{1/2} = sum_j j^{-1} B_j^{1/2} with B_j
/// the upper bound of E/j on the grid.
inline ThreeDilateConstants three_dilate_constants(const SamplingSet& E, const SpectralGrid& g, double K,
                                                   double h_norm) {
  require(K > 0.0 && h_norm > 0.0, "balayage constant and window norm must be positive");
  ThreeDilateConstants c;
  c.sqrtA = 1.0 / (K * h_norm * (1.0 + 1.0 / std::sqrt(2.0) + 1.0 / std::sqrt(3.0)));
  for (int j = 1; j <= 3; ++j) {
    c.Bj[static_cast<std::size_t>(j - 1)] = plancherel_polya_bound(E.dilated(1.0 / j), g);
    c.sqrtB += std::sqrt(c.Bj[static_cast<std::size_t>(j - 1)]) / j;
  }
  return c;
}

/// J_F(gamma) = F(gamma) + F(2 gamma) + F(3 gamma) on a nested grid, with
/// F = 0 outside the grid.
inline CVec three_dilate_sum(const BandlimitedSignal& f) {
  const auto& g = f.grid();
  if (g.kind != SpectralGrid::Kind::nested) throw std::invalid_argument("three-dilate check needs a nested grid");
  const int M = g.nested_half;
  const int side = 2 * M + 1;
  auto index = [&](int ki, int kj) -> std::optional<std::size_t> {
    if (std::abs(ki) > M || std::abs(kj) > M) return std::nullopt;
    const int row = g.dim == 2 ? kj + M : 0;
    return static_cast<std::size_t>(row * side + (ki + M));
  };
  CVec J = CVec::Zero(static_cast<Eigen::Index>(g.size()));
  for (std::size_t n = 0; n < g.size(); ++n) {
    const int ki = static_cast<int>(n % side) - M;
    const int kj = g.dim == 2 ? static_cast<int>(n / side) - M : 0;
    for (int j = 1; j <= 3; ++j)
      if (auto m = index(j * ki, j * kj)) J[static_cast<Eigen::Index>(n)] += f.coeffs()[static_cast<Eigen::Index>(*m)];
  }
  return J;
}

struct ThreeDilateResult {
  double lhs = 0.0;  // int |J_F|^2 / ||F||
  double mid = 0.0;  // sum_j j^{-1} (sum_x |f(x/j)|^2)^{1/2}
  double rhs = 0.0;  // ||F||
  double scaled_lhs = 0.0;  // A^{1/2} lhs
  double scaled_rhs = 0.0;  // B^{1/2} rhs
  bool holds = true;
};

inline ThreeDilateResult three_dilate_check(const BandlimitedSignal& f, const SamplingSet& E,
                                            const ThreeDilateConstants& c) {
  const CVec J = three_dilate_sum(f);
  ThreeDilateResult r;
  r.rhs = f.norm();
  if (r.rhs == 0.0) return r;
  double jj = 0.0;
  for (Eigen::Index k = 0; k < J.size(); ++k) jj += f.grid().weights[static_cast<std::size_t>(k)] * std::norm(J[k]);
  r.lhs = jj / r.rhs;
  for (int j = 1; j <= 3; ++j) {
    const SamplingSet Ej = E.dilated(1.0 / j);
    r.mid += std::sqrt(evaluate(f, std::span<const Point>(Ej.points())).squaredNorm()) / j;
  }
  r.scaled_lhs = c.sqrtA * r.lhs;
  r.scaled_rhs = c.sqrtB * r.rhs;
  r.holds = chain_holds(r.scaled_lhs, r.mid, r.scaled_rhs);
  return r;
}

/// A = 1 / (K ||h||_2^2) for the weighted inequality.
inline double weighted_lower_constant(double K, double h_norm) {
  require(K > 0.0 && h_norm > 0.0, "balayage constant and window norm must be positive");
  return 1.0 / (K * h_norm * h_norm);
}

/// lhs = A (int |F|^2 G)^2 / int |F|^2, mid = sum_x |(F G)^vee(x)|^2,
/// rhs = B1 ||G||_inf^2 int |F|^2.
inline ChainResult weighted_frame_check(const BandlimitedSignal& f, const RVec& G, const SamplingSet& E, double A,
                                        double B1) {
  const auto& g = f.grid();
  require(static_cast<std::size_t>(G.size()) == g.size(), "weight must be sampled on the signal grid");
  require(G.size() == 0 || G.minCoeff() >= 0.0, "weight must be nonnegative");
  ChainResult r;
  const double ff = f.norm_sq();
  if (ff == 0.0) return r;
  double fg = 0.0;
  for (Eigen::Index k = 0; k < G.size(); ++k) fg += g.weights[static_cast<std::size_t>(k)] * std::norm(f.coeffs()[k]) * G[k];
  r.lhs = A * fg * fg / ff;
  BandlimitedSignal fgs(f.grid_ptr(), f.coeffs().cwiseProduct(G.cast<cplx>()));
  r.mid = evaluate(fgs, std::span<const Point>(E.points())).squaredNorm();
  const double gmax = G.size() ? G.maxCoeff() : 0.0;
  r.rhs = B1 * gmax * gmax * ff;
  r.holds = chain_holds(r.lhs, r.mid, r.rhs);
  return r;
}

struct CoveringExperiment {
  CoveringResult covering;
  bool rho_ok = false;
  FrameReport report;
  bool predicted = false;   // covered and rho < 1/4
  bool confirmed = true;    // prediction holds (A > 0) or nothing predicted
};

/// Covering of R^d (sampled on `region`) by E + Lambda*, then frame bounds of
/// E for PW_{rho Lambda} on a grid with `nodes` per axis.
inline CoveringExperiment covering_frame_experiment(const SpectrumSet& lambda, const SamplingSet& E, double rho,
                                                    const Box& region, double resolution, int nodes,
                                                    const FrameOptions& opts = {}) {
  require(rho > 0.0, "rho must be positive");
  CoveringExperiment x;
  x.covering = covering_check(std::span<const Point>(E.points()), lambda.polar(), region, resolution);
  x.rho_ok = rho < 0.25;
  x.report = frame_bounds(E, build_grid(lambda.scaled(rho), nodes), opts);
  x.predicted = x.covering.covered && x.rho_ok;
  x.confirmed = !x.predicted || x.report.A > 0.0;
  return x;
}

/// Random separated set in a 1D window: consecutive gaps uniform in
/// [min_gap, max_gap], starting at a random offset in [lo, lo + max_gap).
inline SamplingSet random_separated_set(double min_gap, double max_gap, const Box& window, std::uint64_t seed) {
  require(window.dim == 1, "random separated sets are generated in 1D");
  require(0.0 < min_gap && min_gap <= max_gap, "need 0 < min_gap <= max_gap");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gap(min_gap, max_gap);
  std::vector<Point> pts;
  double x = window.lo[0] + std::uniform_real_distribution<double>(0.0, max_gap)(rng);
  while (x <= window.hi[0]) {
    pts.push_back(point1(x));
    x += gap(rng);
  }
  return SamplingSet(1, std::move(pts), window);
}

}  // namespace nusample
