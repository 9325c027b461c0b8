#pragma once

// Discretized Paley-Wiener space. A signal is its spectral coefficient
// vector F on a SpectralGrid over Lambda; time values are derived by
// quadrature of the inverse transform,
//
//   f(x) = sum_k w_k F(gamma_k) e^{2 pi i x . gamma_k}.
//
// On a midpoint grid with N nodes per axis the derived f is (anti)periodic
// in x with period N / (2 * half-width) per axis, so "one period" is the
// natural finite window for a random white-spectrum signal.

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "nusample/core.hpp"
#include "nusample/detail/parallel.hpp"
#include "nusample/geometry.hpp"

namespace nusample {

using GridPtr = std::shared_ptr<const SpectralGrid>;

inline GridPtr make_grid(SpectralGrid g) { return std::make_shared<const SpectralGrid>(std::move(g)); }

class BandlimitedSignal {
public:
  BandlimitedSignal(GridPtr grid, CVec coeffs) : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    require(grid_ != nullptr, "signal needs a grid");
    require(static_cast<std::size_t>(coeffs_.size()) == grid_->size(),
            "coefficient count must equal node count");
  }

  static BandlimitedSignal zero(GridPtr grid) {
    const auto n = static_cast<Eigen::Index>(grid->size());
    return BandlimitedSignal(std::move(grid), CVec::Zero(n));
  }

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const CVec& coeffs() const { return coeffs_; }
  CVec& coeffs() { return coeffs_; }

  /// sum_k w_k |F_k|^2
  double norm_sq() const {
    double s = 0.0;
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k) s += grid_->weights[k] * std::norm(coeffs_[k]);
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  bool same_grid(const BandlimitedSignal& o) const {
    return grid_ == o.grid_ || grid_->same_as(*o.grid_);
  }

private:
  GridPtr grid_;
  CVec coeffs_;
};

inline cplx evaluate(const BandlimitedSignal& f, const Point& x) {
  const auto& g = f.grid();
  cplx s{0.0, 0.0};
  for (std::size_t k = 0; k < g.size(); ++k) s += g.weights[k] * f.coeffs()[k] * cis(dot(x, g.nodes[k]));
  return s;
}

inline CVec evaluate(const BandlimitedSignal& f, std::span<const Point> xs) {
  CVec out(static_cast<Eigen::Index>(xs.size()));
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = evaluate(f, xs[i]); });
  return out;
}

inline cplx pw_inner(const BandlimitedSignal& f, const BandlimitedSignal& g) {
  if (!f.same_grid(g)) throw std::invalid_argument("pw_inner: signals live on different grids");
  const auto& w = f.grid().weights;
  cplx s{0.0, 0.0};
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * f.coeffs()[k] * std::conj(g.coeffs()[k]);
  return s;
}

inline BandlimitedSignal normalized(BandlimitedSignal f) {
  const double n = f.norm();
  if (n > 0.0) f.coeffs() /= n;
  return f;
}

namespace detail {
inline CVec complex_normal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double re = nd(rng);
    const double im = nd(rng);
    v[i] = cplx(re, im);
  }
  return v;
}
}  // namespace detail

/// White complex-Gaussian spectrum normalized to ||F|| = 1.
inline BandlimitedSignal random_pw_signal(GridPtr grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CVec c = detail::complex_normal(grid->size(), rng);
  return normalized(BandlimitedSignal(std::move(grid), std::move(c)));
}

inline BandlimitedSignal random_pw_signal(const SpectrumSet& lambda, int nodes, std::uint64_t seed) {
  return random_pw_signal(make_grid(build_grid(lambda, nodes)), seed);
}

/// Smooth compactly supported taper exp(1 - 1/(1 - t^2)) of the gauge t.
inline double spectral_taper(const SpectrumSet& lambda, const Point& g) {
  const double t = lambda.gauge(g);
  if (t >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

/// Random signal concentrated in time: a sum of `atoms` tapered kernels
/// centred at uniform points of `centers`, F = taper * sum_m c_m e_{-t_m}.
/// The taper is smooth, so each atom decays faster than any power.
inline BandlimitedSignal random_localized_pw_signal(GridPtr grid, const SpectrumSet& lambda,
                                                    const Box& centers, int atoms, std::uint64_t seed) {
  require(atoms >= 1, "need at least one atom");
  std::mt19937_64 rng(seed);
  CVec c = detail::complex_normal(static_cast<std::size_t>(atoms), rng);
  std::vector<Point> t(static_cast<std::size_t>(atoms));
  for (auto& p : t)
    for (int i = 0; i < centers.dim; ++i) p[i] = std::uniform_real_distribution<double>(centers.lo[i], centers.hi[i])(rng);
  CVec F(static_cast<Eigen::Index>(grid->size()));
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const Point& g = grid->nodes[k];
    cplx s{0.0, 0.0};
    for (int m = 0; m < atoms; ++m) s += c[m] * cis(-dot(t[static_cast<std::size_t>(m)], g));
    F[static_cast<Eigen::Index>(k)] = spectral_taper(lambda, g) * s;
  }
  return normalized(BandlimitedSignal(std::move(grid), std::move(F)));
}

/// Finite character sum p(x) = sum_j c_j e^{2 pi i x . lambda_j}.
struct TrigPolynomial {
  std::vector<Point> frequencies;
  std::vector<cplx> coefficients;

  TrigPolynomial() = default;
  TrigPolynomial(const SpectrumSet& lambda, std::vector<Point> freqs, std::vector<cplx> coeffs)
      : frequencies(std::move(freqs)), coefficients(std::move(coeffs)) {
    require(frequencies.size() == coefficients.size(), "frequency and coefficient counts differ");
    for (const auto& f : frequencies) require(lambda.contains(f), "trig polynomial frequency outside Lambda");
  }

  double coefficient_l1() const {
    double s = 0.0;
    for (const auto& c : coefficients) s += std::abs(c);
    return s;
  }
};

inline cplx eval_trigpoly(const TrigPolynomial& p, const Point& x) {
  cplx s{0.0, 0.0};
  for (std::size_t j = 0; j < p.frequencies.size(); ++j) s += p.coefficients[j] * cis(dot(x, p.frequencies[j]));
  return s;
}

/// Frequencies uniform in Lambda (rejection from the bounding box),
/// coefficients complex standard normal.
inline TrigPolynomial random_trig_polynomial(const SpectrumSet& lambda, int terms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Point b = lambda.bounding_half_widths();
  std::vector<Point> freqs;
  while (static_cast<int>(freqs.size()) < terms) {
    Point p{};
    for (int i = 0; i < lambda.dim(); ++i) p[i] = std::uniform_real_distribution<double>(-b[i], b[i])(rng);
    if (lambda.contains(p)) freqs.push_back(p);
  }
  CVec c = detail::complex_normal(static_cast<std::size_t>(terms), rng);
  return TrigPolynomial(lambda, std::move(freqs), std::vector<cplx>(c.data(), c.data() + c.size()));
}

}  // namespace nusample
