#pragma once

// Pseudo-differential operators with separable Kohn-Nirenberg symbols
//
//   s(y, gamma) = sum_j a_j(y) b_j(gamma) e^{-2 pi i y lambda_j},
//   (K_s f^)(gamma) = int s(y, gamma) f(y) e^{-2 pi i y gamma} dy,
//
// in d = 1, with a_j spectrally supported in [-eps_j, eps_j] and b_j
// supported in [-beta_j, beta_j].

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nusample/balayage.hpp"
#include "nusample/core.hpp"
#include "nusample/detail/parallel.hpp"
#include "nusample/frames.hpp"
#include "nusample/geometry.hpp"
#include "nusample/stft.hpp"

namespace nusample {

using FrequencyGrid = TimeGrid;

struct SymbolTerm {
  std::function<cplx(double)> a;
  std::function<cplx(double)> b;
  double lambda = 0.0;
  double eps = 0.0;   // claimed spectral radius of a
  double beta = 0.0;  // support radius of b (infinite when unbounded)
  std::string kind = "custom";
  double center = 0.0;
  cplx amplitude{1.0, 0.0};
};

struct KNSymbol {
  SpectrumSet lambda = SpectrumSet::interval(0.25);
  std::vector<SymbolTerm> terms;
};

/// a(y) = amplitude * h_eps(y - center) with the Ingham window of radius eps,
/// b(gamma) = bump(gamma / beta).
inline SymbolTerm ingham_term(double lambda, double eps, double beta, double center = 0.0,
                              cplx amplitude = cplx(1.0)) {
  require(eps > 0.0 && beta > 0.0, "term radii must be positive");
  auto h = std::make_shared<InghamWindow>(eps, 1);
  SymbolTerm t;
  t.a = [h, center, amplitude](double y) { return amplitude * (*h)(point1(y - center)); };
  t.b = [beta](double g) { return cplx(unit_bump(g / beta)); };
  t.lambda = lambda;
  t.eps = eps;
  t.beta = beta;
  t.kind = "ingham";
  t.center = center;
  t.amplitude = amplitude;
  return t;
}

inline cplx symbol_eval(const KNSymbol& s, double y, double gamma) {
  cplx v{0.0, 0.0};
  for (const auto& t : s.terms) v += t.a(y) * t.b(gamma) * cis(-y * t.lambda);
  return v;
}

namespace detail {
inline CMat tabulate_a(const KNSymbol& s, const TimeGrid& y) {
  CMat A(static_cast<Eigen::Index>(s.terms.size()), static_cast<Eigen::Index>(y.size()));
  for (std::size_t j = 0; j < s.terms.size(); ++j)
    parallel_for(y.size(), [&](std::size_t i) { A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = s.terms[j].a(y.node(i)); });
  return A;
}
inline CMat tabulate_b(const KNSymbol& s, const FrequencyGrid& g) {
  CMat B(static_cast<Eigen::Index>(s.terms.size()), static_cast<Eigen::Index>(g.size()));
  for (std::size_t j = 0; j < s.terms.size(); ++j)
    for (std::size_t k = 0; k < g.size(); ++k) B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = s.terms[j].b(g.node(k));
  return B;
}
}  // namespace detail

/// (K_s f^)(gamma_k) by quadrature over the signal grid.
inline TimeSignal apply_ks(const KNSymbol& s, const TimeSignal& f, const FrequencyGrid& gam) {
  const CMat A = detail::tabulate_a(s, f.grid);
  const CMat B = detail::tabulate_b(s, gam);
  CVec K = CVec::Zero(static_cast<Eigen::Index>(gam.size()));
  const double dy = f.grid.step;
  parallel_for(gam.size(), [&](std::size_t k) {
    const double g = gam.node(k);
    cplx total{0.0, 0.0};
    for (std::size_t j = 0; j < s.terms.size(); ++j) {
      const cplx bj = B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      if (bj == cplx(0.0)) continue;
      const double shift = s.terms[j].lambda + g;
      cplx acc{0.0, 0.0};
      for (std::size_t i = 0; i < f.grid.size(); ++i)
        acc += A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * f.values[static_cast<Eigen::Index>(i)] *
               cis(-f.grid.node(i) * shift);
      total += bj * acc;
    }
    K[static_cast<Eigen::Index>(k)] = total * dy;
  });
  return TimeSignal(gam, std::move(K));
}

/// ||s||_{L^2} by double quadrature.
inline double hs_norm(const KNSymbol& s, const TimeGrid& y, const FrequencyGrid& gam) {
  if (s.terms.empty()) return 0.0;
  const CMat A = detail::tabulate_a(s, y);
  const CMat B = detail::tabulate_b(s, gam);
  std::vector<double> rows(y.size(), 0.0);
  parallel_for(y.size(), [&](std::size_t i) {
    const double yi = y.node(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < gam.size(); ++k) {
      cplx v{0.0, 0.0};
      for (std::size_t j = 0; j < s.terms.size(); ++j)
        v += A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) *
             cis(-yi * s.terms[j].lambda);
      acc += std::norm(v);
    }
    rows[i] = acc;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return std::sqrt(total * y.step * gam.step);
}

struct TermReport {
  std::size_t index = 0;
  bool ball_in_lambda = false;     // closed ball B(lambda_j, eps_j) inside Lambda
  bool shifted_in_lambda = false;  // B(lambda_j, eps_j + beta_j) inside Lambda
  double leakage = 0.0;            // max |a^| beyond eps_j relative to max |a^|
  bool support_ok = false;
  double a_norm = 0.0;
  double b_norm = 0.0;
};

struct SymbolClassReport {
  std::vector<TermReport> terms;
  double sup_sum = 0.0;   // max over the grid of sum_j |a_j b_j|
  double l2_bound = 0.0;  // sum_j ||a_j|| ||b_j||
  bool ok = true;
  std::vector<std::string> violations;
};

struct SymbolValidationOptions {
  TimeGrid y{0.5, 4000};         // time grid for the leakage transform
  FrequencyGrid gamma{1e-3, 500};
  double leakage_tol = 1e-8;
  double margin = 0.02;          // leakage measured beyond (1 + margin) eps_j
  int leakage_nodes = 200;
};

/// Interval [c - r, c + r] inside Lambda (d = 1), by containment of both ends
/// in the closed set.
inline bool interval_inside(const SpectrumSet& lambda, double c, double r) {
  return lambda.contains(point1(c - r)) && lambda.contains(point1(c + r));
}

inline SymbolClassReport validate_symbol_class(const KNSymbol& s, const SymbolValidationOptions& o = {}) {
  SymbolClassReport rep;
  require(s.lambda.dim() == 1, "symbol class validation is implemented for d = 1");
  const CMat A = detail::tabulate_a(s, o.y);
  const CMat B = detail::tabulate_b(s, o.gamma);
  for (std::size_t j = 0; j < s.terms.size(); ++j) {
    const auto& t = s.terms[j];
    TermReport r;
    r.index = j;
    r.ball_in_lambda = t.eps > 0.0 && interval_inside(s.lambda, t.lambda, t.eps);
    r.shifted_in_lambda = std::isfinite(t.beta) && interval_inside(s.lambda, t.lambda, t.eps + t.beta);
    // DFT of the sampled a_j; leakage beyond the claimed radius.
    const double lo = (1.0 + o.margin) * t.eps;
    const double hi = 1.0 / (2.0 * o.y.step);
    double peak = 0.0;
    std::vector<double> outside(static_cast<std::size_t>(o.leakage_nodes), 0.0);
    auto transform = [&](double xi) {
      cplx acc{0.0, 0.0};
      for (std::size_t i = 0; i < o.y.size(); ++i) acc += A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * cis(-o.y.node(i) * xi);
      return std::abs(acc) * o.y.step;
    };
    for (double xi : {0.0, 0.5 * t.eps}) peak = std::max(peak, transform(xi));
    parallel_for(outside.size(), [&](std::size_t q) {
      const double xi = lo + (hi - lo) * static_cast<double>(q) / std::max(1, o.leakage_nodes - 1);
      outside[q] = std::max(transform(xi), transform(-xi));
    });
    const double worst = *std::max_element(outside.begin(), outside.end());
    r.leakage = peak > 0.0 ? worst / peak : 0.0;
    r.support_ok = r.leakage < o.leakage_tol;
    r.a_norm = std::sqrt(A.row(static_cast<Eigen::Index>(j)).squaredNorm() * o.y.step);
    r.b_norm = std::sqrt(B.row(static_cast<Eigen::Index>(j)).squaredNorm() * o.gamma.step);
    rep.l2_bound += r.a_norm * r.b_norm;
    if (!r.ball_in_lambda) rep.violations.push_back("term " + std::to_string(j) + ": ball B(lambda_j, eps_j) not inside Lambda");
    if (!r.shifted_in_lambda)
      rep.violations.push_back("term " + std::to_string(j) + ": shifted support B(lambda_j, eps_j + beta_j) not inside Lambda");
    if (!r.support_ok)
      rep.violations.push_back("term " + std::to_string(j) + ": spectrum of a_j leaks beyond eps_j (" + std::to_string(r.leakage) + ")");
    rep.terms.push_back(r);
  }
  const Eigen::MatrixXd absA = A.cwiseAbs();
  const Eigen::MatrixXd absB = B.cwiseAbs();
  for (std::size_t j = 0; j < s.terms.size(); ++j)
    rep.sup_sum += absA.row(static_cast<Eigen::Index>(j)).maxCoeff() * absB.row(static_cast<Eigen::Index>(j)).maxCoeff();
  if (!std::isfinite(rep.sup_sum)) rep.violations.push_back("sum_j |a_j b_j| is not bounded on the grid");
  rep.ok = rep.violations.empty();
  return rep;
}

struct PsidoConstants {
  double K = 0.0;       // measured balayage constant
  double h_norm = 0.0;  // ||h||_2
  double A = 0.0;       // 1 / (K ||h||_2)^2
  double B = 0.0;       // Plancherel-Polya bound of E on Lambda
};

inline PsidoConstants psido_constants(double K, double h_norm, double B) {
  require(K > 0.0 && h_norm > 0.0 && B > 0.0, "constants must be positive");
  PsidoConstants c;
  c.K = K;
  c.h_norm = h_norm;
  c.A = 1.0 / ((K * h_norm) * (K * h_norm));
  c.B = B;
  return c;
}

struct PsidoGrids {
  FrequencyGrid gamma{1e-3, 200};  // must cover the supports of the b_j
  TimeGrid y_hs{1.0, 2000};        // wide grid for ||s||
};

struct PsidoCheck {
  double lhs = 0.0;
  double mid = 0.0;
  double rhs = 0.0;
  double ks_norm = 0.0;  // ||K_s f^||_2
  double f_norm = 0.0;
  double s_norm = 0.0;
  bool holds = true;
};

/// Frame-inequality chain for one symbol and sampling set; the symbol tables at E,
/// the b_j on the frequency grid and ||s|| are computed once.
class PsidoChecker {
public:
  PsidoChecker(KNSymbol s, SamplingSet E, PsidoConstants c, PsidoGrids grids = {})
      : s_(std::move(s)), E_(std::move(E)), c_(c), grids_(grids) {
    require(E_.dim() == 1, "psido frame check is implemented for d = 1");
    s_norm_ = hs_norm(s_, grids_.y_hs, grids_.gamma);
    const auto ng = grids_.gamma.size();
    kernel_ = CMat::Zero(static_cast<Eigen::Index>(E_.size()), static_cast<Eigen::Index>(ng));
    const CMat B = detail::tabulate_b(s_, grids_.gamma);
    parallel_for(E_.size(), [&](std::size_t i) {
      const double x = E_.points()[i][0];
      for (std::size_t j = 0; j < s_.terms.size(); ++j) {
        const cplx aj = s_.terms[j].a(x) * cis(-x * s_.terms[j].lambda);
        for (std::size_t k = 0; k < ng; ++k)
          kernel_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) += aj * B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      }
      for (std::size_t k = 0; k < ng; ++k)
        kernel_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) *= cis(-x * grids_.gamma.node(k)) * grids_.gamma.step;
    });
  }

  double s_norm() const { return s_norm_; }
  const PsidoConstants& constants() const { return c_; }

  /// lhs = A ||K_s f^||^4 / ||f||^2, mid = sum_x |int K_s f^(gamma)
  /// s(x, gamma) e^{-2 pi i x gamma} dgamma|^2, rhs = B ||s||^2 ||K_s f^||^2.
  PsidoCheck check(const TimeSignal& f) const {
    PsidoCheck r;
    r.f_norm = f.norm();
    r.s_norm = s_norm_;
    if (r.f_norm == 0.0 || s_.terms.empty()) return r;
    const TimeSignal K = apply_ks(s_, f, grids_.gamma);
    r.ks_norm = K.norm();
    r.mid = (kernel_ * K.values).squaredNorm();
    const double k2 = r.ks_norm * r.ks_norm;
    r.lhs = c_.A * k2 * k2 / (r.f_norm * r.f_norm);
    r.rhs = c_.B * s_norm_ * s_norm_ * k2;
    r.holds = chain_holds(r.lhs, r.mid, r.rhs);
    return r;
  }

private:
  KNSymbol s_;
  SamplingSet E_;
  PsidoConstants c_;
  PsidoGrids grids_;
  double s_norm_ = 0.0;
  CMat kernel_;  // s(x, gamma_k) e^{-2 pi i x gamma_k} dgamma
};

inline PsidoCheck psido_frame_check(const KNSymbol& s, const TimeSignal& f, const SamplingSet& E,
                                    const PsidoConstants& c, const PsidoGrids& grids = {}) {
  return PsidoChecker(s, E, c, grids).check(f);
}

/// Random L^2 test signal: a sum of `atoms` modulated Gaussians with centres
/// in [-spread, spread], widths in [0.5, 2] and frequencies in [-0.5, 0.5].
inline TimeSignal random_packet_signal(const TimeGrid& grid, int atoms, double spread, std::uint64_t seed) {
  require(atoms >= 1, "need at least one atom");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uc(-spread, spread), uw(0.5, 2.0), uf(-0.5, 0.5);
  std::normal_distribution<double> nd;
  struct Atom {
    double c, w, f;
    cplx amp;
  };
  std::vector<Atom> at;
  for (int m = 0; m < atoms; ++m) {
    const double c = uc(rng), w = uw(rng), fr = uf(rng);
    const double re = nd(rng), im = nd(rng);
    at.push_back({c, w, fr, cplx(re, im)});
  }
  return TimeSignal::sample(grid, [&](double t) {
    cplx v{0.0, 0.0};
    for (const auto& a : at) v += a.amp * std::exp(-pi * (t - a.c) * (t - a.c) / (a.w * a.w)) * cis(a.f * t);
    return v;
  });
}

}  // namespace nusample
