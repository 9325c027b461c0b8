#include <random>

#include <gtest/gtest.h>

#include "nusample/balayage.hpp"

using namespace nusample;

namespace {

const SpectrumSet quarter = SpectrumSet::interval(0.25);

GridPtr enlarged(const SpectrumSet& L, int nodes = 256) { return make_grid(build_enlarged_grid(L, default_epsilon(L), nodes)); }

const BalayageProblem& half_lattice() {
  static const BalayageProblem P(uniform_grid(0.5, Box::interval(-20, 20)), enlarged(quarter));
  return P;
}

std::vector<Point> ysample(int n, std::uint64_t seed, double r = 15.0) {
  std::mt19937_64 rng(seed);
  std::vector<Point> ys;
  for (int i = 0; i < n; ++i) ys.push_back(point1(std::uniform_real_distribution<double>(-r, r)(rng)));
  return ys;
}

}  // namespace

TEST(Ingham, Normalization) {
  const InghamWindow h(0.025, 1);
  EXPECT_NEAR(h(point1(0.0)), 1.0, 1e-10);
  EXPECT_NEAR(h.profile_integral(), 1.0, 1e-6);
  const InghamWindow h2(0.1, 2);
  EXPECT_NEAR(h2({0.0, 0.0}), 1.0, 1e-10);
}

TEST(Ingham, CompactSpectrum) {
  const InghamWindow h(0.025, 1);
  EXPECT_EQ(h.hat(point1(1.01 * 0.025)), 0.0);
  EXPECT_EQ(h.hat(point1(-1.01 * 0.025)), 0.0);
  EXPECT_GT(h.hat(point1(0.0)), 0.0);
  for (double v : h.profile()) EXPECT_GE(v, 0.0);
}

TEST(Ingham, BoundedByOne) {
  const InghamWindow h(0.05, 1);
  for (int i = 0; i < 400; ++i) {
    const double v = h(point1(0.37 * i));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
}

TEST(Ingham, Decay) {
  // Quadrature of h on [20, 40] scaled by (1 + |x|)^4, with eps large enough
  // that this range lies well into the tail.
  const InghamWindow h(1.0, 1);
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = 20.0 + 0.1 * i;
    worst = std::max(worst, h(point1(x)) * std::pow(1.0 + x, 4));
  }
  EXPECT_LT(worst, 1e-2);
}

TEST(Ingham, NormMatchesDirectQuadrature) {
  const InghamWindow h(0.025, 1);
  double s = 0.0;
  const double dx = 0.5;
  for (int i = -4000; i <= 4000; ++i) s += std::pow(h(point1(i * dx)), 2) * dx;
  EXPECT_NEAR(h.norm_l2_sq(), s, 1e-3 * s);
}

TEST(Balayage, MemberOfE) {
  const SamplingSet E = uniform_grid(0.5, Box::interval(-20, 20));
  const auto s = solve_balayage(E, enlarged(quarter), point1(3.5), 1e-3);
  EXPECT_EQ(s.fit_residual, 0.0);
  EXPECT_EQ(s.l1_mass, 1.0);
  for (std::size_t j = 0; j < E.size(); ++j)
    EXPECT_EQ(s.coeffs[static_cast<Eigen::Index>(j)], E.points()[j][0] == 3.5 ? cplx(1.0) : cplx(0.0));
}

TEST(Balayage, LeastSquaresOracle) {
  const SamplingSet E = uniform_grid(0.5, Box::interval(-20, 20));
  const GridPtr g = enlarged(quarter);
  BalayageOptions o;
  o.reg = 0.0;
  const BalayageSolution s = BalayageProblem(E, g, o).solve(point1(0.13));
  // Independent least-squares solve of the same system.
  CMat phi(static_cast<Eigen::Index>(g->size()), static_cast<Eigen::Index>(E.size()));
  CVec b(phi.rows());
  for (Eigen::Index k = 0; k < phi.rows(); ++k) {
    b[k] = cis(-0.13 * g->nodes[static_cast<std::size_t>(k)][0]);
    for (Eigen::Index j = 0; j < phi.cols(); ++j)
      phi(k, j) = cis(-E.points()[static_cast<std::size_t>(j)][0] * g->nodes[static_cast<std::size_t>(k)][0]);
  }
  Eigen::BDCSVD<CMat> svd(phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const CVec a = svd.solve(b);
  const double oracle = (phi * a - b).cwiseAbs().maxCoeff();
  EXPECT_LE(oracle, 1e-6);
  EXPECT_LE(s.fit_residual, 1e-6);
  EXPECT_LE(s.l1_mass, 10.0);
  EXPECT_TRUE(s.feasible);
}

TEST(Balayage, DefaultRegularizationFeasible) {
  const BalayageSolution s = half_lattice().solve(point1(0.13));
  EXPECT_TRUE(s.feasible);
  EXPECT_LE(s.fit_residual, 1e-5);
  EXPECT_LE(s.l1_mass, 10.0);
  EXPECT_GE(s.l1_mass, 1.0 - 1e-6);
}

TEST(Balayage, UndersampledInfeasible) {
  const SpectrumSet L = SpectrumSet::interval(0.5);
  const SamplingSet E = uniform_grid(4.0, Box::interval(-40, 40));
  BalayageOptions o;
  o.tolerance = 1e-3;
  const BalayageProblem P(E, enlarged(L), o);
  EXPECT_FALSE(P.try_solve(point1(0.13)).feasible);
  EXPECT_THROW(P.solve(point1(0.13)), InfeasibleError);
  try {
    P.solve(point1(0.13));
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("0.13"), std::string::npos);
  }
}

TEST(Balayage, MeasureLinearity) {
  const auto& P = half_lattice();
  const Point ys[2] = {point1(0.2), point1(-1.7)};
  const cplx m1[2] = {cplx(1.0), cplx(0.0)};
  const cplx m2[2] = {cplx(0.0), cplx(1.0)};
  const cplx both[2] = {cplx(2.0, 1.0), cplx(-0.5)};
  const CVec b = P.measure_rhs(ys, both);
  EXPECT_NEAR((b - (cplx(2.0, 1.0) * P.measure_rhs(ys, m1) - 0.5 * P.measure_rhs(ys, m2))).norm(), 0.0, 1e-12);
}

TEST(Balayage, Memoized) {
  const BalayageProblem P(uniform_grid(0.5, Box::interval(-10, 10)), enlarged(quarter, 128));
  const auto a = P.solve(point1(0.31));
  const auto b = P.solve(point1(0.31));
  EXPECT_EQ(P.cache_size(), 1u);
  EXPECT_EQ(a.coeffs, b.coeffs);
}

TEST(BalayageConstant, SampleInsideE) {
  const auto& P = half_lattice();
  const std::vector<Point> ys{point1(0.0), point1(1.5), point1(-7.0)};
  EXPECT_EQ(balayage_constant(P, ys).K, 1.0);
}

TEST(BalayageConstant, StableUnderResampling) {
  const auto& P = half_lattice();
  const double k1 = balayage_constant(P, ysample(25, 1)).K;
  const double k2 = balayage_constant(P, ysample(25, 2)).K;
  EXPECT_GT(k1, 1.0);
  EXPECT_NEAR(k2, k1, 0.1 * k1);
}

TEST(BalayageConstant, PermutationInvariant) {
  std::vector<Point> pts = uniform_grid(0.5, Box::interval(-10, 10)).points();
  const GridPtr g = enlarged(quarter, 128);
  const BalayageProblem P(SamplingSet(1, pts, Box::interval(-10, 10)), g);
  std::reverse(pts.begin(), pts.end());
  std::swap(pts[3], pts[17]);
  const BalayageProblem Q(SamplingSet(1, pts, Box::interval(-10, 10)), g);
  const auto ys = ysample(4, 3, 5.0);
  EXPECT_NEAR(balayage_constant(P, ys).K, balayage_constant(Q, ys).K, 1e-8);
}

TEST(Identity, RandomTrigPolynomials) {
  const auto& P = half_lattice();
  const InghamWindow h(default_epsilon(quarter), 1);
  const auto ys = ysample(25, 5);
  for (int t = 0; t < 3; ++t) EXPECT_LE(fundamental_identity_residual(random_trig_polynomial(quarter, 5, 100 + t), P, h, ys), 1e-2);
}

TEST(Identity, ExactOnE) {
  const auto& P = half_lattice();
  const InghamWindow h(default_epsilon(quarter), 1);
  const std::vector<Point> ys{point1(0.0), point1(2.5), point1(-11.0)};
  EXPECT_LE(fundamental_identity_residual(random_trig_polynomial(quarter, 5, 4), P, h, ys), 1e-12);
}

TEST(Identity, ZeroPolynomial) {
  const auto& P = half_lattice();
  const InghamWindow h(default_epsilon(quarter), 1);
  const TrigPolynomial zero(quarter, {point1(0.1)}, {cplx(0.0)});
  EXPECT_EQ(fundamental_identity_residual(zero, P, h, ysample(3, 1)), 0.0);
}

TEST(LpBound, ZeroAndHomogeneity) {
  const auto& P = half_lattice();
  const InghamWindow h(default_epsilon(quarter), 1);
  const QuadratureRule rule = uniform_rule(Box::interval(-6, 6), 1.0);
  std::vector<cplx> zero(rule.nodes.size(), cplx(0.0)), k(rule.nodes.size()), k2(rule.nodes.size());
  EXPECT_EQ(lp_balayage_bound(P, h, rule, zero, 2.0).lhs, 0.0);
  for (std::size_t m = 0; m < k.size(); ++m) {
    k[m] = std::exp(-pi * rule.nodes[m][0] * rule.nodes[m][0] / 4.0);
    k2[m] = 2.0 * k[m];
  }
  for (double p : {1.5, 2.0, 3.0}) {
    const double a = lp_balayage_bound(P, h, rule, k, p).lhs;
    const double b = lp_balayage_bound(P, h, rule, k2, p).lhs;
    EXPECT_NEAR(b, std::pow(2.0, p) * a, 1e-12 * b);
  }
}

TEST(LpBound, RatioStableAcrossGaussians) {
  const auto& P = half_lattice();
  const InghamWindow h(default_epsilon(quarter), 1);
  const QuadratureRule rule = uniform_rule(Box::interval(-6, 6), 1.0);
  std::mt19937_64 rng(21);
  std::vector<double> ratios;
  for (int t = 0; t < 10; ++t) {
    const double c = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    const double w = std::uniform_real_distribution<double>(1.5, 2.5)(rng);
    std::vector<cplx> k(rule.nodes.size());
    for (std::size_t m = 0; m < k.size(); ++m) k[m] = std::exp(-pi * std::pow((rule.nodes[m][0] - c) / w, 2));
    ratios.push_back(lp_balayage_bound(P, h, rule, k, 2.0).ratio);
  }
  const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
  for (double r : ratios) {
    EXPECT_GT(r, 0.0);
    EXPECT_NEAR(r, mean, 0.2 * mean);
  }
}
