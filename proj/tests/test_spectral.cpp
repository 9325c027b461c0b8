#include <gtest/gtest.h>

#include "nusample/spectral.hpp"

using namespace nusample;

namespace {

GridPtr interval_grid(int nodes) { return make_grid(build_grid(SpectrumSet::interval(0.5), nodes)); }

BandlimitedSignal ones(const GridPtr& g) {
  return BandlimitedSignal(g, CVec::Ones(static_cast<Eigen::Index>(g->size())));
}

}  // namespace

TEST(Evaluate, ConstantSpectrumAtOrigin) { EXPECT_NEAR(std::abs(evaluate(ones(interval_grid(512)), point1(0.0)) - 1.0), 0.0, 1e-13); }

TEST(Evaluate, SincZeroAtOne) { EXPECT_LE(std::abs(evaluate(ones(interval_grid(512)), point1(1.0))), 1e-2); }

TEST(Evaluate, SincMatchesClosedForm) {
  const auto f = ones(interval_grid(512));
  for (double x : {0.3, 2.7, -5.1}) EXPECT_NEAR(evaluate(f, point1(x)).real(), sinc(x), 1e-4);
}

TEST(Evaluate, SingleNodeSpike) {
  const auto g = interval_grid(64);
  CVec F = CVec::Zero(64);
  F[10] = 1.0 / g->weights[10];
  const BandlimitedSignal f(g, F);
  for (double x : {0.0, 0.7, -3.2}) {
    const cplx v = evaluate(f, point1(x));
    EXPECT_NEAR(std::abs(v - cis(x * g->nodes[10][0])), 0.0, 1e-12);
  }
}

TEST(RandomSignal, UnitNormAndDeterminism) {
  const SpectrumSet L = SpectrumSet::interval(0.5);
  for (std::uint64_t s : {1u, 2u, 99u}) EXPECT_NEAR(random_pw_signal(L, 64, s).norm(), 1.0, 1e-12);
  EXPECT_EQ(random_pw_signal(L, 64, 3).coeffs(), random_pw_signal(L, 64, 3).coeffs());
  EXPECT_NE(random_pw_signal(L, 64, 3).coeffs(), random_pw_signal(L, 64, 4).coeffs());
}

TEST(RandomSignal, TwoDimensional) {
  const auto f = random_pw_signal(SpectrumSet::ball(2, 1.0), 16, 5);
  EXPECT_NEAR(f.norm(), 1.0, 1e-12);
}

TEST(PwInner, Properties) {
  const auto g = interval_grid(64);
  const auto f = random_pw_signal(g, 1), h = random_pw_signal(g, 2);
  EXPECT_NEAR(pw_inner(f, f).real(), f.norm_sq(), 1e-14);
  EXPECT_NEAR(pw_inner(f, f).imag(), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(pw_inner(f, h) - std::conj(pw_inner(h, f))), 0.0, 1e-14);
  CVec a = CVec::Zero(64), b = CVec::Zero(64);
  a[3] = 1.0;
  b[7] = 2.0;
  EXPECT_EQ(pw_inner(BandlimitedSignal(g, a), BandlimitedSignal(g, b)), cplx(0.0));
}

TEST(PwInner, DifferentGridsRejected) {
  EXPECT_THROW(pw_inner(random_pw_signal(interval_grid(64), 1), random_pw_signal(interval_grid(32), 1)),
               std::invalid_argument);
}

TEST(TrigPoly, SingleCharacter) {
  const SpectrumSet L = SpectrumSet::interval(0.25);
  const TrigPolynomial p(L, {point1(0.2)}, {cplx(1.0)});
  for (double x : {0.0, 1.3, -7.0}) {
    EXPECT_NEAR(std::abs(eval_trigpoly(p, point1(x)) - cis(0.2 * x)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(eval_trigpoly(p, point1(x))), 1.0, 1e-15);
  }
}

TEST(TrigPoly, PairAtOrigin) {
  const TrigPolynomial p(SpectrumSet::interval(0.25), {point1(0.25), point1(-0.25)}, {cplx(1.0), cplx(1.0)});
  EXPECT_NEAR(std::abs(eval_trigpoly(p, point1(0.0)) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval_trigpoly(p, point1(1.0))), 0.0, 1e-15);
}

TEST(TrigPoly, BoundedByCoefficientMass) {
  const TrigPolynomial p = random_trig_polynomial(SpectrumSet::interval(0.25), 5, 8);
  for (int i = -100; i <= 100; ++i) EXPECT_LE(std::abs(eval_trigpoly(p, point1(0.37 * i))), p.coefficient_l1() + 1e-12);
}

TEST(TrigPoly, FrequencyOutsideRejected) {
  EXPECT_THROW(TrigPolynomial(SpectrumSet::interval(0.25), {point1(0.3)}, {cplx(1.0)}), std::invalid_argument);
}

TEST(LocalizedSignal, ConcentratedNearCenters) {
  const SpectrumSet L = SpectrumSet::interval(0.25);
  const auto f = random_localized_pw_signal(make_grid(build_grid(L, 128)), L, Box::interval(-2, 2), 3, 4);
  EXPECT_NEAR(f.norm(), 1.0, 1e-12);
  double inner = 0.0, outer = 0.0;
  for (int i = 0; i < 400; ++i) {
    inner = std::max(inner, std::abs(evaluate(f, point1(-2.0 + 0.01 * i))));
    outer = std::max(outer, std::abs(evaluate(f, point1(60.0 + 0.1 * i))));
  }
  EXPECT_LT(outer, 1e-3 * inner);
}
