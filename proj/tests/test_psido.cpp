#include <gtest/gtest.h>

#include "nusample/psido.hpp"

using namespace nusample;

namespace {

KNSymbol two_term() {
  KNSymbol s;
  s.lambda = SpectrumSet::interval(0.25);
  s.terms.push_back(ingham_term(0.05, 0.05, 0.1, 0.0, 1.0));
  s.terms.push_back(ingham_term(-0.08, 0.04, 0.1, 3.0, cplx(0.5, 0.3)));
  return s;
}

SymbolTerm constant_term() {
  SymbolTerm t;
  t.a = [](double) { return cplx(1.0); };
  t.b = [](double) { return cplx(1.0); };
  t.eps = 0.0;
  t.beta = std::numeric_limits<double>::infinity();
  return t;
}

double bump_norm(double beta) {
  // Composite midpoint, 20000 cells.
  const int n = 20000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = -1.0 + (i + 0.5) * 2.0 / n;
    s += std::pow(unit_bump(u), 2) * 2.0 / n;
  }
  return std::sqrt(s * beta);
}

}  // namespace

TEST(SymbolEval, EmptyIsZero) {
  EXPECT_EQ(symbol_eval(KNSymbol{}, 1.3, 0.02), cplx(0.0));
}

TEST(SymbolEval, SingleTerm) {
  KNSymbol s;
  s.terms.push_back(ingham_term(0.1, 0.05, 0.1));
  const InghamWindow h(0.05, 1);
  for (double y : {0.0, 2.5, -7.0}) {
    const cplx want = h(point1(y)) * unit_bump(0.03 / 0.1) * cis(-y * 0.1);
    EXPECT_NEAR(std::abs(symbol_eval(s, y, 0.03) - want), 0.0, 1e-15);
  }
}

TEST(SymbolEval, Linear) {
  const KNSymbol s = two_term();
  KNSymbol a, b;
  a.terms = {s.terms[0]};
  b.terms = {s.terms[1]};
  for (double y : {-4.0, 0.5, 3.0})
    EXPECT_NEAR(std::abs(symbol_eval(s, y, 0.01) - symbol_eval(a, y, 0.01) - symbol_eval(b, y, 0.01)), 0.0, 1e-15);
}

TEST(ApplyKs, UnitSymbolIsFourierTransform) {
  KNSymbol s;
  s.terms.push_back(constant_term());
  const TimeGrid y(0.125, 64);
  const TimeSignal f = TimeSignal::sample(y, [](double t) { return cplx(g0(t)); });
  const FrequencyGrid gam(0.0625, 32);
  const TimeSignal K = apply_ks(s, f, gam);
  // The Gaussian is its own transform.
  for (std::size_t k = 0; k < gam.size(); ++k) EXPECT_NEAR(std::abs(K.values[k] - g0(gam.node(k))), 0.0, 1e-3);
}

TEST(ApplyKs, ZeroAndLinear) {
  const KNSymbol s = two_term();
  const TimeGrid y(0.125, 160);
  const FrequencyGrid gam(0.01, 20);
  EXPECT_TRUE(apply_ks(s, TimeSignal(y, CVec::Zero(321)), gam).values.isZero(0.0));
  const TimeSignal f = random_packet_signal(y, 3, 5.0, 1), g = random_packet_signal(y, 3, 5.0, 2);
  const cplx a(0.7, -1.2);
  const CVec lhs = apply_ks(s, TimeSignal(y, f.values + a * g.values), gam).values;
  const CVec rhs = apply_ks(s, f, gam).values + a * apply_ks(s, g, gam).values;
  EXPECT_LE((lhs - rhs).norm(), 1e-12 * rhs.norm());
}

TEST(ApplyKs, MatchesDirectQuadrature) {
  const KNSymbol s = two_term();
  const TimeGrid y(0.125, 160);
  const FrequencyGrid gam(0.02, 10);
  const TimeSignal f = random_packet_signal(y, 3, 5.0, 4);
  const TimeSignal K = apply_ks(s, f, gam);
  for (std::size_t k = 0; k < gam.size(); k += 3) {
    cplx want{0.0, 0.0};
    for (std::size_t i = 0; i < y.size(); ++i)
      want += symbol_eval(s, y.node(i), gam.node(k)) * f.values[i] * cis(-y.node(i) * gam.node(k)) * y.step;
    EXPECT_NEAR(std::abs(K.values[k] - want), 0.0, 1e-12);
  }
}

TEST(HsNorm, SingleTermFactorizes) {
  KNSymbol s;
  s.terms.push_back(ingham_term(0.05, 0.05, 0.1));
  const PsidoGrids G;
  const double want = InghamWindow(0.05, 1).norm_l2() * bump_norm(0.1);
  EXPECT_NEAR(hs_norm(s, G.y_hs, G.gamma), want, 1e-6);
}

TEST(HsNorm, ZeroAndTriangle) {
  const PsidoGrids G;
  EXPECT_EQ(hs_norm(KNSymbol{}, G.y_hs, G.gamma), 0.0);
  const KNSymbol s = two_term();
  KNSymbol a, b;
  a.terms = {s.terms[0]};
  b.terms = {s.terms[1]};
  EXPECT_LE(hs_norm(s, G.y_hs, G.gamma), hs_norm(a, G.y_hs, G.gamma) + hs_norm(b, G.y_hs, G.gamma) + 1e-12);
}

TEST(SymbolClass, TwoTermSymbolPasses) {
  const auto rep = validate_symbol_class(two_term());
  EXPECT_TRUE(rep.ok);
  ASSERT_EQ(rep.terms.size(), 2u);
  for (const auto& t : rep.terms) {
    EXPECT_TRUE(t.ball_in_lambda);
    EXPECT_TRUE(t.shifted_in_lambda);
    EXPECT_LT(t.leakage, 1e-8);
  }
  EXPECT_GT(rep.sup_sum, 0.0);
}

TEST(SymbolClass, FrequencyOnBoundaryFails) {
  KNSymbol s;
  s.lambda = SpectrumSet::interval(0.25);
  s.terms.push_back(ingham_term(0.25, 0.05, 0.1));
  const auto rep = validate_symbol_class(s);
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.terms[0].ball_in_lambda);
}

TEST(SymbolClass, HardTruncationLeaks) {
  KNSymbol s;
  s.lambda = SpectrumSet::interval(0.25);
  SymbolTerm t = ingham_term(0.0, 0.05, 0.1);
  t.a = [](double y) { return cplx(std::abs(y) <= 10.0 ? 1.0 : 0.0); };
  t.kind = "custom";
  s.terms.push_back(t);
  const auto rep = validate_symbol_class(s);
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.terms[0].support_ok);
  EXPECT_GT(rep.terms[0].leakage, 1e-3);
}

TEST(PsidoCheck, ZeroSignalAndSymbol) {
  const SamplingSet E = uniform_grid(0.5, Box::interval(-5, 5));
  const auto c = psido_constants(1.0, 1.0, 1.0);
  const TimeGrid y(0.125, 64);
  const auto r = psido_frame_check(two_term(), TimeSignal(y, CVec::Zero(129)), E, c);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.mid, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  const auto z = psido_frame_check(KNSymbol{}, random_packet_signal(y, 2, 3.0, 1), E, c);
  EXPECT_EQ(z.mid, 0.0);
  EXPECT_EQ(z.lhs, 0.0);
}

TEST(PsidoCheck, MiddleTermMatchesDirectSum) {
  const KNSymbol s = two_term();
  const SamplingSet E = uniform_grid(0.5, Box::interval(-5, 5));
  PsidoGrids G;
  G.gamma = FrequencyGrid(0.01, 20);
  const TimeGrid y(0.125, 160);
  const TimeSignal f = random_packet_signal(y, 3, 5.0, 11);
  const auto r = psido_frame_check(s, f, E, psido_constants(1.0, 1.0, 1.0), G);
  const TimeSignal K = apply_ks(s, f, G.gamma);
  double mid = 0.0;
  for (const auto& x : E.points()) {
    cplx v{0.0, 0.0};
    for (std::size_t k = 0; k < G.gamma.size(); ++k)
      v += K.values[k] * symbol_eval(s, x[0], G.gamma.node(k)) * cis(-x[0] * G.gamma.node(k)) * G.gamma.step;
    mid += std::norm(v);
  }
  EXPECT_NEAR(r.mid, mid, 1e-12 * mid);
  EXPECT_NEAR(r.ks_norm, K.norm(), 1e-14);
}

TEST(PsidoConstants, LowerConstant) {
  const auto c = psido_constants(2.0, 0.5, 3.0);
  EXPECT_DOUBLE_EQ(c.A, 1.0);
  EXPECT_THROW(psido_constants(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST(PacketSignal, Deterministic) {
  const TimeGrid y(0.125, 64);
  EXPECT_EQ(random_packet_signal(y, 3, 4.0, 9).values, random_packet_signal(y, 3, 4.0, 9).values);
  EXPECT_NE(random_packet_signal(y, 3, 4.0, 9).values, random_packet_signal(y, 3, 4.0, 10).values);
}
