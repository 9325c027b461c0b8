#include <random>

#include <gtest/gtest.h>

#include "nusample/psido.hpp"
#include "nusample/stft.hpp"

using namespace nusample;

namespace {

const TimeGrid grid(0.125, 64);
const TimeFrequencyGrid tf;

std::vector<double> slice() {
  std::vector<double> z;
  for (int i = -4; i <= 4; ++i) z.push_back(i * 0.125);
  return z;
}

TimeSignal packet(const TimeGrid& G, double shift, double mod) {
  return TimeSignal::sample(G, [=](double t) { return g0(t - shift) * cis(mod * t); });
}

}  // namespace

TEST(GaussianWindow, Values) {
  EXPECT_DOUBLE_EQ(g0(0.0), std::pow(2.0, 0.25));
  const WindowFunction g = gaussian_window(grid);
  EXPECT_NEAR(g.norm(), 1.0, 1e-12);
  EXPECT_NEAR(TimeSignal::sample(grid, [](double t) { return cplx(g0(t)); }).norm(), 1.0, 1e-8);
  for (double t : {0.3, 1.7, 2.9}) EXPECT_EQ(g0(t), g0(-t));
  EXPECT_THROW(gaussian_window(grid, 2), std::invalid_argument);
}

TEST(Stft, SelfInnerProduct) {
  const WindowFunction g = gaussian_window(grid);
  const CMat V = stft(g.samples, g, tf);
  EXPECT_NEAR(std::abs(V(tf.x_half, tf.w_half) - 1.0), 0.0, 1e-6);
}

TEST(Stft, ZeroSignal) {
  const WindowFunction g = gaussian_window(grid);
  EXPECT_TRUE(stft(TimeSignal(grid, CVec::Zero(129)), g, tf).isZero(0.0));
}

TEST(Stft, CauchySchwarz) {
  const WindowFunction g = gaussian_window(grid);
  const TimeSignal f = random_packet_signal(grid, 3, 4.0, 2);
  const CMat V = stft(f, g, tf);
  EXPECT_LE(V.cwiseAbs().maxCoeff(), f.norm() * g.norm() * (1 + 1e-12));
}

TEST(Stft, MatchesPointEvaluation) {
  const WindowFunction g = gaussian_window(grid);
  const TimeSignal f = random_packet_signal(grid, 2, 3.0, 9);
  const CMat V = stft(f, g, tf);
  for (std::size_t m : {0u, 5u, 12u})
    for (std::size_t n : {1u, 8u, 16u})
      EXPECT_NEAR(std::abs(V(m, n) - stft_at(f, g, tf.x(m), tf.w(n))), 0.0, 1e-13);
}

TEST(Stft, IncommensurateGridRejected) {
  const WindowFunction g = gaussian_window(grid);
  EXPECT_THROW(stft(g.samples, g, TimeFrequencyGrid(0.3, 4, 0.5, 4)), std::invalid_argument);
}

TEST(Isometry, GaussianSelf) {
  const WindowFunction g = gaussian_window(grid);
  EXPECT_LE(isometry_check(g.samples, g, tf), 1e-3);
}

TEST(Isometry, HomogeneousAndZero) {
  const WindowFunction g = gaussian_window(grid);
  const TimeSignal f = packet(grid, 0.5, 0.25);
  EXPECT_NEAR(isometry_check(cplx(3.0) * f, g, tf), isometry_check(f, g, tf), 1e-12);
  EXPECT_EQ(isometry_check(TimeSignal(grid, CVec::Zero(129)), g, tf), 0.0);
}

TEST(Isometry, RefinementImproves) {
  const TimeSignal f = packet(grid, 0.5, 0.25);
  const double a = isometry_check(f, gaussian_window(grid), tf);
  const double b = isometry_check(packet(grid.refined(), 0.5, 0.25), gaussian_window(grid.refined()), tf.refined());
  EXPECT_LE(a, 1e-3);
  EXPECT_TRUE(b == 0.0 || a / b >= 2.0) << a << " " << b;
}

TEST(TfIdentity, GaussianSelf) {
  const WindowFunction g = gaussian_window(grid);
  EXPECT_LE(tf_identity_check(g.samples, g, tf), 1e-3);
}

TEST(TfIdentity, ZeroPhaseAtOrigin) {
  const WindowFunction g = gaussian_window(grid);
  const TimeSignal f = packet(grid, 0.5, 0.25);
  const TimeGrid nu = transform_grid(grid);
  const TimeSignal F = fourier_transform(f, nu);
  const TimeSignal G = fourier_transform(g.samples, nu);
  cplx vg{0.0, 0.0};
  for (std::size_t i = 0; i < nu.size(); ++i) vg += F.values[i] * std::conj(G.values[i]) * nu.step;
  EXPECT_NEAR(std::abs(stft(f, g, tf)(tf.x_half, tf.w_half) - vg), 0.0, 1e-8);
}

TEST(TfIdentity, ZeroSignal) {
  const WindowFunction g = gaussian_window(grid);
  EXPECT_EQ(tf_identity_check(TimeSignal(grid, CVec::Zero(129)), g, tf), 0.0);
}

TEST(TfIdentity, RefinementImproves) {
  const double a = tf_identity_check(packet(grid, 0.5, 0.25), gaussian_window(grid), tf);
  const double b = tf_identity_check(packet(grid.refined(), 0.5, 0.25), gaussian_window(grid.refined()), tf.refined());
  EXPECT_LE(a, 1e-3);
  EXPECT_GE(a / b, 2.0);
}

TEST(ClosedForm, GaussianSelf) {
  const WindowFunction g = gaussian_window(grid);
  const auto z = slice();
  const auto r = stft_fourier_closed_form(g.samples, g, tf, z, z);
  EXPECT_LE(r.deviation, 1e-2);
}

TEST(Feichtinger, RegressionValue) {
  const WindowFunction g = gaussian_window(grid);
  EXPECT_NEAR(feichtinger_norm(g.samples, tf), 2.0, 1e-6);
}

TEST(Feichtinger, ZeroAndHomogeneity) {
  const TimeSignal f = packet(grid, 1.0, -0.5);
  EXPECT_EQ(feichtinger_norm(TimeSignal(grid, CVec::Zero(129)), tf), 0.0);
  const cplx a(1.5, -2.0);
  EXPECT_NEAR(feichtinger_norm(a * f, tf), std::abs(a) * feichtinger_norm(f, tf), 1e-12);
}

TEST(GaussianSum, IntegerLatticePoisson) {
  std::vector<Point> Z;
  for (int n = -40; n <= 40; ++n) Z.push_back(point1(n));
  const auto [C, u] = gaussian_sum_constant(Z);
  EXPECT_NEAR(C, std::sqrt(pi) * (1 + 2 * std::exp(-pi * pi)), 1e-6);
  EXPECT_NEAR(u - std::round(u), 0.0, 1e-9);
}

TEST(PwFrame, ZeroSignal) {
  const SpectrumSet L = SpectrumSet::interval(0.25);
  const GridPtr g = make_grid(build_grid(L, 64));
  const auto r = pw_stft_frame_check(BandlimitedSignal::zero(g), uniform_grid(0.5, Box::interval(-5, 5)));
  EXPECT_EQ(r.energy, 0.0);
}

TEST(PwFrame, PlancherelOracleAndBound) {
  const SpectrumSet L = SpectrumSet::interval(0.25);
  const GridPtr g = make_grid(build_grid(L, 64));
  const SamplingSet E = uniform_grid(0.5, Box::interval(-20, 20));
  const auto f = random_localized_pw_signal(g, L, Box::interval(-5, 5), 4, 3);
  const auto r = pw_stft_frame_check(f, E);
  double oracle = 0.0;
  for (const auto& x : E.points())
    for (int i = -32; i <= 32; ++i) oracle += std::norm(evaluate(f, point1(x[0] + i * 0.125))) * std::pow(g0(i * 0.125), 2) * 0.125;
  EXPECT_NEAR(r.energy, oracle, 1e-8 * oracle);
  EXPECT_GT(r.ratio, 0.0);
  EXPECT_LE(r.ratio, r.B_formula);
  EXPECT_TRUE(r.holds);
}

TEST(Gabor, EmptyAndSingleAtom) {
  const WindowFunction g = gaussian_window(grid);
  const TimeSignal f = random_packet_signal(grid, 2, 3.0, 1);
  EXPECT_TRUE(gabor_frame_operator(f, g, PhaseSpaceSamples{}).values.isZero(0.0));
  PhaseSpaceSamples one;
  one.points.push_back({0.0, 0.0});
  const TimeSignal Sf = gabor_frame_operator(f, g, one);
  const cplx c = g.samples.values.dot(f.values) * grid.step;  // <f, g>
  EXPECT_NEAR((Sf.values - c * g.samples.values).norm(), 0.0, 1e-12);
}

TEST(Gabor, Hermitian) {
  const WindowFunction g = gaussian_window(grid);
  const PhaseSpaceSamples P = jittered(gabor_lattice(0.5, 0.5, 8, 4), 0.1, 3);
  const TimeSignal f = random_packet_signal(grid, 3, 4.0, 5), h = random_packet_signal(grid, 3, 4.0, 6);
  const cplx a = h.values.dot(gabor_frame_operator(f, g, P).values);
  const cplx b = gabor_frame_operator(h, g, P).values.dot(f.values);
  EXPECT_LE(std::abs(a - b), 1e-10 * std::abs(a));
}

TEST(Gabor, CoefficientsAreStftValues) {
  const WindowFunction g = gaussian_window(grid);
  const TimeSignal f = random_packet_signal(grid, 3, 4.0, 5);
  const PhaseSpaceSamples P = jittered(gabor_lattice(0.5, 0.5, 2, 2), 0.1, 8);
  const CVec c = gabor_coefficients(f, g, P);
  for (std::size_t n = 0; n < P.points.size(); n += 7) {
    const auto& p = P.points[n];
    if (std::abs(p.s / grid.step - std::round(p.s / grid.step)) > 1e-9) continue;
    EXPECT_NEAR(std::abs(c[n] - stft_at(f, g, p.s, p.sigma)), 0.0, 1e-12);
  }
}

TEST(Gabor, ReconstructLattice) {
  const WindowFunction g = gaussian_window(grid);
  const TimeSignal f = random_packet_signal(grid, 3, 4.0, 7);
  const auto r = gabor_reconstruct(f, g, gabor_lattice(0.5, 0.5, 8, 4));
  EXPECT_LE(r.error, 1e-4);
  EXPECT_TRUE(r.converged);
}

TEST(Gabor, ReconstructJittered) {
  const WindowFunction g = gaussian_window(grid);
  const TimeSignal f = random_packet_signal(grid, 3, 4.0, 7);
  EXPECT_LE(gabor_reconstruct(f, g, jittered(gabor_lattice(0.5, 0.5, 8, 4), 0.1, 3)).error, 1e-3);
}

TEST(Gabor, ZeroSignal) {
  const WindowFunction g = gaussian_window(grid);
  const auto r = gabor_reconstruct(TimeSignal(grid, CVec::Zero(129)), g, gabor_lattice(0.5, 0.5, 8, 4));
  EXPECT_TRUE(r.signal.values.isZero(0.0));
}

TEST(Gabor, SparseLatticeNotAFrame) {
  const WindowFunction g = gaussian_window(grid);
  const auto P = gabor_lattice(1.5, 1.5, 8, 4);
  EXPECT_GT(gabor_frame_bounds(grid, g, P).condition, 1e6);
  EXPECT_THROW(gabor_reconstruct(random_packet_signal(grid, 3, 4.0, 7), g, P), NotAFrameError);
}

TEST(Gabor, SeparationNeedsTwoPoints) {
  PhaseSpaceSamples P;
  P.points.push_back({0.0, 0.0});
  EXPECT_THROW(P.separation(), std::invalid_argument);
  EXPECT_NEAR(gabor_lattice(0.5, 0.25, 2, 2).separation(), 0.25, 1e-15);
}

TEST(SupportPair, TransformVanishesOutsideBox) {
  const TimeGrid G(0.125, 128);
  const auto pr = example_support_pair(G, 1.0, 2.0);
  const TimeFrequencyGrid T(0.5, 16, 0.125, 32);
  const std::vector<double> zeta{0.0, 0.5}, inside{0.0, 1.0}, outside{2.5, -3.0};
  const auto in = stft_fourier_closed_form(pr.f, pr.g, T, zeta, inside);
  const auto out = stft_fourier_closed_form(pr.f, pr.g, T, zeta, outside);
  // Transform size at the origin: |f(0) g^(0)|.
  const double scale = std::abs(pr.f.at(0) * pr.g.samples.values.sum() * G.step);
  EXPECT_LE(in.deviation, 1e-3 * scale);
  EXPECT_LE(out.deviation, 1e-3 * scale);
  EXPECT_EQ(pr.f.at(static_cast<int>(2.5 / 0.125)), cplx(0.0));
}
