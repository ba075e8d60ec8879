#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "fatou/siegel.hpp"

using namespace fatou;

namespace {

// Linearizer by brute-force series composition: expand
// sum_{j<n} c_j (lambda z + z^3)^j as a truncated polynomial and solve for
// c_n from [z^n]. Shares nothing with the closed-form recursion.
std::vector<Complex> composed_linearizer(Complex lambda, int N) {
  std::vector<Complex> c(N + 1);
  c[1] = 1.0;
  auto mul = [N](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> r(N + 1);
    for (int i = 0; i <= N; ++i)
      for (int j = 0; i + j <= N; ++j) r[i + j] += a[i] * b[j];
    return r;
  };
  std::vector<Complex> step(N + 1);
  step[1] = lambda;
  if (N >= 3) step[3] = 1.0;
  for (int n = 2; n <= N; ++n) {
    std::vector<Complex> power = step, acc(N + 1);
    for (int j = 1; j < n; ++j) {
      for (int i = 0; i <= N; ++i) acc[i] += c[j] * power[i];
      power = mul(power, step);
    }
    c[n] = acc[n] / (lambda - std::pow(lambda, n));
  }
  return c;
}

}  // namespace

TEST(Linearizer, ThirdCoefficientByHand) {
  const LinearizerSeries eta = build_linearizer(kGoldenMean, 10);
  const Complex l = eta.lambda;
  // [z^3]: lambda^3 c3 + 1 = lambda c3.
  EXPECT_NEAR(std::abs(eta.coeff(3) - 1.0 / (l - l * l * l)), 0.0, 1e-14);
  // [z^5]: lambda^5 c5 + 3 lambda^2 c3 = lambda c5.
  EXPECT_NEAR(std::abs(eta.coeff(5) - 3.0 * l * l * eta.coeff(3) / (l - std::pow(l, 5))), 0.0, 1e-13);
  EXPECT_EQ(eta.coeff(1), Complex(1.0));
}

TEST(Linearizer, MatchesCompositionOracle) {
  for (double theta : {kGoldenMean, std::numbers::sqrt2 - 1.0}) {
    const LinearizerSeries eta = build_linearizer(theta, 25);
    const auto oracle = composed_linearizer(eta.lambda, 25);
    for (int j = 1; j <= 25; ++j)
      EXPECT_NEAR(std::abs(eta.coeff(j) - oracle[j]), 0.0, 1e-9 * (1.0 + std::abs(oracle[j]))) << theta << " " << j;
  }
}

TEST(Linearizer, EvenCoefficientsVanishExactly) {
  const LinearizerSeries eta = build_linearizer(kGoldenMean, 50);
  for (int j = 2; j <= 50; j += 2) EXPECT_EQ(eta.coeff(j), Complex(0.0)) << j;
}

TEST(Linearizer, ResidualOnHalfRadius) {
  const LinearizerSeries eta = build_linearizer(kGoldenMean, 50);
  EXPECT_GT(eta.radius_estimate, 0.0);
  EXPECT_LE(conjugacy_residual(eta, 0.5 * eta.radius_estimate), 1e-8);
}

TEST(Linearizer, SmallDivisorsRejected) {
  for (double theta : {0.0, 0.5, 1.0 / 3.0}) {
    try {
      build_linearizer(theta, 20);
      ADD_FAILURE() << theta;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::SmallDivisor) << theta;
    }
  }
}

TEST(Linearizer, ExportFormat) {
  std::ostringstream os;
  write_linearizer(os, build_linearizer(kGoldenMean, 4));
  const std::string text = os.str();
  EXPECT_EQ(text.substr(0, 6), "1,1,0\n");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(UnitPowersTest, StaysOnCircle) {
  UnitPowers p(rotation_multiplier(kGoldenMean));
  for (int n = 0; n < 100000; ++n) p.advance();
  EXPECT_LT(p.max_drift(), 1e-9);
  EXPECT_NEAR(std::abs(p.value()), 1.0, 1e-12);
  EXPECT_THROW(UnitPowers(Complex(1.1, 0.0)), Error);
}

TEST(AlphaTrackTest, OriginIsFixed) {
  const AlphaTrack t = alpha_track(kGoldenMean, 0.0, 1000);
  EXPECT_EQ(t.sup_dev, 0.0);
  for (Complex a : t.alphas) EXPECT_EQ(a, Complex(0.0));
}

TEST(AlphaTrackTest, SmallBallAndModulus) {
  const Complex z0 = std::polar(0.05, 1.1);
  const AlphaTrack t = alpha_track(kGoldenMean, z0, 100000);
  EXPECT_EQ(t.alphas.front(), z0);
  EXPECT_LE(t.sup_dev, std::abs(z0) / 2);
  EXPECT_LT(t.max_modulus_mismatch, 1e-12);
}

TEST(AlphaTrackTest, DeviationIsCubicInRadius) {
  // The map is odd, so alpha_n - z0 = O(|z0|^3): halving |z0| shrinks the
  // deviation ~8x, and sup_dev / |z0|^3 is close to 2 |c3|.
  const double c3 = std::abs(build_linearizer(kGoldenMean, 5).coeff(3));
  const double d1 = alpha_track(kGoldenMean, 0.05, 100000).sup_dev;
  const double d2 = alpha_track(kGoldenMean, 0.025, 100000).sup_dev;
  EXPECT_GT(d1 / d2, 6.0);
  EXPECT_LT(d1 / d2, 10.0);
  EXPECT_NEAR(d2 / std::pow(0.025, 3), 2.0 * c3, 0.1 * c3);
}

TEST(Halfplane, MembershipExamples) {
  const PlanarMap f = make_skew_siegel();
  const Complex z0 = std::polar(0.05, 0.4);
  const HalfplaneSpec h = calibrate_halfplane(f, z0);
  EXPECT_DOUBLE_EQ(h.K, h.kappa / 0.05);
  const Complex u = -2.0 * h.K * z0 / std::norm(z0);  // Re(u conj z0) = -2K
  EXPECT_TRUE(h.contains(u));
  EXPECT_FALSE(h.contains(0.0));
  EXPECT_TRUE(h.contains(h.sample(1.5, 3.0)));
  EXPECT_FALSE(h.contains(h.sample(0.5, 0.0)));
}

TEST(Halfplane, RequiresSkewMap) {
  EXPECT_THROW(calibrate_halfplane(make_cusp(2, 3, 2), 0.05), Error);
  EXPECT_THROW(calibrate_halfplane(make_skew_siegel(), 0.0), Error);
}

TEST(Reciprocal, FirstDefectBoundByHand) {
  // g_1(w) = w + a w^2 + lambda w^3, so 1/g_1(1/u) = u / (1 + a/u + lambda/u^2)
  // = u - a + (a^2 - lambda)/u + O(u^-2) and d_0 |u_0| -> |a^2 - lambda|.
  const PlanarMap f = make_skew_siegel();
  const Complex z0 = 0.05;
  const Complex lambda = f.skew()->lambda;
  for (double scale : {1e3, 1e5}) {
    const Complex u0 = -scale;
    const ReciprocalReport r = reciprocal_recursion_check(f, z0, 1.0 / u0, 1);
    EXPECT_NEAR(r.defects[0] * std::abs(u0), std::abs(z0 * z0 - lambda), 1e-2);
  }
}

TEST(Reciprocal, DefectVanishesAtInfinity) {
  const PlanarMap f = make_skew_siegel();
  const double d_near = reciprocal_recursion_check(f, 0.05, 1e-3, 1).defects[0];
  const double d_far = reciprocal_recursion_check(f, 0.05, 1e-6, 1).defects[0];
  EXPECT_LT(d_far, 1e-3 * d_near * 10);
  EXPECT_LT(d_far, 1e-5);
}

TEST(Reciprocal, ConsistencyAndMonotoneDrift) {
  const PlanarMap f = make_skew_siegel();
  const Complex z0 = std::polar(0.05, -0.7);
  const HalfplaneSpec h = calibrate_halfplane(f, z0);
  const Complex u0 = h.sample(1.2, 2.0);
  const ReciprocalReport r = reciprocal_recursion_check(f, z0, 1.0 / u0, 20000);
  EXPECT_LT(r.max_consistency_error, 1e-9);
  EXPECT_TRUE(r.monotone_after_transient);
  EXPECT_TRUE(std::isfinite(r.fitted_constant));
  for (int n = r.transient + 1; n < 20000; ++n)
    ASSERT_LT((r.u[n + 1] * std::conj(z0)).real(), (r.u[n] * std::conj(z0)).real()) << n;
}

TEST(Conjugation, IdentityHoldsForFirstThousandSteps) {
  const PlanarMap f = make_skew_siegel();
  const Point p{{0.03, 0.01}, {0.2, -0.05}};
  for (int n = 1; n <= 1000; n += 37) EXPECT_LT(conjugation_identity_error(f, n, p), 1e-12) << n;
}
