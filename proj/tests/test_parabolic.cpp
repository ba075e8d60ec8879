#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fatou/monodromy.hpp"
#include "fatou/parabolic.hpp"
#include "oracles.hpp"

using namespace fatou;

namespace {

constexpr double kPi = std::numbers::pi;

// F = (z - z^k, w): V = {z = 0}, x = z, attracting rays Arg z = 2 m pi/(k-1).
PlanarMap model_map(int k) {
  return make_tangent_identity(BivarPoly::z(), BivarPoly::constant(-1.0), BivarPoly{}, k);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Precondition;
}

}  // namespace

TEST(CharDirections, ThreeSimpleDirections) {
  // (z^2, w^2): W = zw(w - z), each direction with eigenvalue 1.
  const CharDirectionResult r = char_directions(BinaryForm(2, {1.0, 0.0, 0.0}), BinaryForm(2, {0.0, 0.0, 1.0}));
  EXPECT_FALSE(r.dicritical);
  ASSERT_EQ(r.directions.size(), 3u);
  for (const auto& d : r.directions) {
    EXPECT_NEAR(std::abs(d.lambda_char - 1.0), 0.0, 1e-12);
    EXPECT_FALSE(d.degenerate);
    EXPECT_EQ(d.multiplicity, 1);
  }
}

TEST(CharDirections, Dicritical) {
  const CharDirectionResult r = char_directions(BinaryForm(2, {1.0, 0.0, 0.0}), BinaryForm(2, {0.0, 1.0, 0.0}));
  EXPECT_TRUE(r.dicritical);
}

TEST(CharDirections, ZeroFormThrows) {
  EXPECT_EQ(kind_of([] { char_directions(BinaryForm(2), BinaryForm(2)); }), ErrorKind::ZeroForm);
}

TEST(CharDirections, DegenerateDirectionOfGerm) {
  // (z^2, 0): [0:1] is characteristic with eigenvalue 0.
  const CharDirectionResult r = char_directions(BinaryForm(2, {1.0, 0.0, 0.0}), BinaryForm(2));
  bool found = false;
  for (const auto& d : r.directions)
    if (ProjPoint::distance(d.v, ProjPoint(0.0, 1.0)) < 1e-9) {
      found = true;
      EXPECT_TRUE(d.degenerate);
    }
  EXPECT_TRUE(found);
}

TEST(CharDirections, MatchesBruteForceScan) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + trial % 3;
    const BinaryForm fz = oracle::random_form(k, rng), fw = oracle::random_form(k, rng);
    const CharDirectionResult r = char_directions(fz, fw);
    ASSERT_FALSE(r.dicritical);
    const auto scanned = oracle::scan_char_directions(fz, fw);
    const double scale = std::max(fz.scale(), fw.scale());
    for (const auto& d : r.directions) {
      const Complex v1 = d.v.v1(), v2 = d.v.v2();
      EXPECT_LE(std::abs(fz(v1, v2) - d.lambda_char * v1), 1e-9 * (1.0 + scale)) << trial;
      EXPECT_LE(std::abs(fw(v1, v2) - d.lambda_char * v2), 1e-9 * (1.0 + scale)) << trial;
      bool seen = false;
      for (const auto& s : scanned) seen = seen || ProjPoint::distance(v1, v2, s[0], s[1]) < 1e-5;
      EXPECT_TRUE(seen) << trial;
    }
    for (const auto& s : scanned) {
      bool seen = false;
      for (const auto& d : r.directions) seen = seen || ProjPoint::distance(d.v.v1(), d.v.v2(), s[0], s[1]) < 1e-5;
      EXPECT_TRUE(seen) << trial;
    }
  }
}

TEST(CharDirections, CuspDirectionAtCurvePoint) {
  const Complex t = 0.3;
  const NormalForm nf = local_normal_form(make_cusp(2, 3, 2), cusp_curve_point(2, 3, t));
  const CharDirection& d = nf.chart->direction();
  EXPECT_FALSE(d.degenerate);
  EXPECT_LT(ProjPoint::distance(d.v, ProjPoint(std::pow(t, 3), -std::pow(t, 2))), 1e-9);
}

TEST(Condition, CuspValue) {
  const BivarPoly g = parse_poly("z^2 - w^3");
  for (Complex t : {Complex(0.3), std::polar(0.7, 1.3)}) {
    const Complex h = condition_check(g, BivarPoly::z(), -BivarPoly::w(), cusp_curve_point(2, 3, t));
    EXPECT_NEAR(std::abs(h - 5.0 * std::pow(t, 6)), 0.0, 1e-14);
  }
  EXPECT_EQ(condition_check(g, BivarPoly{}, BivarPoly{}, cusp_curve_point(2, 3, 0.5)), Complex(0.0));
}

TEST(Condition, Errors) {
  const BivarPoly g = parse_poly("z^2 - w^3");
  EXPECT_EQ(kind_of([&] { condition_check(g, BivarPoly::z(), -BivarPoly::w(), {0.0, 0.0}); }),
            ErrorKind::SingularSample);
  EXPECT_EQ(kind_of([&] { condition_check(g, BivarPoly::z(), -BivarPoly::w(), {1.0, 0.0}); }),
            ErrorKind::NotOnCurve);
}

TEST(Germ, LeadingTermOfTangentFamily) {
  const Complex t = std::polar(0.8, 0.4);
  const Point b = cusp_curve_point(2, 3, t);
  for (int k : {2, 3}) {
    const GermData gd = germ_at(make_cusp(2, 3, k), b);
    ASSERT_EQ(gd.k, k);
    const Complex gz = 2.0 * b.z, gw = -3.0 * b.w * b.w;
    for (Point h : {Point{1.0, 0.0}, Point{0.3, -0.7}, Point{Complex(0.1, 0.2), 1.0}}) {
      const Complex lead = std::pow(gz * h.z + gw * h.w, k);
      EXPECT_NEAR(std::abs(gd.fz(h.z, h.w) - lead * b.z), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(gd.fw(h.z, h.w) + lead * b.w), 0.0, 1e-12);
    }
  }
  EXPECT_EQ(kind_of([] { germ_at(make_cusp(2, 3, 2), {0.5, 0.5}); }), ErrorKind::NotOnCurve);
}

TEST(Chart, RoundTripAndUnitFactor) {
  const LocalChart chart(make_cusp(2, 3, 2), cusp_curve_point(2, 3, 1.0));
  const auto [x0, u0] = chart.to_local(chart.base());
  EXPECT_NEAR(std::abs(x0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(chart.unit_factor(0.0) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(chart.gamma() * chart.condition_at_base() + 1.0), 0.0, 1e-12);
  for (Complex x : {Complex(0.01, 0.0), Complex(-0.003, 0.004)})
    for (Complex u : {Complex(0.0), Complex(0.002, -0.005)}) {
      const auto [x1, u1] = chart.to_local(chart.from_local(x, u));
      EXPECT_NEAR(std::abs(x1 - x), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(u1 - u), 0.0, 1e-12);
    }
  const Point c = chart.curve_point(0.01);
  EXPECT_NEAR(std::abs(c.z * c.z - c.w * c.w * c.w), 0.0, 1e-14);
}

TEST(Chart, ModelMapIsIdentityChart) {
  const LocalChart chart(model_map(3), {0.0, 0.2});
  EXPECT_NEAR(std::abs(chart.gamma() - 1.0), 0.0, 1e-14);
  const auto [x, u] = chart.to_local({Complex(0.01, 0.02), 0.2});
  EXPECT_NEAR(std::abs(x - Complex(0.01, 0.02)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(chart.unit_factor(0.05) - 1.0), 0.0, 1e-14);
}

TEST(Petal, AnglesAndMembership) {
  for (int k : {2, 3, 5})
    for (int m = 1; m < k; ++m)
      EXPECT_NEAR(std::abs(angle_difference(petal_angle(m, k, 1.0), 2.0 * m * kPi / (k - 1))), 0.0, 1e-15);
  const NormalForm nf = local_normal_form(model_map(3), {0.0, 0.0}, 0.1);
  ASSERT_EQ(nf.petals.size(), 2u);
  const PetalSpec& p1 = nf.petals[0];
  EXPECT_EQ(p1.m, 1);
  EXPECT_NEAR(std::abs(angle_difference(p1.theta(0.0), kPi)), 0.0, 1e-12);
  EXPECT_NEAR(p1.half_width(), kPi / 4, 1e-15);
  EXPECT_TRUE(sector_membership(p1, -0.05, 0.0));
  EXPECT_TRUE(sector_membership(p1, std::polar(0.05, kPi + 0.7), 0.15));
  EXPECT_FALSE(sector_membership(p1, 0.05, 0.0));
  EXPECT_FALSE(sector_membership(p1, -0.1, 0.0));
  EXPECT_FALSE(sector_membership(p1, -0.05, 0.2));
  EXPECT_FALSE(sector_membership(p1, 0.0, 0.0));
  EXPECT_FALSE(sector_membership(p1, std::polar(0.05, kPi + kPi / 4 + 1e-9), 0.0));
  EXPECT_FALSE(nf.branch_note.empty());
}

TEST(Petal, RateMatchesOneDimensionalOracle) {
  for (int k : {2, 3}) {
    const PlanarMap f = model_map(k);
    const NormalForm nf = local_normal_form(f, {0.0, 0.0}, 0.1);
    const PetalReport r = petal_convergence_test(f, nf.petals[0], 8, 20000);
    EXPECT_EQ(r.converged, 8);
    for (const auto& s : r.seeds) {
      const double expect = oracle::parabolic_rate_1d(k, std::abs(s.x0), 20000);
      EXPECT_NEAR(s.rate_exponent, expect, 0.02 / (k - 1)) << k;
    }
  }
}

TEST(Petal, RepellingPetalsAttractForTheInverse) {
  for (int k : {2, 3}) {
    const PlanarMap f = model_map(k);
    PetalSpec spec = local_normal_form(f, {0.0, 0.0}, 0.1).petals[0];
    spec.angle_shift = kPi / (k - 1);
    PetalTestOptions rep;
    rep.repelling = true;
    EXPECT_EQ(petal_convergence_test(f, spec, 8, 5000, rep).exited, 8) << k;
    const PetalReport inv = petal_convergence_test(f, spec, 8, 20000, {}, make_inverse_stepper(f));
    EXPECT_EQ(inv.converged, 8) << k;
  }
}

TEST(Petal, CuspCalibratesAtUnitParameter) {
  for (int k : {2, 3}) {
    const PlanarMap f = make_cusp(2, 3, k);
    const NormalForm nf = local_normal_form(f, cusp_curve_point(2, 3, 1.0));
    for (const auto& petal : nf.petals) {
      const CalibrationResult c = calibrate_petal(f, petal);
      EXPECT_EQ(c.halvings, 0) << k;
      EXPECT_EQ(petal_probe_failures(f, c.spec, 64, 10.0), 0);
      const PetalReport r = petal_convergence_test(f, c.spec, 8, 100000);
      EXPECT_EQ(r.converged, 8) << k << " m=" << petal.m;
    }
  }
}

TEST(Petal, CuspRepellingSeedsExit) {
  const PlanarMap f = make_cusp(2, 3, 2);
  PetalSpec spec = calibrate_petal(f, local_normal_form(f, cusp_curve_point(2, 3, 1.0)).petals[0]).spec;
  spec.angle_shift = kPi;
  PetalTestOptions rep;
  rep.repelling = true;
  EXPECT_EQ(petal_convergence_test(f, spec, 16, 100000, rep).exited, 16);
}

TEST(Petal, AttractingRayIsAFiberDirection) {
  // Displacement b + h v with x = theta0 direction must be a positive
  // multiple of alpha (t^q, -t^p) for some alpha in the fiber.
  const Complex t = 0.3;
  for (int k : {2, 3, 4}) {
    const PlanarMap f = make_cusp(2, 3, k);
    const Point b = cusp_curve_point(2, 3, t);
    const NormalForm nf = local_normal_form(f, b);
    const DirectionFiber fib = direction_fiber({2, 3, k}, t);
    const Point v = nf.chart->char_vector();
    const Complex dgv = 2.0 * b.z * v.z - 3.0 * b.w * b.w * v.w;
    const Point base_dir{std::pow(t, 3), -std::pow(t, 2)};
    std::vector<int> hits(fib.alphas.size(), 0);
    for (const auto& petal : nf.petals) {
      const double theta0 = petal_angle(petal.m, k, nf.chart->unit_factor(0.0));
      const Complex h = nf.chart->gamma() * std::polar(1.0, theta0) / dgv;
      const Point disp = h * v;
      int matched = -1;
      for (std::size_t i = 0; i < fib.alphas.size(); ++i) {
        const Complex ratio = disp.z / (fib.alphas[i] * base_dir.z);
        if (ratio.real() > 0 && std::abs(ratio.imag()) < 1e-9 * std::abs(ratio) &&
            std::abs(disp.w - ratio * fib.alphas[i] * base_dir.w) < 1e-9 * norm(disp))
          matched = static_cast<int>(i);
      }
      ASSERT_GE(matched, 0) << k << " m=" << petal.m;
      ++hits[matched];
    }
    for (int h : hits) EXPECT_EQ(h, 1) << k;
  }
}

TEST(NormalFormTest, DegenerateBaseThrows) {
  // (z, w) + z^2 (0, 1): only characteristic direction has eigenvalue 0.
  const PlanarMap f = make_tangent_identity(BivarPoly::z(), BivarPoly{}, BivarPoly::constant(1.0), 2);
  EXPECT_EQ(kind_of([&] { local_normal_form(f, {0.0, 0.3}); }), ErrorKind::DegenerateDirection);
}
