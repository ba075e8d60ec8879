#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "fatou/dynamics.hpp"
#include "fatou/siegel.hpp"

using namespace fatou;

TEST(Maps, SkewProductComponents) {
  const PlanarMap f = make_skew_siegel();
  const Complex lambda = f.skew()->lambda;
  const Point p{{0.1, 0.2}, {-0.3, 0.05}};
  const Point q = f(p);
  const Complex ez = lambda * p.z + p.z * p.z * p.z;
  const Complex ew = (p.w + p.z * p.w * p.w) / lambda + p.w * p.w * p.w;
  EXPECT_NEAR(std::abs(q.z - ez), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(q.w - ew), 0.0, 1e-16);
  EXPECT_TRUE(satisfies_family_invariant(f));
  EXPECT_EQ(f.degree(), 3);
}

TEST(Maps, SkewZCoordinateBitwiseMatchesCubicStep) {
  const PlanarMap f = make_skew_siegel();
  Point p{{0.05, 0.01}, {0.2, -0.1}};
  Complex z = p.z;
  for (int n = 0; n < 5000; ++n) {
    p = f(p);
    z = cubic_step(f.skew()->lambda, z);
    ASSERT_EQ(std::memcmp(&p.z, &z, sizeof z), 0) << n;
  }
}

TEST(Maps, TangentFamilyInvariantAndOrder) {
  EXPECT_THROW(make_tangent_identity(BivarPoly::z(), BivarPoly::z(), BivarPoly::w(), 1), Error);
  const PlanarMap c = make_cusp(2, 3, 3);
  EXPECT_TRUE(satisfies_family_invariant(c));
  EXPECT_EQ(c.degree(), 3 * 3 + 1);
  EXPECT_THROW(make_cusp(2, 4, 2), Error);
  const PlanarMap off(c.pz() + BivarPoly::monomial(1e-3, 1, 1), c.pw());
  EXPECT_TRUE(satisfies_family_invariant(off));  // generic maps carry no invariant
}

TEST(Iterate, ZeroStepsAndFixedPointsOnV) {
  const PlanarMap c = make_cusp(2, 3, 2);
  const Point b = cusp_curve_point(2, 3, 0.3);
  EXPECT_EQ(iterate(c, b, 0).points.size(), 1u);
  const Orbit o = iterate(c, b, 10);
  ASSERT_EQ(o.points.size(), 11u);
  for (const auto& p : o.points) {
    EXPECT_NEAR(std::abs(p.z - b.z), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p.w - b.w), 0.0, 1e-15);
  }
}

TEST(Iterate, InvariantAxisAndEscape) {
  const PlanarMap f = make_skew_siegel();
  const Orbit axis = iterate(f, {0.05, 0.0}, 1000);
  for (const auto& p : axis.points) EXPECT_EQ(p.w, Complex(0.0));
  const Orbit esc = iterate(f, {10.0, 10.0}, 100);
  EXPECT_TRUE(esc.escaped);
  EXPECT_LT(esc.points.size(), 101u);
}

TEST(Iterate, DeterministicCsv) {
  const PlanarMap f = make_skew_siegel();
  std::ostringstream a, b;
  write_orbit_csv(a, iterate(f, {{0.05, 0.0}, {0.01, 0.002}}, 500));
  write_orbit_csv(b, iterate(f, {{0.05, 0.0}, {0.01, 0.002}}, 500));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, 22), "n,z_re,z_im,w_re,w_im\n");
}

TEST(Classify, SeedOnCurveConvergesAtOnce) {
  const PlanarMap c = make_cusp(2, 3, 2);
  const OrbitVerdict v = classify_orbit(c, cusp_curve_point(2, 3, 0.3), c.tangent()->g, 100, 1e-10);
  EXPECT_EQ(v.kind, VerdictKind::ConvergesToTarget);
  EXPECT_EQ(v.steps_used, 1);
}

TEST(Classify, CubicDominanceEscapes) {
  // |z| = 10: z^3 dominates lambda z, so |z_2| ~ 1e9 exceeds the radius.
  const PlanarMap f = make_skew_siegel();
  const OrbitVerdict v = classify_orbit(f, {10.0, 10.0}, BivarPoly::w(), 100, 1e-8);
  EXPECT_EQ(v.kind, VerdictKind::Escapes);
  EXPECT_LE(v.steps_used, 3);
}

TEST(Classify, MonotoneInBudget) {
  const PlanarMap c = make_cusp(2, 3, 2);
  const BivarPoly& g = c.tangent()->g;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int s = 0; s < 10; ++s) {
    const Point seed{Complex(1.0 + u(rng), u(rng)), Complex(1.0 + u(rng), u(rng))};
    const OrbitVerdict small = classify_orbit(c, seed, g, 500, 1e-4);
    if (small.kind == VerdictKind::Undecided) continue;
    const OrbitVerdict large = classify_orbit(c, seed, g, 5000, 1e-4);
    EXPECT_EQ(small.kind, large.kind);
    EXPECT_EQ(small.steps_used, large.steps_used);
  }
}

TEST(Classify, TangentialApproachOnCusp) {
  const PlanarMap c = make_cusp(2, 3, 2);
  const Point b = cusp_curve_point(2, 3, 1.0);
  const OrbitVerdict v = classify_orbit(c, {b.z - 0.01, b.w + 0.01}, c.tangent()->g, 20000, 1e-5);
  ASSERT_EQ(v.kind, VerdictKind::ConvergesToTarget);
  ASSERT_TRUE(v.tangent_direction.has_value());
  // alpha = -1/25 at t = 1, so the attracting side is -(1, -1); steps align
  // with (P, Q) at the limit point, near b that is (1, -1).
  EXPECT_LT(ProjPoint::distance(*v.tangent_direction, ProjPoint(1.0, -1.0)), 0.05);
}

TEST(Extension, SkewExtendsCounterexampleDoesNot) {
  EXPECT_TRUE(check_projective_extension(make_skew_siegel()));
  EXPECT_FALSE(check_projective_extension(PlanarMap(parse_poly("z^2"), parse_poly("z*w"))));
}

TEST(JuliaProbe, FiberStaysInPlane) {
  const JuliaProbeReport r = julia_probe_siegel_circle(make_skew_siegel(), 0.5, 1e-6, 2000);
  EXPECT_TRUE(r.fiber_stays_in_plane);
  EXPECT_TRUE(r.fiber_bounded);
}

TEST(Basin, ZeroBudgetIsAllUndecided) {
  Slice s;
  s.base = {0.05, 0.0};
  s.dir1 = {0.0, 1.0};
  s.dir2 = {0.0, Complex(0.0, 1.0)};
  const BasinGrid g = compute_basin(make_skew_siegel(), BivarPoly::w(), s, 8, 6, 0, 1e-6, 2);
  for (const auto& c : g.cells) EXPECT_EQ(c.kind, VerdictKind::Undecided);
  std::ostringstream ppm;
  write_basin_ppm(ppm, g);
  const std::string img = ppm.str();
  const std::string header = "P6\n8 6\n255\n";
  ASSERT_EQ(img.substr(0, header.size()), header);
  for (std::size_t i = header.size(); i < img.size(); ++i) EXPECT_EQ(img[i], '\0');
  EXPECT_EQ(img.size(), header.size() + 8 * 6 * 3);
}

TEST(Basin, ThreadCountDoesNotChangeCells) {
  Slice s;
  const Point b = cusp_curve_point(2, 3, 1.0);
  s.base = b;
  s.s_min = s.t_min = -0.05;
  s.s_max = s.t_max = 0.05;
  const PlanarMap c = make_cusp(2, 3, 2);
  const BasinGrid one = compute_basin(c, c.tangent()->g, s, 12, 9, 300, 1e-3, 1);
  const BasinGrid three = compute_basin(c, c.tangent()->g, s, 12, 9, 300, 1e-3, 3);
  std::ostringstream a, bb;
  write_basin_ppm(a, one);
  write_basin_ppm(bb, three);
  EXPECT_EQ(a.str(), bb.str());
  std::ostringstream meta;
  write_basin_metadata(meta, one);
  EXPECT_NE(meta.str().find("resolution=12x9"), std::string::npos);
  EXPECT_NE(meta.str().find("budget=300"), std::string::npos);
}

TEST(Basin, SkewFiberCellsInHalfplaneConverge) {
  const PlanarMap f = make_skew_siegel();
  const Complex z0 = 0.05;
  const HalfplaneSpec h = calibrate_halfplane(f, z0);
  Slice s;
  s.base = {z0, 0.0};
  s.dir1 = {0.0, 1.0};
  s.dir2 = {0.0, Complex(0.0, 1.0)};
  const double r = 1.0 / (3.0 * h.K / std::abs(z0));
  s.s_min = s.t_min = -r;
  s.s_max = s.t_max = r;
  const BasinGrid g = compute_basin(f, BivarPoly::w(), s, 6, 6, 100000, 1e-3, 1);
  int checked_cells = 0;
  for (int iy = 0; iy < 6; ++iy)
    for (int ix = 0; ix < 6; ++ix) {
      const Point p = g.center(ix, iy);
      if (p.w == Complex{} || !h.contains(1.0 / p.w)) continue;
      ++checked_cells;
      EXPECT_EQ(g.cells[iy * 6 + ix].kind, VerdictKind::ConvergesToTarget) << ix << "," << iy;
    }
  EXPECT_GT(checked_cells, 0);
}
