#pragma once

// Polynomial endomorphisms of C^2, orbits, and orbit classification.

#include <cmath>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fatou/algebra.hpp"

namespace fatou {

struct Point {
  Complex z;
  Complex w;

  friend Point operator+(Point a, Point b) { return {a.z + b.z, a.w + b.w}; }
  friend Point operator-(Point a, Point b) { return {a.z - b.z, a.w - b.w}; }
  friend Point operator*(Complex s, Point a) { return {s * a.z, s * a.w}; }
  friend bool operator==(const Point&, const Point&) = default;
};

inline double norm(Point p) { return std::hypot(std::abs(p.z), std::abs(p.w)); }

inline constexpr double kGoldenMean = 0.6180339887498948482;  // (sqrt 5 - 1) / 2

enum class MapFamily { SkewSiegel, TangentIdentity, Cusp, Generic };
std::string to_string(MapFamily f);

struct SkewParams {
  double theta = kGoldenMean;
  Complex lambda;
};

// F = Id + g^k (P, Q)
struct TangentParams {
  BivarPoly g;
  BivarPoly P;
  BivarPoly Q;
  int k = 2;
};

struct CuspParams {
  int p = 2;
  int q = 3;
  int k = 2;
};

// Flattened polynomial for the orbit loop. Evaluation performs exactly the
// same floating-point operations as BivarPoly::operator().
class PolyEvaluator {
 public:
  PolyEvaluator() = default;
  explicit PolyEvaluator(const BivarPoly& p);
  Complex operator()(Complex z, Complex w) const;

 private:
  struct Term {
    Complex c;
    int i;
    int j;
  };
  std::vector<Term> terms_;
  int degree_ = -1;
};

class PlanarMap {
 public:
  PlanarMap(BivarPoly pz, BivarPoly pw);

  MapFamily family() const noexcept { return family_; }
  const BivarPoly& pz() const noexcept { return pz_; }
  const BivarPoly& pw() const noexcept { return pw_; }
  int degree() const noexcept { return std::max(pz_.degree(), pw_.degree()); }

  const std::optional<SkewParams>& skew() const noexcept { return skew_; }
  const std::optional<TangentParams>& tangent() const noexcept { return tangent_; }
  const std::optional<CuspParams>& cusp() const noexcept { return cusp_; }

  Point operator()(Point p) const { return {eval_z_(p.z, p.w), eval_w_(p.z, p.w)}; }

  std::string describe() const;

 private:
  friend PlanarMap make_skew_siegel(double theta);
  friend PlanarMap make_tangent_identity(const BivarPoly&, const BivarPoly&, const BivarPoly&, int);
  friend PlanarMap make_cusp(int p, int q, int k);

  BivarPoly pz_;
  BivarPoly pw_;
  PolyEvaluator eval_z_;
  PolyEvaluator eval_w_;
  MapFamily family_ = MapFamily::Generic;
  std::optional<SkewParams> skew_;
  std::optional<TangentParams> tangent_;
  std::optional<CuspParams> cusp_;
};

// f(z, w) = (lambda z + z^3, lambda^-1 (w + z w^2) + w^3), lambda = e^(2 pi i theta)
PlanarMap make_skew_siegel(double theta = kGoldenMean);
// Throws BadOrder for k < 2.
PlanarMap make_tangent_identity(const BivarPoly& g, const BivarPoly& P, const BivarPoly& Q, int k);
// (z, w) + (z^p - w^q)^k (z, -w)
PlanarMap make_cusp(int p, int q, int k);

// Point (t^q, t^p) on {z^p = w^q}.
Point cusp_curve_point(int p, int q, Complex t);

// The structural invariant of the map's family: the z-component of a skew
// product ignores w; a tangent-identity map minus the identity is divisible
// by g^k.
bool satisfies_family_invariant(const PlanarMap& map);

inline constexpr double kEscapeRadius = 1e6;

struct Orbit {
  Point seed;
  std::vector<Point> points;
  bool escaped = false;

  std::size_t length() const noexcept { return points.size(); }
};

// Stops early once |z| + |w| exceeds escape_radius. Throws NonFinite if an
// evaluation overflows.
Orbit iterate(const PlanarMap& map, Point seed, int n, double escape_radius = kEscapeRadius);

void write_orbit_csv(std::ostream& os, const Orbit& orbit);

enum class VerdictKind { ConvergesToTarget, Escapes, Undecided };
std::string to_string(VerdictKind k);

struct OrbitVerdict {
  VerdictKind kind = VerdictKind::Undecided;
  int steps_used = 0;
  double final_distance = 0.0;
  std::optional<ProjPoint> tangent_direction;
  Point final_point{};
  Point previous_point{};
};

struct ClassifyOptions {
  double escape_radius = kEscapeRadius;
  int window = 10;
  double tangent_tol = 1e-4;
  int tangent_window = 100;
};

// |target(p)| / (1 + |p|^deg target)
double target_residual(const BivarPoly& target, Point p);

OrbitVerdict classify_orbit(const PlanarMap& map, Point seed, const BivarPoly& target, int budget, double tol,
                            const ClassifyOptions& opts = {});

// True iff the top-degree parts of the two components share no projective
// root, so the homogenized map is a holomorphic endomorphism of P^2.
bool check_projective_extension(const PlanarMap& map);

struct JuliaProbeReport {
  Complex w0;
  double delta = 0.0;
  int budget = 0;
  bool fiber_stays_in_plane = true;  // every fiber iterate has z == 0 exactly
  double fiber_max_modulus = 0.0;    // max |w_n| along the fiber orbit
  bool fiber_bounded = true;         // fiber_max_modulus <= 2 |w0|
  double separation = 0.0;           // max_n |f^n(delta, w0) - f^n(0, w0)|
  int first_separation_step = -1;    // first n with separation > threshold
  double final_w_modulus_change = 0.0;
  bool sensitive = false;
};

JuliaProbeReport julia_probe_siegel_circle(const PlanarMap& map, Complex w0, double delta, int budget,
                                           double threshold = 1e-2);

// Real two-parameter affine slice base + s dir1 + t dir2 of C^2.
struct Slice {
  Point base;
  Point dir1{1.0, 0.0};
  Point dir2{Complex(0.0, 1.0), 0.0};
  double s_min = -1.0, s_max = 1.0;
  double t_min = -1.0, t_max = 1.0;

  Point at(double s, double t) const { return base + Complex(s) * dir1 + Complex(t) * dir2; }
};

struct BasinCell {
  VerdictKind kind = VerdictKind::Undecided;
  int petal = -1;
  int steps = 0;
  bool failed = false;
};

struct BasinGrid {
  Slice slice;
  int nx = 0;
  int ny = 0;
  int budget = 0;
  double tol = 0.0;
  std::vector<BasinCell> cells;  // row-major, row 0 at t_max

  const BasinCell& cell(int ix, int iy) const { return cells.at(static_cast<std::size_t>(iy) * nx + ix); }
  Point center(int ix, int iy) const;
  std::size_t failed_count() const;
};

// Maps (previous, final) orbit points of a converged orbit to a petal label.
using PetalIndexer = std::function<int(Point previous, Point last)>;

BasinGrid compute_basin(const PlanarMap& map, const BivarPoly& target, const Slice& slice, int nx, int ny,
                        int budget, double tol, int threads = 1, const PetalIndexer& indexer = {});

void write_basin_ppm(std::ostream& os, const BasinGrid& grid, const std::string& comment = {});
void write_basin_metadata(std::ostream& os, const BasinGrid& grid);

}  // namespace fatou
