#include <array>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "fatou/dynamics.hpp"

namespace fatou {

std::string to_string(MapFamily f) {
  switch (f) {
    case MapFamily::SkewSiegel: return "skew_siegel";
    case MapFamily::TangentIdentity: return "tangent_identity";
    case MapFamily::Cusp: return "cusp";
    case MapFamily::Generic: return "generic";
  }
  return "unknown";
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::ConvergesToTarget: return "converges_to_target";
    case VerdictKind::Escapes: return "escapes";
    case VerdictKind::Undecided: return "undecided";
  }
  return "unknown";
}

PolyEvaluator::PolyEvaluator(const BivarPoly& p) : degree_(p.degree()) {
  for (const auto& [e, c] : p.terms()) terms_.push_back({c, e.first, e.second});
}

Complex PolyEvaluator::operator()(Complex z, Complex w) const {
  if (terms_.empty()) return {};
  constexpr int kInline = 48;
  std::array<Complex, kInline> zs, ws;
  std::vector<Complex> zh, wh;
  Complex* zp = zs.data();
  Complex* wp = ws.data();
  if (degree_ >= kInline) {
    zh.resize(static_cast<std::size_t>(degree_) + 1);
    wh.resize(static_cast<std::size_t>(degree_) + 1);
    zp = zh.data();
    wp = wh.data();
  }
  zp[0] = 1.0;
  wp[0] = 1.0;
  for (int n = 1; n <= degree_; ++n) {
    zp[n] = zp[n - 1] * z;
    wp[n] = wp[n - 1] * w;
  }
  Complex acc{};
  for (const auto& t : terms_) acc += t.c * zp[t.i] * wp[t.j];
  return acc;
}

PlanarMap::PlanarMap(BivarPoly pz, BivarPoly pw)
    : pz_(std::move(pz)), pw_(std::move(pw)), eval_z_(pz_), eval_w_(pw_) {}

std::string PlanarMap::describe() const {
  std::ostringstream os;
  os << "family=" << to_string(family_) << "\n";
  if (skew_) os << "theta=" << std::setprecision(17) << skew_->theta << "\n";
  if (cusp_) os << "p=" << cusp_->p << "\nq=" << cusp_->q << "\nk=" << cusp_->k << "\n";
  if (tangent_ && !cusp_) {
    os << "g=" << format_poly(tangent_->g) << "\nP=" << format_poly(tangent_->P)
       << "\nQ=" << format_poly(tangent_->Q) << "\nk=" << tangent_->k << "\n";
  }
  os << "pz=" << format_poly(pz_) << "\npw=" << format_poly(pw_) << "\n";
  return os.str();
}

PlanarMap make_skew_siegel(double theta) {
  const Complex lambda = std::polar(1.0, 2.0 * std::numbers::pi * theta);
  const Complex lambda_inv = 1.0 / lambda;
  BivarPoly::Terms tz{{{1, 0}, lambda}, {{3, 0}, 1.0}};
  BivarPoly::Terms tw{{{0, 1}, lambda_inv}, {{1, 2}, lambda_inv}, {{0, 3}, 1.0}};
  PlanarMap map{BivarPoly(std::move(tz)), BivarPoly(std::move(tw))};
  map.family_ = MapFamily::SkewSiegel;
  map.skew_ = SkewParams{theta, lambda};
  return map;
}

PlanarMap make_tangent_identity(const BivarPoly& g, const BivarPoly& P, const BivarPoly& Q, int k) {
  if (k < 2) throw Error(ErrorKind::BadOrder, "tangent-identity order k must be at least 2, got " + std::to_string(k));
  if (g.is_zero()) throw Error(ErrorKind::Precondition, "defining function g must be nonzero");
  const BivarPoly gk = g.pow(k);
  PlanarMap map{BivarPoly::z() + gk * P, BivarPoly::w() + gk * Q};
  map.family_ = MapFamily::TangentIdentity;
  map.tangent_ = TangentParams{g, P, Q, k};
  return map;
}

PlanarMap make_cusp(int p, int q, int k) {
  if (p < 1 || q < 1) throw Error(ErrorKind::Precondition, "cusp exponents must be positive");
  if (std::gcd(p, q) != 1) throw Error(ErrorKind::Precondition, "cusp exponents must be coprime");
  const BivarPoly g = BivarPoly::monomial(1.0, p, 0) - BivarPoly::monomial(1.0, 0, q);
  PlanarMap map = make_tangent_identity(g, BivarPoly::z(), -BivarPoly::w(), k);
  map.family_ = MapFamily::Cusp;
  map.cusp_ = CuspParams{p, q, k};
  return map;
}

Point cusp_curve_point(int p, int q, Complex t) { return {std::pow(t, q), std::pow(t, p)}; }

bool satisfies_family_invariant(const PlanarMap& map) {
  switch (map.family()) {
    case MapFamily::SkewSiegel:
      for (const auto& [e, c] : map.pz().terms())
        if (e.second != 0) return false;
      return true;
    case MapFamily::TangentIdentity:
    case MapFamily::Cusp: {
      const auto& t = *map.tangent();
      const BivarPoly gk = t.g.pow(t.k);
      return divide(map.pz() - BivarPoly::z(), gk).remainder.is_zero() &&
             divide(map.pw() - BivarPoly::w(), gk).remainder.is_zero();
    }
    case MapFamily::Generic:
      return true;
  }
  return true;
}

Orbit iterate(const PlanarMap& map, Point seed, int n, double escape_radius) {
  if (n < 0) throw Error(ErrorKind::Precondition, "iteration count must be non-negative");
  Orbit orbit{seed, {}, false};
  orbit.points.reserve(static_cast<std::size_t>(n) + 1);
  orbit.points.push_back(seed);
  Point p = seed;
  for (int i = 0; i < n; ++i) {
    p = map(p);
    checked(p.z, "orbit z-coordinate");
    checked(p.w, "orbit w-coordinate");
    orbit.points.push_back(p);
    if (std::abs(p.z) + std::abs(p.w) > escape_radius) {
      orbit.escaped = true;
      break;
    }
  }
  return orbit;
}

void write_orbit_csv(std::ostream& os, const Orbit& orbit) {
  os << "n,z_re,z_im,w_re,w_im\n";
  char buf[160];
  for (std::size_t n = 0; n < orbit.points.size(); ++n) {
    const Point& p = orbit.points[n];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", n, p.z.real(), p.z.imag(), p.w.real(),
                  p.w.imag());
    os << buf;
  }
}

double target_residual(const BivarPoly& target, Point p) {
  const int d = std::max(target.degree(), 0);
  return std::abs(target(p.z, p.w)) / (1.0 + std::pow(norm(p), d));
}

namespace {

bool finite_point(Point p) { return is_finite(p.z) && is_finite(p.w); }

}  // namespace

OrbitVerdict classify_orbit(const PlanarMap& map, Point seed, const BivarPoly& target, int budget, double tol,
                            const ClassifyOptions& opts) {
  if (tol <= 0.0) throw Error(ErrorKind::Precondition, "classification tolerance must be positive");
  const PolyEvaluator tgt(target);
  const int deg = std::max(target.degree(), 0);
  auto residual = [&](Point p) { return std::abs(tgt(p.z, p.w)) / (1.0 + std::pow(norm(p), deg)); };

  OrbitVerdict v;
  Point p = seed;
  v.final_point = v.previous_point = seed;
  double res = residual(p);
  v.final_distance = res;
  int in_tol = res <= tol ? 1 : 0;

  for (int n = 1; n <= budget; ++n) {
    const Point next = map(p);
    if (!finite_point(next) || std::abs(next.z) + std::abs(next.w) > opts.escape_radius) {
      v.kind = VerdictKind::Escapes;
      v.steps_used = n;
      v.previous_point = p;
      v.final_point = next;
      v.final_distance = finite_point(next) ? residual(next) : std::numeric_limits<double>::infinity();
      return v;
    }
    const bool stationary = next == p;
    v.previous_point = p;
    p = next;
    res = residual(p);
    in_tol = res <= tol ? in_tol + 1 : 0;
    v.final_point = p;
    v.final_distance = res;
    v.steps_used = n;
    if (res <= tol && (stationary || in_tol >= opts.window)) {
      v.kind = VerdictKind::ConvergesToTarget;
      break;
    }
  }
  if (v.kind != VerdictKind::ConvergesToTarget) return v;

  // Tangential approach: the step direction must settle in P^1. Extra steps
  // here only observe the orbit and never change the verdict.
  Point prev = v.previous_point;
  Point cur = v.final_point;
  if (cur == prev) return v;
  int stable = 0;
  std::optional<ProjPoint> last;
  for (int extra = 0; extra <= opts.tangent_window; ++extra) {
    const Point d = cur - prev;
    if (d.z == Complex{} && d.w == Complex{}) break;
    ProjPoint dir(d.z, d.w);
    if (last && ProjPoint::distance(*last, dir) < opts.tangent_tol) ++stable;
    else if (last) stable = 0;
    last = dir;
    prev = cur;
    cur = map(cur);
    if (!finite_point(cur)) break;
  }
  if (stable >= opts.tangent_window) v.tangent_direction = last;
  return v;
}

bool check_projective_extension(const PlanarMap& map) {
  const int d = map.degree();
  if (d < 1) return false;
  const BinaryForm top_z = homogeneous_part(map.pz(), d);
  const BinaryForm top_w = homogeneous_part(map.pw(), d);
  if (top_z.is_zero() || top_w.is_zero()) return false;
  return !resultant_vanishes(top_z, top_w);
}

JuliaProbeReport julia_probe_siegel_circle(const PlanarMap& map, Complex w0, double delta, int budget,
                                           double threshold) {
  if (map.family() != MapFamily::SkewSiegel)
    throw Error(ErrorKind::Precondition, "the Siegel-circle probe needs the skew-product map");
  JuliaProbeReport r;
  r.w0 = w0;
  r.delta = delta;
  r.budget = budget;
  Point fiber{0.0, w0};
  Point off{delta, w0};
  r.fiber_max_modulus = std::abs(w0);
  for (int n = 1; n <= budget; ++n) {
    fiber = map(fiber);
    off = map(off);
    if (!finite_point(off) || !finite_point(fiber)) {
      r.sensitive = true;
      r.separation = std::numeric_limits<double>::infinity();
      if (r.first_separation_step < 0) r.first_separation_step = n;
      break;
    }
    if (fiber.z != Complex{}) r.fiber_stays_in_plane = false;
    r.fiber_max_modulus = std::max(r.fiber_max_modulus, std::abs(fiber.w));
    const double sep = norm(off - fiber);
    r.separation = std::max(r.separation, sep);
    if (sep > threshold && r.first_separation_step < 0) r.first_separation_step = n;
  }
  r.fiber_bounded = r.fiber_max_modulus <= 2.0 * std::abs(w0);
  if (finite_point(off)) r.final_w_modulus_change = std::abs(off.w) - std::abs(w0);
  r.sensitive = r.sensitive || r.first_separation_step >= 0;
  return r;
}

}  // namespace fatou
