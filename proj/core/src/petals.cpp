#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "fatou/parabolic.hpp"

namespace fatou {

namespace {

double frac(double x) { return x - std::floor(x); }

// One-step estimates at a probe point; false when violated or when the
// chart cannot place the point.
bool probe_ok(const PlanarMap& map, const PetalSpec& spec, Complex x, Complex u, bool center, double margin) {
  try {
    const LocalChart& chart = *spec.chart;
    const Point p = chart.from_local(x, u);
    const auto [x1, u1] = chart.to_local(map(p));
    if (!is_finite(x1) || !is_finite(u1)) return false;
    const double du = std::abs(u1 - u);
    if (center) return std::abs(x1) < std::abs(x) && std::abs(x) - std::abs(x1) > margin * du;
    const double d0 = std::abs(angle_difference(std::arg(x), spec.theta(u)));
    const double d1 = std::abs(angle_difference(std::arg(x1), spec.theta(u1)));
    return d1 < d0 && std::abs(x) * (d0 - d1) > margin * du;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

int petal_probe_failures(const PlanarMap& map, const PetalSpec& spec, int probe_points, double margin) {
  if (!spec.chart) throw Error(ErrorKind::Precondition, "petal has no chart");
  const double hw = spec.half_width();
  int failures = 0;
  // Low-discrepancy probe: half in the central half-sector, half in the
  // middle band 1/3..5/3 of the half-width on either side.
  for (int i = 0; i < probe_points; ++i) {
    const double a = frac(0.5 + i * 0.6180339887498949);
    const double b = frac(0.5 + i * 0.7548776662466927);
    const double c = frac(0.5 + i * 0.5698402909980532);
    const double r = spec.eps * (0.1 + 0.85 * a);
    const Complex u = std::polar(2.0 * spec.eps * 0.95 * std::sqrt(b), 2.0 * std::numbers::pi * c);
    const bool center = i % 2 == 0;
    double offset;
    if (center) {
      offset = (2.0 * frac(0.3 + i * 0.4142135623730950) - 1.0) * 0.49 * hw;
    } else {
      const double mag = (1.0 / 3.0 + (4.0 / 3.0) * frac(0.3 + i * 0.4142135623730950)) * hw;
      offset = (i / 2) % 2 == 0 ? mag : -mag;
    }
    const Complex x = std::polar(r, spec.theta(u) + offset);
    if (!probe_ok(map, spec, x, u, center, margin)) ++failures;
  }
  return failures;
}

CalibrationResult calibrate_petal(const PlanarMap& map, PetalSpec spec, const CalibrationOptions& opts) {
  if (!spec.chart) throw Error(ErrorKind::Precondition, "petal has no chart");
  double eps = opts.eps_start;
  for (int h = 0; h <= opts.max_halvings; ++h) {
    PetalSpec trial = make_petal(spec.chart, spec.m, eps);
    trial.angle_shift = spec.angle_shift;
    if (petal_probe_failures(map, trial, opts.probe_points, opts.margin) == 0) return {std::move(trial), h, 0};
    eps *= 0.5;
  }
  throw Error(ErrorKind::CalibrationFailed, "petal estimates failed after " + std::to_string(opts.max_halvings) +
                                                " halvings of eps");
}

Stepper make_inverse_stepper(const PlanarMap& map) {
  struct Jacobian {
    PolyEvaluator fzz, fzw, fwz, fww;
  };
  auto jac = std::make_shared<const Jacobian>(
      Jacobian{PolyEvaluator(map.pz().dz()), PolyEvaluator(map.pz().dw()), PolyEvaluator(map.pw().dz()),
               PolyEvaluator(map.pw().dw())});
  return [map, jac](Point p) {
    const Point fp = map(p);
    Point q = p - (fp - p);
    for (int it = 0; it < 50; ++it) {
      const Point r = map(q) - p;
      const Complex a = jac->fzz(q.z, q.w), b = jac->fzw(q.z, q.w);
      const Complex c = jac->fwz(q.z, q.w), d = jac->fww(q.z, q.w);
      const Complex det = a * d - b * c;
      if (std::abs(det) < 1e-300) break;
      const Point step{(d * r.z - b * r.w) / det, (a * r.w - c * r.z) / det};
      q = q - step;
      if (norm(step) <= 1e-16 * (1.0 + norm(q))) return q;
    }
    throw Error(ErrorKind::CalibrationFailed, "local inverse did not converge");
  };
}

PetalReport petal_convergence_test(const PlanarMap& map, const PetalSpec& spec, int n_seeds, int budget,
                                   const PetalTestOptions& opts, const Stepper& step) {
  if (!spec.chart) throw Error(ErrorKind::Precondition, "petal has no chart");
  if (n_seeds < 1 || budget < 10) throw Error(ErrorKind::Precondition, "petal test needs seeds and budget >= 10");
  const Stepper advance = step ? step : Stepper([&map](Point p) { return map(p); });
  const LocalChart& chart = *spec.chart;

  PetalReport rep;
  rep.base = spec.base;
  rep.k = spec.k;
  rep.m = spec.m;
  rep.eps = spec.eps;
  rep.theta0 = spec.theta(0.0);
  rep.repelling = opts.repelling;
  rep.budget = budget;

  std::mt19937_64 rng(opts.rng_seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double hw = spec.half_width();
  // Along x' = x^k the quantity sin((k-1) delta) / |x|^(k-1) is conserved, so
  // a repelling seed at |x| >= eps/2 reaches |x| = eps before its angle
  // offset delta crosses into an attracting sector when
  // sin((k-1) delta) < 2^(1-k).
  const double max_offset = opts.repelling ? 0.8 * std::asin(std::pow(2.0, 1 - spec.k)) / (spec.k - 1) : 0.8 * hw;
  const double target_rate = 1.0 / (spec.k - 1);
  const int decade = budget / 10;
  double rate_sum = 0.0;
  rep.min_rate = std::numeric_limits<double>::infinity();
  rep.max_rate = -std::numeric_limits<double>::infinity();

  for (int s = 0; s < n_seeds; ++s) {
    SeedOutcome o;
    const double r = spec.eps * (0.5 + 0.45 * unif(rng));
    o.u0 = std::polar(spec.eps * 0.95 * std::sqrt(unif(rng)), 2.0 * std::numbers::pi * unif(rng));
    o.x0 = std::polar(r, spec.theta(o.u0) + (2.0 * unif(rng) - 1.0) * max_offset);
    Point p = chart.from_local(o.x0, o.u0);
    double abs_x_decade = r;
    double abs_x = r;
    o.max_abs_u = std::abs(o.u0);
    for (int n = 1; n <= budget; ++n) {
      p = advance(p);
      const auto [x, u] = chart.to_local(p);
      abs_x = std::abs(x);
      o.max_abs_u = std::max(o.max_abs_u, std::abs(u));
      if (!is_finite(x) || !is_finite(u) || abs_x >= spec.eps || std::abs(u) >= 2.0 * spec.eps) {
        o.exited = true;
        o.exit_step = n;
        break;
      }
      if (n == decade) abs_x_decade = abs_x;
    }
    o.final_abs_x = abs_x;
    if (o.exited && !opts.repelling)
      throw Error(ErrorKind::CalibrationFailed, "seed left U_eps at step " + std::to_string(o.exit_step));
    if (!o.exited) {
      o.rate_exponent = std::log10(abs_x_decade / abs_x);
      o.converged = abs_x < r && std::abs(o.rate_exponent - target_rate) <= opts.rate_tolerance * target_rate;
      rate_sum += o.rate_exponent;
      rep.min_rate = std::min(rep.min_rate, o.rate_exponent);
      rep.max_rate = std::max(rep.max_rate, o.rate_exponent);
    }
    rep.converged += o.converged ? 1 : 0;
    rep.exited += o.exited ? 1 : 0;
    rep.seeds.push_back(o);
  }
  const int stayed = n_seeds - rep.exited;
  if (stayed > 0) {
    rep.mean_rate = rate_sum / stayed;
  } else {
    rep.min_rate = rep.max_rate = 0.0;
  }
  return rep;
}

void write_petal_report(std::ostream& os, const PetalReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "base=%.17g,%.17g,%.17g,%.17g\n", r.base.z.real(), r.base.z.imag(), r.base.w.real(),
                r.base.w.imag());
  os << buf;
  os << "k=" << r.k << "\nm=" << r.m << "\n";
  std::snprintf(buf, sizeof buf, "eps=%.17g\ntheta_u0=%.17g\n", r.eps, r.theta0);
  os << buf;
  os << "mode=" << (r.repelling ? "repelling" : "attracting") << "\nbudget=" << r.budget
     << "\nseeds=" << r.seeds.size() << "\nconverged=" << r.converged << "\nexited=" << r.exited << "\n";
  std::snprintf(buf, sizeof buf, "rate_exponent_min=%.6g\nrate_exponent_max=%.6g\nrate_exponent_mean=%.6g\n",
                r.min_rate, r.max_rate, r.mean_rate);
  os << buf;
  os << "seed,x0_re,x0_im,u0_re,u0_im,converged,exited,exit_step,final_abs_x,max_abs_u,rate_exponent\n";
  for (std::size_t i = 0; i < r.seeds.size(); ++i) {
    const SeedOutcome& o = r.seeds[i];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%d,%d,%d,%.6g,%.6g,%.6g\n", i, o.x0.real(),
                  o.x0.imag(), o.u0.real(), o.u0.imag(), o.converged ? 1 : 0, o.exited ? 1 : 0, o.exit_step,
                  o.final_abs_x, o.max_abs_u, o.rate_exponent);
    os << buf;
  }
}

}  // namespace fatou
