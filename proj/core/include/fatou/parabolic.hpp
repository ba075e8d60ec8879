#pragma once

// Germs tangent to the identity along a curve V = {g = 0}: characteristic
// directions, the non-degeneracy condition, local normal form coordinates,
// and attracting petals.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fatou/dynamics.hpp"

namespace fatou {

// F(base + h) - base - h = F_k(h) + higher order terms.
struct GermData {
  Point base;
  int k = 0;
  BinaryForm fz;
  BinaryForm fw;
};

// Lowest nonvanishing homogeneous part of the displacement at `base`.
// Parts whose coefficients are all below rel_tol times the displacement's
// coefficient scale count as zero.
GermData germ_at(const PlanarMap& map, Point base, double rel_tol = 1e-10);

struct CharDirection {
  ProjPoint v{1.0, 0.0};
  Complex lambda_char;
  bool degenerate = false;
  int multiplicity = 1;
};

struct CharDirectionResult {
  bool dicritical = false;  // every direction is characteristic
  std::vector<CharDirection> directions;
};

// Roots of W(v) = v1 Fk_w(v) - v2 Fk_z(v). Throws ZeroForm when both
// components vanish.
CharDirectionResult char_directions(const BinaryForm& fz, const BinaryForm& fw);

// g_z P + g_w Q at a regular point of {g = 0}. Throws NotOnCurve when
// |g(sample)| > 1e-8 and SingularSample when both partials vanish.
Complex condition_check(const BivarPoly& g, const BivarPoly& P, const BivarPoly& Q, Point sample);

// Local coordinates (x, u) at a regular base point b of V in which the map
// reads x1 = x - x^k (1 + u phi(u)) + O(x^(k+1)), u1 = u + x^k O(x, u).
//
//   x = g(p) / gamma,  gamma^(k-1) = -1 / H(b),  H = g_z P + g_w Q
//   u = sigma * ell(p - b)
//
// ell reads the coordinate along the unit tangent T of V in the frame
// (v, T), v the non-degenerate characteristic direction, so V = {x = 0}
// exactly and v is the x-axis to first order. sigma = |dg(b) v / gamma|
// puts u on the same length scale as x.
class LocalChart {
 public:
  LocalChart(const PlanarMap& map, Point base);

  Point base() const noexcept { return base_; }
  int order() const noexcept { return k_; }
  Complex gamma() const noexcept { return gamma_; }
  Complex sigma() const noexcept { return sigma_; }
  Complex condition_at_base() const noexcept { return h_base_; }
  const CharDirection& direction() const noexcept { return direction_; }
  Point tangent() const noexcept { return tangent_; }
  Point char_vector() const noexcept { return v_; }
  // beta of the linear normal form x1 = x + beta x^k, before rescaling.
  Complex beta() const noexcept { return beta_; }

  // (x, u) of a point near the base.
  std::pair<Complex, Complex> to_local(Point p) const;
  // Inverse of to_local by Newton along v. Throws CalibrationFailed if the
  // solve does not converge.
  Point from_local(Complex x, Complex u) const;
  // Point of V with local coordinate u.
  Point curve_point(Complex u) const { return from_local(0.0, u); }
  // 1 + u phi(u) = H(curve_point(u)) / H(b).
  Complex unit_factor(Complex u) const;

 private:
  Point base_;
  int k_ = 2;
  BivarPoly g_;
  PolyEvaluator g_eval_, gz_eval_, gw_eval_, P_eval_, Q_eval_;
  CharDirection direction_;
  Point v_;
  Point tangent_;
  Complex ell_z_, ell_w_;  // u-row of [v | T]^-1
  Complex h_base_;
  Complex gamma_;
  Complex sigma_;
  Complex beta_;
};

// One attracting sector R_eps(m) = {0 < |x| < eps, |u| < 2 eps,
// |Arg x - theta_u(m)| < pi / (2k - 2)}.
struct PetalSpec {
  std::shared_ptr<const LocalChart> chart;
  Point base;
  int k = 2;
  int m = 1;
  double eps = 0.1;
  // Taylor coefficients of 1 + u phi(u), truncated at degree 2k.
  std::vector<Complex> unit_series;
  // Radius of the sampling circle the series was fitted on.
  double fit_radius = 0.0;
  // Added to theta_u(m). pi/(k-1) turns the sector into the repelling one.
  double angle_shift = 0.0;

  Complex unit(Complex u) const;
  double theta(Complex u) const;
  double half_width() const;
};

// theta_u(m) = (2 m pi - Arg(1 + u phi(u))) / (k - 1)
double petal_angle(int m, int k, Complex unit_value);
// Wrapped to (-pi, pi].
double angle_difference(double a, double b);

// Taylor coefficients of 1 + u phi(u) from Cauchy sampling on |u| = radius.
std::vector<Complex> fit_unit_series(const LocalChart& chart, int degree, double radius);
PetalSpec make_petal(std::shared_ptr<const LocalChart> chart, int m, double eps);

struct NormalForm {
  GermData germ;
  std::shared_ptr<const LocalChart> chart;
  std::vector<PetalSpec> petals;  // m = 1..k-1
  std::string branch_note;
};

// Throws DegenerateDirection if the base has no non-degenerate
// characteristic direction.
NormalForm local_normal_form(const PlanarMap& map, Point base, double eps = 0.1);

bool sector_membership(const PetalSpec& spec, Complex x, Complex u);

struct CalibrationOptions {
  double eps_start = 0.1;
  int max_halvings = 6;
  int probe_points = 64;
  double margin = 10.0;  // per-step gain must exceed margin * |u1 - u|
};

struct CalibrationResult {
  PetalSpec spec;
  int halvings = 0;
  int probe_failures = 0;  // failures at the accepted eps (always 0)
};

// Halves eps until the one-step estimates hold on a probe of R_eps(m) and
// its middle annulus. Throws CalibrationFailed when halvings run out.
CalibrationResult calibrate_petal(const PlanarMap& map, PetalSpec spec, const CalibrationOptions& opts = {});

// Number of probe points violating the one-step estimates at spec.eps.
int petal_probe_failures(const PlanarMap& map, const PetalSpec& spec, int probe_points, double margin);

// Advances an original-coordinate point by one step.
using Stepper = std::function<Point(Point)>;

// Local inverse of the map near V: each call solves F(q) = p by Newton
// started from p - (F(p) - p).
Stepper make_inverse_stepper(const PlanarMap& map);

struct SeedOutcome {
  Complex x0;
  Complex u0;
  bool converged = false;
  bool exited = false;
  int exit_step = -1;
  double final_abs_x = 0.0;
  double max_abs_u = 0.0;
  double rate_exponent = 0.0;
};

struct PetalReport {
  Point base;
  int k = 0;
  int m = 0;
  double eps = 0.0;
  double theta0 = 0.0;
  bool repelling = false;
  int budget = 0;
  std::vector<SeedOutcome> seeds;
  int converged = 0;
  int exited = 0;
  double min_rate = 0.0;
  double max_rate = 0.0;
  double mean_rate = 0.0;
};

struct PetalTestOptions {
  bool repelling = false;     // seeds on the repelling ray; exits are expected
  std::uint64_t rng_seed = 20130415;
  double rate_tolerance = 0.2;
};

// Seeds sampled in R_eps(m) (|u| < eps, |x| in [0.5, 0.95] eps) are followed for `budget` steps in
// local coordinates. In attracting mode a seed leaving U_eps raises
// CalibrationFailed. A seed converges when it stays in U_eps, |x| shrinks,
// and the decay exponent of |x_n| over the last decade is within
// rate_tolerance of 1/(k-1).
PetalReport petal_convergence_test(const PlanarMap& map, const PetalSpec& spec, int n_seeds, int budget,
                                   const PetalTestOptions& opts = {}, const Stepper& step = {});

void write_petal_report(std::ostream& os, const PetalReport& report);

}  // namespace fatou
