#pragma once

// Linearization of the rotation factor z -> lambda z + z^3 and the
// renormalized fiber dynamics of the skew product.

#include <iosfwd>
#include <vector>

#include "fatou/dynamics.hpp"

namespace fatou {

Complex rotation_multiplier(double theta);

inline Complex cubic_step(Complex lambda, Complex z) { return lambda * z + z * z * z; }

// base^n by repeated multiplication. Every 1024 steps the modulus drift is
// checked against 1e-9 and the value is projected back to the unit circle.
class UnitPowers {
 public:
  static constexpr int kRenormalizeEvery = 1024;
  static constexpr double kMaxDrift = 1e-9;

  explicit UnitPowers(Complex base);

  Complex value() const noexcept { return value_; }
  long exponent() const noexcept { return n_; }
  double max_drift() const noexcept { return max_drift_; }
  void advance();

 private:
  Complex base_;
  Complex value_{1.0, 0.0};
  long n_ = 0;
  double max_drift_ = 0.0;
};

// eta(z) = z + sum_{j>=2} c_j z^j with eta(lambda z + z^3) = lambda eta(z).
struct LinearizerSeries {
  double theta = kGoldenMean;
  Complex lambda;
  std::vector<Complex> coeffs;  // coeffs[j] = c_j, coeffs[0] = 0, coeffs[1] = 1
  int order = 0;
  double radius_estimate = 0.0;

  Complex coeff(int j) const { return coeffs.at(static_cast<std::size_t>(j)); }
  Complex operator()(Complex z) const;
};

// Throws SmallDivisor when |lambda^j - lambda| < 1e-12 for some j <= N.
LinearizerSeries build_linearizer(double theta, int N);

// sup over `samples` points of |z| = radius of |eta(lambda z + z^3) - lambda eta(z)|.
double conjugacy_residual(const LinearizerSeries& eta, double radius, int samples = 256);

// One `j,re,im` line per coefficient.
void write_linearizer(std::ostream& os, const LinearizerSeries& eta);

struct AlphaTrack {
  Complex z0;
  std::vector<Complex> alphas;  // alpha_n = lambda^-n z_n
  double sup_dev = 0.0;         // max_n |alpha_n - z0|
  double max_modulus_mismatch = 0.0;  // max_n ||alpha_n| - |z_n||
};

AlphaTrack alpha_track(double theta, Complex z0, int n_max);

// H = {u : Re(u conj z0) < -K} with K = kappa / |z0|.
struct HalfplaneSpec {
  Complex z0;
  double K = 0.0;
  double kappa = 10.0;
  int doublings = 0;

  bool contains(Complex u) const { return (u * std::conj(z0)).real() < -K; }
  // Point of the half-plane at depth `depth` (in units of the boundary
  // offset K / |z0|) and lateral offset `lateral` (same units).
  Complex sample(double depth, double lateral) const;
};

// Throws CalibrationFailed when kappa runs out of doublings.
HalfplaneSpec calibrate_halfplane(const PlanarMap& map, Complex z0, double kappa = 10.0, int max_doublings = 4);

struct ReciprocalReport {
  Complex z0;
  Complex w0;
  int n_max = 0;
  std::vector<Complex> u;        // u_n = 1 / (g_n o ... o g_1)(w0), n = 0..n_max
  std::vector<double> defects;   // d_n = |u_{n+1} - u_n + alpha_n|, n = 0..n_max-1
  double fitted_constant = 0.0;  // max_n d_n |u_n|
  double median_scaled_defect = 0.0;
  double max_consistency_error = 0.0;  // relative gap between lambda^n w_n and 1/u_n, n <= 1000
  int transient = 0;                   // last step at which |u_n| failed to grow
  bool monotone_after_transient = false;
};

ReciprocalReport reciprocal_recursion_check(const PlanarMap& map, Complex z0, Complex w0, int n_max);

// Relative gap between phi_n o f o phi_{n-1}^-1 and the closed form of G_n at p.
double conjugation_identity_error(const PlanarMap& map, int n, Point p);

}  // namespace fatou
