#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "fatou/siegel.hpp"

namespace fatou {

Complex rotation_multiplier(double theta) { return std::polar(1.0, 2.0 * std::numbers::pi * theta); }

UnitPowers::UnitPowers(Complex base) : base_(base) {
  if (std::abs(std::abs(base) - 1.0) > kMaxDrift) throw Error(ErrorKind::Precondition, "UnitPowers needs |base| = 1");
}

void UnitPowers::advance() {
  value_ *= base_;
  ++n_;
  if (n_ % kRenormalizeEvery == 0) {
    const double modulus = std::abs(value_);
    const double drift = std::abs(modulus - 1.0);
    max_drift_ = std::max(max_drift_, drift);
    if (drift >= kMaxDrift) throw Error(ErrorKind::NonFinite, "power of lambda drifted off the unit circle");
    value_ /= modulus;
  }
}

// ---------------------------------------------------------------------------
// Linearizer

Complex LinearizerSeries::operator()(Complex z) const {
  Complex acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

LinearizerSeries build_linearizer(double theta, int N) {
  if (N < 3) throw Error(ErrorKind::Precondition, "linearizer order must be at least 3");
  LinearizerSeries eta;
  eta.theta = theta;
  eta.lambda = rotation_multiplier(theta);
  eta.order = N;
  const auto n_sz = static_cast<std::size_t>(N);

  std::vector<Complex> lp(n_sz + 1);
  lp[0] = 1.0;
  for (std::size_t m = 1; m <= n_sz; ++m) lp[m] = lp[m - 1] * eta.lambda;

  std::vector<std::vector<double>> binom(n_sz + 1);
  for (std::size_t j = 0; j <= n_sz; ++j) {
    binom[j].assign(j + 1, 1.0);
    for (std::size_t i = 1; i < j; ++i) binom[j][i] = binom[j - 1][i - 1] + binom[j - 1][i];
  }

  eta.coeffs.assign(n_sz + 1, Complex{});
  eta.coeffs[1] = 1.0;
  // [z^n] eta(lambda z + z^3) = sum_j c_j C(j, i) lambda^(j-i), n = j + 2i.
  // Matching with lambda c_n gives (lambda^n - lambda) c_n = -sum_{j<n} ...
  for (int n = 2; n <= N; ++n) {
    const Complex divisor = lp[n] - eta.lambda;
    if (std::abs(divisor) < 1e-12)
      throw Error(ErrorKind::SmallDivisor, "|lambda^" + std::to_string(n) + " - lambda| < 1e-12");
    Complex rhs{};
    for (int j = n - 2; j >= 1; j -= 2) {
      const int i = (n - j) / 2;
      if (i > j) break;
      rhs += eta.coeffs[j] * binom[j][i] * lp[j - i];
    }
    eta.coeffs[n] = -rhs / divisor;
  }

  double rho = 0.0;
  for (int j = std::max(2, N / 2); j <= N; ++j) {
    const double a = std::abs(eta.coeffs[j]);
    if (a > 0.0) rho = std::max(rho, std::pow(a, 1.0 / j));
  }
  eta.radius_estimate = rho > 0.0 ? 0.5 / rho : 1.0;
  return eta;
}

double conjugacy_residual(const LinearizerSeries& eta, double radius, int samples) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Complex z = std::polar(radius, 2.0 * std::numbers::pi * s / samples);
    worst = std::max(worst, std::abs(eta(cubic_step(eta.lambda, z)) - eta.lambda * eta(z)));
  }
  return worst;
}

void write_linearizer(std::ostream& os, const LinearizerSeries& eta) {
  char buf[96];
  for (int j = 1; j <= eta.order; ++j) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", j, eta.coeffs[j].real(), eta.coeffs[j].imag());
    os << buf;
  }
}

// ---------------------------------------------------------------------------
// alpha_n and the reciprocal coordinate

AlphaTrack alpha_track(double theta, Complex z0, int n_max) {
  if (n_max < 0) throw Error(ErrorKind::Precondition, "n_max must be non-negative");
  const Complex lambda = rotation_multiplier(theta);
  AlphaTrack track;
  track.z0 = z0;
  track.alphas.reserve(static_cast<std::size_t>(n_max) + 1);
  track.alphas.push_back(z0);
  UnitPowers inv(1.0 / lambda);
  Complex z = z0;
  for (int n = 1; n <= n_max; ++n) {
    z = checked(cubic_step(lambda, z), "Siegel orbit");
    inv.advance();
    const Complex alpha = inv.value() * z;
    track.alphas.push_back(alpha);
    track.sup_dev = std::max(track.sup_dev, std::abs(alpha - z0));
    track.max_modulus_mismatch = std::max(track.max_modulus_mismatch, std::abs(std::abs(alpha) - std::abs(z)));
  }
  return track;
}

Complex HalfplaneSpec::sample(double depth, double lateral) const {
  const double r = std::abs(z0);
  const Complex e = z0 / r;
  const double unit = K / r;
  return e * Complex(-depth * unit, lateral * unit);
}

namespace {

struct ReciprocalTrace {
  std::vector<Complex> u;
  std::vector<Complex> alpha;
};

// W_{n+1} = g_{n+1}(W_n) with g_{n+1}(w) = w + alpha_n w^2 + lambda^(1-2n) w^3.
ReciprocalTrace reciprocal_trace(Complex lambda, Complex z0, Complex w0, int n) {
  ReciprocalTrace tr;
  tr.u.reserve(static_cast<std::size_t>(n) + 1);
  tr.alpha.reserve(static_cast<std::size_t>(n) + 1);
  UnitPowers inv(1.0 / lambda);
  UnitPowers inv2(1.0 / (lambda * lambda));
  Complex z = z0;
  Complex w = w0;
  tr.u.push_back(1.0 / w);
  tr.alpha.push_back(z0);
  for (int k = 0; k < n; ++k) {
    const Complex alpha = tr.alpha.back();
    const Complex cubic = lambda * inv2.value();
    w = w + alpha * w * w + cubic * w * w * w;
    tr.u.push_back(checked(1.0 / w, "reciprocal coordinate"));
    z = cubic_step(lambda, z);
    inv.advance();
    inv2.advance();
    tr.alpha.push_back(inv.value() * z);
  }
  return tr;
}

void require_skew(const PlanarMap& map) {
  if (map.family() != MapFamily::SkewSiegel) throw Error(ErrorKind::Precondition, "operation needs the skew-product map");
}

bool grows_after_transient(const std::vector<Complex>& u, int transient) {
  for (std::size_t n = static_cast<std::size_t>(transient); n + 1 < u.size(); ++n)
    if (std::abs(u[n + 1]) <= std::abs(u[n])) return false;
  return std::abs(u.back()) > std::abs(u.front());
}

}  // namespace

HalfplaneSpec calibrate_halfplane(const PlanarMap& map, Complex z0, double kappa, int max_doublings) {
  require_skew(map);
  if (z0 == Complex{}) throw Error(ErrorKind::Precondition, "half-plane needs z0 != 0");
  constexpr int kProbePoints = 16;
  constexpr int kProbeSteps = 2000;
  constexpr int kTransient = 100;
  const Complex lambda = map.skew()->lambda;
  HalfplaneSpec spec{z0, 0.0, kappa, 0};
  for (int attempt = 0; attempt <= max_doublings; ++attempt) {
    spec.kappa = kappa;
    spec.K = kappa / std::abs(z0);
    spec.doublings = attempt;
    bool ok = true;
    for (int i = 0; i < kProbePoints && ok; ++i) {
      const double lateral = -4.0 + 8.0 * i / (kProbePoints - 1);
      const Complex u0 = spec.sample(1.0, lateral);
      ok = grows_after_transient(reciprocal_trace(lambda, z0, 1.0 / u0, kProbeSteps).u, kTransient);
    }
    if (ok) return spec;
    kappa *= 2.0;
  }
  throw Error(ErrorKind::CalibrationFailed, "half-plane probe did not escape after " +
                                                std::to_string(max_doublings) + " doublings of kappa");
}

ReciprocalReport reciprocal_recursion_check(const PlanarMap& map, Complex z0, Complex w0, int n_max) {
  require_skew(map);
  if (w0 == Complex{}) throw Error(ErrorKind::Precondition, "reciprocal recursion needs w0 != 0");
  if (n_max < 1) throw Error(ErrorKind::Precondition, "n_max must be positive");
  const Complex lambda = map.skew()->lambda;
  ReciprocalReport rep;
  rep.z0 = z0;
  rep.w0 = w0;
  rep.n_max = n_max;
  ReciprocalTrace tr = reciprocal_trace(lambda, z0, w0, n_max);

  std::vector<double> scaled;
  scaled.reserve(static_cast<std::size_t>(n_max));
  for (int n = 0; n < n_max; ++n) {
    const double d = std::abs(tr.u[n + 1] - tr.u[n] + tr.alpha[n]);
    rep.defects.push_back(d);
    scaled.push_back(d * std::abs(tr.u[n]));
  }
  rep.fitted_constant = *std::max_element(scaled.begin(), scaled.end());
  std::vector<double> sorted = scaled;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  rep.median_scaled_defect = sorted[sorted.size() / 2];
  if (!std::isfinite(rep.fitted_constant)) throw Error(ErrorKind::NonFinite, "defect constant is not finite");

  rep.transient = 0;
  for (int n = 0; n < n_max; ++n)
    if (std::abs(tr.u[n + 1]) <= std::abs(tr.u[n])) rep.transient = n + 1;
  rep.monotone_after_transient = rep.transient <= 100;

  // f^n = phi_n^-1 o G_n o ... o G_1, so lambda^n w_n = 1/u_n.
  Point p{z0, w0};
  UnitPowers pw(lambda);
  for (int n = 1; n <= std::min(n_max, 1000); ++n) {
    p = map(p);
    pw.advance();
    const Complex expect = 1.0 / tr.u[n];
    rep.max_consistency_error = std::max(rep.max_consistency_error, std::abs(pw.value() * p.w - expect) / std::abs(expect));
  }
  rep.u = std::move(tr.u);
  return rep;
}

double conjugation_identity_error(const PlanarMap& map, int n, Point p) {
  require_skew(map);
  if (n < 1) throw Error(ErrorKind::Precondition, "conjugation index starts at 1");
  const Complex lambda = map.skew()->lambda;
  UnitPowers pw(lambda);
  for (int i = 1; i < n; ++i) pw.advance();
  const Complex l_prev = pw.value();  // lambda^(n-1)
  const Complex l_n = l_prev * lambda;
  const Complex l_inv_prev = 1.0 / l_prev;
  const Point fq = map({p.z, l_inv_prev * p.w});
  const Point lhs{fq.z, l_n * fq.w};
  const Complex cubic = lambda * l_inv_prev * l_inv_prev;  // lambda^(3-2n)
  const Point rhs{lambda * p.z + p.z * p.z * p.z, p.w + l_inv_prev * p.z * p.w * p.w + cubic * p.w * p.w * p.w};
  return norm(lhs - rhs) / std::max(norm(rhs), 1e-300);
}

}  // namespace fatou
