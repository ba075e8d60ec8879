#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fatou/parabolic.hpp"

namespace fatou {

namespace {

double form_scale(const BinaryForm& a, const BinaryForm& b) { return std::max(a.scale(), b.scale()); }

const TangentParams& require_tangent(const PlanarMap& map) {
  if (!map.tangent()) throw Error(ErrorKind::Precondition, "operation needs a map tangent to the identity along a curve");
  return *map.tangent();
}

}  // namespace

GermData germ_at(const PlanarMap& map, Point base, double rel_tol) {
  const BivarPoly dz = map.pz().translated(base.z, base.w) - BivarPoly::z() - BivarPoly::constant(base.z);
  const BivarPoly dw = map.pw().translated(base.z, base.w) - BivarPoly::w() - BivarPoly::constant(base.w);
  const int top = std::max(dz.degree(), dw.degree());
  if (top < 0) throw Error(ErrorKind::Precondition, "map is the identity");

  GermData germ;
  germ.base = base;
  if (map.tangent()) {
    // The order is known; lower parts only carry rounding from g(base) != 0.
    const int k = map.tangent()->k;
    germ.k = k;
    germ.fz = homogeneous_part(dz, k);
    germ.fw = homogeneous_part(dw, k);
    const double sk = form_scale(germ.fz, germ.fw);
    for (int j = 0; j < k; ++j) {
      const double sj = form_scale(homogeneous_part(dz, j), homogeneous_part(dw, j));
      if (sj > 1e-8 * std::max(sk, 1e-300) && sj > 1e-14)
        throw Error(ErrorKind::NotOnCurve, "base point is not on the fixed curve");
    }
    return germ;
  }

  const double total = std::max(dz.coeff_scale(), dw.coeff_scale());
  for (int j = 0; j <= top; ++j) {
    BinaryForm a = homogeneous_part(dz, j);
    BinaryForm b = homogeneous_part(dw, j);
    if (form_scale(a, b) <= rel_tol * total) continue;
    if (j < 2) throw Error(ErrorKind::Precondition, "map is not tangent to the identity at the base point");
    germ.k = j;
    germ.fz = std::move(a);
    germ.fw = std::move(b);
    return germ;
  }
  throw Error(ErrorKind::Precondition, "map is the identity near the base point");
}

CharDirectionResult char_directions(const BinaryForm& fz, const BinaryForm& fw) {
  if (fz.degree() != fw.degree()) throw Error(ErrorKind::Precondition, "germ components differ in degree");
  const double scale = form_scale(fz, fw);
  if (scale == 0.0) throw Error(ErrorKind::ZeroForm, "leading homogeneous part vanishes");
  const int k = fz.degree();

  // W = v1 Fk_w - v2 Fk_z has degree k + 1.
  BinaryForm W(k + 1);
  for (int i = 0; i <= k; ++i) {
    W.coeff(i) += fw.coeff(i);
    W.coeff(i + 1) -= fz.coeff(i);
  }
  CharDirectionResult out;
  if (W.scale() <= 1e-12 * scale) {
    out.dicritical = true;
    return out;
  }
  for (const ProjRoot& r : binary_form_roots(W)) {
    CharDirection d;
    d.v = r.point;
    d.multiplicity = r.multiplicity;
    const Complex v1 = r.point.v1(), v2 = r.point.v2();
    d.lambda_char = std::abs(v1) >= std::abs(v2) ? fz(v1, v2) / v1 : fw(v1, v2) / v2;
    d.degenerate = std::abs(d.lambda_char) <= 1e-10 * scale;
    out.directions.push_back(d);
  }
  return out;
}

Complex condition_check(const BivarPoly& g, const BivarPoly& P, const BivarPoly& Q, Point s) {
  if (std::abs(g(s.z, s.w)) > 1e-8) throw Error(ErrorKind::NotOnCurve, "sample is not on {g = 0}");
  const Complex gz = g.dz()(s.z, s.w);
  const Complex gw = g.dw()(s.z, s.w);
  if (std::abs(gz) < 1e-30 && std::abs(gw) < 1e-30) throw Error(ErrorKind::SingularSample, "sample is a singular point of V");
  return gz * P(s.z, s.w) + gw * Q(s.z, s.w);
}

// ---------------------------------------------------------------------------
// LocalChart

LocalChart::LocalChart(const PlanarMap& map, Point base)
    : base_(base), k_(require_tangent(map).k), g_(map.tangent()->g), g_eval_(g_), gz_eval_(g_.dz()),
      gw_eval_(g_.dw()), P_eval_(map.tangent()->P), Q_eval_(map.tangent()->Q) {
  const Complex gb = g_eval_(base.z, base.w);
  if (std::abs(gb) > 1e-8) throw Error(ErrorKind::NotOnCurve, "base point is not on {g = 0}");
  const Complex gz = gz_eval_(base.z, base.w);
  const Complex gw = gw_eval_(base.z, base.w);
  const double dg = std::hypot(std::abs(gz), std::abs(gw));
  if (dg < 1e-30) throw Error(ErrorKind::SingularSample, "base point is a singular point of V");

  const GermData germ = germ_at(map, base);
  CharDirectionResult cd;
  try {
    cd = char_directions(germ.fz, germ.fw);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroForm) throw;
    throw Error(ErrorKind::DegenerateDirection, "(P, Q) vanishes at the base point");
  }
  const CharDirection* best = nullptr;
  for (const auto& d : cd.directions)
    if (!d.degenerate && (!best || std::abs(d.lambda_char) > std::abs(best->lambda_char))) best = &d;
  if (!best) throw Error(ErrorKind::DegenerateDirection, "no non-degenerate characteristic direction");
  direction_ = *best;
  v_ = {best->v.v1(), best->v.v2()};
  tangent_ = {-gw / dg, gz / dg};

  const Complex det = v_.z * tangent_.w - v_.w * tangent_.z;
  if (std::abs(det) < 1e-12) throw Error(ErrorKind::DegenerateDirection, "characteristic direction is tangent to V");
  ell_z_ = -v_.w / det;
  ell_w_ = v_.z / det;

  h_base_ = gz * P_eval_(base.z, base.w) + gw * Q_eval_(base.z, base.w);
  if (std::abs(h_base_) < 1e-300) throw Error(ErrorKind::DegenerateDirection, "g_z P + g_w Q vanishes at the base");
  gamma_ = std::exp(-std::log(-h_base_) / static_cast<double>(k_ - 1));
  const Complex dgv = gz * v_.z + gw * v_.w;
  sigma_ = std::abs(dgv / gamma_);
  const Complex pb = P_eval_(base.z, base.w), qb = Q_eval_(base.z, base.w);
  const Complex s = std::abs(v_.z) >= std::abs(v_.w) ? pb / v_.z : qb / v_.w;
  beta_ = std::pow(dgv, k_) * s;
}

std::pair<Complex, Complex> LocalChart::to_local(Point p) const {
  const Complex x = g_eval_(p.z, p.w) / gamma_;
  const Complex u = sigma_ * (ell_z_ * (p.z - base_.z) + ell_w_ * (p.w - base_.w));
  return {x, u};
}

Point LocalChart::from_local(Complex x, Complex u) const {
  const Complex tau = u / sigma_;
  const Point anchor{base_.z + tau * tangent_.z, base_.w + tau * tangent_.w};
  const Complex target = gamma_ * x;
  auto at = [&](Complex s) { return Point{anchor.z + s * v_.z, anchor.w + s * v_.w}; };
  const Complex gz = gz_eval_(base_.z, base_.w), gw = gw_eval_(base_.z, base_.w);
  Complex s = (target - g_eval_(anchor.z, anchor.w)) / (gz * v_.z + gw * v_.w);
  for (int it = 0; it < 60; ++it) {
    const Point p = at(s);
    const Complex f = g_eval_(p.z, p.w) - target;
    const Complex df = gz_eval_(p.z, p.w) * v_.z + gw_eval_(p.z, p.w) * v_.w;
    if (!is_finite(f) || std::abs(df) < 1e-300) break;
    const Complex step = f / df;
    s -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(s))) return at(s);
  }
  throw Error(ErrorKind::CalibrationFailed, "local chart inverse did not converge");
}

Complex LocalChart::unit_factor(Complex u) const {
  const Point p = curve_point(u);
  const Complex h = gz_eval_(p.z, p.w) * P_eval_(p.z, p.w) + gw_eval_(p.z, p.w) * Q_eval_(p.z, p.w);
  return h / h_base_;
}

// ---------------------------------------------------------------------------
// Petal geometry

Complex PetalSpec::unit(Complex u) const {
  Complex acc{};
  for (auto it = unit_series.rbegin(); it != unit_series.rend(); ++it) acc = acc * u + *it;
  return unit_series.empty() ? Complex{1.0} : acc;
}

double PetalSpec::theta(Complex u) const { return petal_angle(m, k, unit(u)) + angle_shift; }

double PetalSpec::half_width() const { return std::numbers::pi / (2.0 * (k - 1)); }

double petal_angle(int m, int k, Complex unit_value) {
  return (2.0 * m * std::numbers::pi - std::arg(unit_value)) / (k - 1);
}

double angle_difference(double a, double b) {
  double d = std::remainder(a - b, 2.0 * std::numbers::pi);
  if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
  return d;
}

std::vector<Complex> fit_unit_series(const LocalChart& chart, int degree, double radius) {
  if (degree < 0) throw Error(ErrorKind::Precondition, "series degree must be non-negative");
  if (radius <= 0.0) return {Complex{1.0}};
  const int M = 4 * (degree + 1);
  std::vector<Complex> samples(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) samples[m] = chart.unit_factor(std::polar(radius, 2.0 * std::numbers::pi * m / M));
  std::vector<Complex> coeffs(static_cast<std::size_t>(degree) + 1);
  for (int j = 0; j <= degree; ++j) {
    Complex acc{};
    for (int m = 0; m < M; ++m) acc += samples[m] * std::polar(1.0, -2.0 * std::numbers::pi * j * m / M);
    coeffs[j] = acc / (static_cast<double>(M) * std::pow(radius, j));
  }
  return coeffs;
}

namespace {

// 1 + u phi(u) is 1 at u = 0; on |u| = radius / 2 the truncated series must
// agree with the sampled factor to 1%.
bool unit_series_valid(const LocalChart& chart, const PetalSpec& spec, double radius) {
  if (std::abs(spec.unit(0.0) - 1.0) > 1e-3) return false;
  for (int j = 0; j < 8; ++j) {
    const Complex u = std::polar(0.5 * radius, 2.0 * std::numbers::pi * (j + 0.5) / 8);
    const Complex exact = chart.unit_factor(u);
    if (!(std::abs(spec.unit(u) - exact) <= 1e-2 * std::abs(exact))) return false;
  }
  return true;
}

}  // namespace

PetalSpec make_petal(std::shared_ptr<const LocalChart> chart, int m, double eps) {
  if (!chart) throw Error(ErrorKind::Precondition, "petal needs a chart");
  if (eps <= 0.0) throw Error(ErrorKind::Precondition, "petal radius must be positive");
  const int k = chart->order();
  if (m < 1 || m > k - 1) throw Error(ErrorKind::Precondition, "petal index must lie in 1..k-1");
  PetalSpec spec;
  spec.base = chart->base();
  spec.k = k;
  spec.m = m;
  spec.eps = eps;
  // The sampling circle may leave the regular part of V or the range of the
  // chart inverse; shrink it until the series reproduces the pointwise unit
  // factor inside the circle.
  double radius = 2.0 * eps;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 60) throw Error(ErrorKind::CalibrationFailed, "unit series fit did not validate");
    try {
      spec.unit_series = fit_unit_series(*chart, 2 * k, radius);
      if (unit_series_valid(*chart, spec, radius)) break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CalibrationFailed) throw;
    }
    radius *= 0.5;
  }
  spec.fit_radius = radius;
  spec.chart = std::move(chart);
  return spec;
}

NormalForm local_normal_form(const PlanarMap& map, Point base, double eps) {
  NormalForm nf;
  auto chart = std::make_shared<const LocalChart>(map, base);
  nf.germ = germ_at(map, base);
  nf.chart = chart;
  for (int m = 1; m <= chart->order() - 1; ++m) nf.petals.push_back(make_petal(chart, m, eps));
  std::ostringstream note;
  note << "gamma = exp(-log(-H(b)) / (k-1)) on the principal branch of log; theta_u(m) uses the principal Arg of "
          "1 + u phi(u)";
  nf.branch_note = note.str();
  return nf;
}

bool sector_membership(const PetalSpec& spec, Complex x, Complex u) {
  const double ax = std::abs(x);
  if (!(ax > 0.0 && ax < spec.eps) || !(std::abs(u) < 2.0 * spec.eps)) return false;
  return std::abs(angle_difference(std::arg(x), spec.theta(u))) < spec.half_width();
}

}  // namespace fatou
