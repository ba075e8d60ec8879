#include <algorithm>
#include <cmath>

#include "fatou/algebra.hpp"

namespace fatou {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroForm: return "ZeroForm";
    case ErrorKind::BadOrder: return "BadOrder";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::SmallDivisor: return "SmallDivisor";
    case ErrorKind::CalibrationFailed: return "CalibrationFailed";
    case ErrorKind::SingularSample: return "SingularSample";
    case ErrorKind::NotOnCurve: return "NotOnCurve";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::DegenerateFamily: return "DegenerateFamily";
    case ErrorKind::TrackingAmbiguity: return "TrackingAmbiguity";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Precondition: return "Precondition";
  }
  return "Unknown";
}

Complex checked(Complex c, std::string_view context) {
  if (!is_finite(c)) throw Error(ErrorKind::NonFinite, std::string(context));
  return c;
}

// ---------------------------------------------------------------------------
// BivarPoly

BivarPoly::BivarPoly(Terms terms) : terms_(std::move(terms)) { canonicalize(); }

void BivarPoly::canonicalize() {
  degree_ = -1;
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first.first < 0 || it->first.second < 0)
      throw Error(ErrorKind::Precondition, "negative exponent");
    checked(it->second, "polynomial coefficient");
    if (it->second == Complex{}) {
      it = terms_.erase(it);
    } else {
      degree_ = std::max(degree_, it->first.first + it->first.second);
      ++it;
    }
  }
}

BivarPoly BivarPoly::constant(Complex c) { return monomial(c, 0, 0); }

BivarPoly BivarPoly::monomial(Complex c, int i, int j) {
  Terms t;
  t[{i, j}] = c;
  return BivarPoly(std::move(t));
}

Complex BivarPoly::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? Complex{} : it->second;
}

double BivarPoly::coeff_scale() const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) s = std::max(s, std::abs(c));
  return s;
}

Complex BivarPoly::operator()(Complex z, Complex w) const {
  if (terms_.empty()) return {};
  const int d = degree_;
  std::vector<Complex> zp(static_cast<std::size_t>(d) + 1), wp(static_cast<std::size_t>(d) + 1);
  zp[0] = 1.0;
  wp[0] = 1.0;
  for (int n = 1; n <= d; ++n) {
    zp[n] = zp[n - 1] * z;
    wp[n] = wp[n - 1] * w;
  }
  Complex acc{};
  for (const auto& [e, c] : terms_) acc += c * zp[e.first] * wp[e.second];
  return acc;
}

BivarPoly BivarPoly::dz() const {
  Terms t;
  for (const auto& [e, c] : terms_)
    if (e.first > 0) t[{e.first - 1, e.second}] = c * static_cast<double>(e.first);
  return BivarPoly(std::move(t));
}

BivarPoly BivarPoly::dw() const {
  Terms t;
  for (const auto& [e, c] : terms_)
    if (e.second > 0) t[{e.first, e.second - 1}] = c * static_cast<double>(e.second);
  return BivarPoly(std::move(t));
}

BivarPoly BivarPoly::pow(int n) const {
  if (n < 0) throw Error(ErrorKind::Precondition, "negative power");
  BivarPoly result = constant(1.0);
  BivarPoly base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

BivarPoly BivarPoly::translated(Complex a, Complex b) const {
  BivarPoly shifted_z = z() + constant(a);
  BivarPoly shifted_w = w() + constant(b);
  BivarPoly result;
  for (const auto& [e, c] : terms_)
    result = result + c * (shifted_z.pow(e.first) * shifted_w.pow(e.second));
  return result;
}

BivarPoly BivarPoly::pruned(double rel_tol) const {
  const double cut = rel_tol * coeff_scale();
  Terms t;
  for (const auto& [e, c] : terms_)
    if (std::abs(c) > cut) t[e] = c;
  return BivarPoly(std::move(t));
}

BivarPoly BivarPoly::operator-() const { return Complex(-1.0) * *this; }

BivarPoly operator+(const BivarPoly& a, const BivarPoly& b) {
  BivarPoly::Terms t = a.terms_;
  for (const auto& [e, c] : b.terms_) t[e] += c;
  return BivarPoly(std::move(t));
}

BivarPoly operator-(const BivarPoly& a, const BivarPoly& b) {
  BivarPoly::Terms t = a.terms_;
  for (const auto& [e, c] : b.terms_) t[e] -= c;
  return BivarPoly(std::move(t));
}

BivarPoly operator*(const BivarPoly& a, const BivarPoly& b) {
  BivarPoly::Terms t;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) t[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
  return BivarPoly(std::move(t));
}

BivarPoly operator*(Complex c, const BivarPoly& p) {
  BivarPoly::Terms t;
  for (const auto& [e, v] : p.terms_) t[e] = c * v;
  return BivarPoly(std::move(t));
}

PolyDivision divide(const BivarPoly& num, const BivarPoly& den, double rel_tol) {
  if (den.is_zero()) throw Error(ErrorKind::Precondition, "division by the zero polynomial");
  const auto [lead_exp, lead_coeff] = *den.terms().rbegin();
  BivarPoly::Terms rem = num.terms();
  BivarPoly::Terms quot;
  BivarPoly::Terms leftover;
  double scale = num.coeff_scale();
  while (!rem.empty()) {
    auto top = std::prev(rem.end());
    const auto [e, c] = *top;
    if (std::abs(c) <= rel_tol * scale) {
      rem.erase(top);
      continue;
    }
    if (e.first < lead_exp.first || e.second < lead_exp.second) {
      leftover[e] = c;
      rem.erase(top);
      continue;
    }
    const Complex factor = c / lead_coeff;
    const int di = e.first - lead_exp.first;
    const int dj = e.second - lead_exp.second;
    quot[{di, dj}] += factor;
    for (const auto& [de, dc] : den.terms()) rem[{de.first + di, de.second + dj}] -= factor * dc;
    rem.erase(e);
    for (const auto& [re, rc] : rem) scale = std::max(scale, std::abs(rc));
  }
  return {BivarPoly(std::move(quot)), BivarPoly(std::move(leftover))};
}

// ---------------------------------------------------------------------------
// BinaryForm

BinaryForm::BinaryForm(int degree) : BinaryForm(degree, std::vector<Complex>(static_cast<std::size_t>(std::max(degree, 0)) + 1)) {}

BinaryForm::BinaryForm(int degree, std::vector<Complex> coeffs) : degree_(degree), coeffs_(std::move(coeffs)) {
  if (degree < 0) throw Error(ErrorKind::Precondition, "negative form degree");
  if (coeffs_.size() != static_cast<std::size_t>(degree) + 1)
    throw Error(ErrorKind::Precondition, "binary form needs degree+1 coefficients");
  for (auto c : coeffs_) checked(c, "binary form coefficient");
}

Complex BinaryForm::operator()(Complex v1, Complex v2) const {
  // Homogeneous Horner: sum c_i v1^(d-i) v2^i.
  Complex acc{};
  Complex p2 = 1.0;
  std::vector<Complex> p1(coeffs_.size());
  p1[0] = 1.0;
  for (std::size_t n = 1; n < p1.size(); ++n) p1[n] = p1[n - 1] * v1;
  for (int i = 0; i <= degree_; ++i) {
    acc += coeffs_[i] * p1[degree_ - i] * p2;
    p2 *= v2;
  }
  return acc;
}

double BinaryForm::scale() const {
  double s = 0.0;
  for (auto c : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

BinaryForm BinaryForm::normalized() const {
  const double s = scale();
  if (s == 0.0) throw Error(ErrorKind::ZeroForm, "cannot normalize the zero form");
  std::vector<Complex> c(coeffs_);
  for (auto& x : c) x /= s;
  return BinaryForm(degree_, std::move(c));
}

BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
  BinaryForm out(a.degree_ + b.degree_);
  for (int i = 0; i <= a.degree_; ++i)
    for (int j = 0; j <= b.degree_; ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return out;
}

BinaryForm homogeneous_part(const BivarPoly& p, int j) {
  if (j < 0) throw Error(ErrorKind::Precondition, "negative grading index");
  BinaryForm out(j);
  for (const auto& [e, c] : p.terms())
    if (e.first + e.second == j) out.coeff(e.second) = c;
  return out;
}

BivarPoly to_poly(const BinaryForm& f) {
  BivarPoly::Terms t;
  for (int i = 0; i <= f.degree(); ++i) t[{f.degree() - i, i}] = f.coeff(i);
  return BivarPoly(std::move(t));
}

// ---------------------------------------------------------------------------
// ProjPoint

ProjPoint::ProjPoint(Complex v1, Complex v2) {
  checked(v1, "projective coordinate");
  checked(v2, "projective coordinate");
  if (v1 == Complex{} && v2 == Complex{}) throw Error(ErrorKind::Precondition, "(0,0) is not a projective point");
  if (std::abs(v1) >= std::abs(v2)) {
    v2_ = v2 / v1;
    v1_ = 1.0;
  } else {
    v1_ = v1 / v2;
    v2_ = 1.0;
  }
}

double ProjPoint::distance(Complex a1, Complex a2, Complex b1, Complex b2) {
  const double na = std::hypot(std::abs(a1), std::abs(a2));
  const double nb = std::hypot(std::abs(b1), std::abs(b2));
  return std::min(1.0, std::abs(a1 * b2 - a2 * b1) / (na * nb));
}

double ProjPoint::distance(const ProjPoint& a, const ProjPoint& b) {
  return distance(a.v1_, a.v2_, b.v1_, b.v2_);
}

}  // namespace fatou
