#pragma once

// Bivariate complex polynomials, binary forms and the projective line.

#include <complex>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fatou/error.hpp"

namespace fatou {

using Complex = std::complex<double>;

inline bool is_finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

// Throws NonFinite when c holds NaN or Inf.
Complex checked(Complex c, std::string_view context);

class BinaryForm;

// Sparse polynomial in (z, w). Keys are exponent pairs (i, j) for z^i w^j;
// zero coefficients are never stored.
class BivarPoly {
 public:
  using Exponent = std::pair<int, int>;
  using Terms = std::map<Exponent, Complex>;

  BivarPoly() = default;
  explicit BivarPoly(Terms terms);

  static BivarPoly constant(Complex c);
  static BivarPoly monomial(Complex c, int i, int j);
  static BivarPoly z() { return monomial(1.0, 1, 0); }
  static BivarPoly w() { return monomial(1.0, 0, 1); }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  // -1 for the zero polynomial.
  int degree() const noexcept { return degree_; }
  Complex coeff(int i, int j) const;
  double coeff_scale() const;

  // Terms are summed in key order with powers built by repeated
  // multiplication, so the rounding of an evaluation is reproducible.
  Complex operator()(Complex z, Complex w) const;

  BivarPoly dz() const;
  BivarPoly dw() const;
  BivarPoly pow(int n) const;
  // p(z + a, w + b)
  BivarPoly translated(Complex a, Complex b) const;
  // Drops coefficients with |c| <= rel_tol * coeff_scale().
  BivarPoly pruned(double rel_tol) const;

  BivarPoly operator-() const;
  friend BivarPoly operator+(const BivarPoly& a, const BivarPoly& b);
  friend BivarPoly operator-(const BivarPoly& a, const BivarPoly& b);
  friend BivarPoly operator*(const BivarPoly& a, const BivarPoly& b);
  friend BivarPoly operator*(Complex c, const BivarPoly& p);
  friend bool operator==(const BivarPoly& a, const BivarPoly& b) { return a.terms_ == b.terms_; }

 private:
  void canonicalize();

  Terms terms_;
  int degree_ = -1;
};

struct PolyDivision {
  BivarPoly quotient;
  BivarPoly remainder;
};

// Multivariate division with lex order z > w. For a single divisor the
// remainder vanishes iff the divisor divides the numerator. Coefficients
// below rel_tol times the running scale are treated as cancelled.
PolyDivision divide(const BivarPoly& num, const BivarPoly& den, double rel_tol = 1e-12);

// Homogeneous polynomial of degree d with coefficients for
// z^d, z^(d-1) w, ..., w^d.
class BinaryForm {
 public:
  BinaryForm() = default;
  explicit BinaryForm(int degree);
  BinaryForm(int degree, std::vector<Complex> coeffs);

  int degree() const noexcept { return degree_; }
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  Complex coeff(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  Complex& coeff(int i) { return coeffs_.at(static_cast<std::size_t>(i)); }

  Complex operator()(Complex v1, Complex v2) const;
  double scale() const;
  bool is_zero() const { return scale() == 0.0; }
  // Scaled so the largest coefficient modulus is one.
  BinaryForm normalized() const;

  friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b);

 private:
  int degree_ = 0;
  std::vector<Complex> coeffs_{Complex{}};
};

BinaryForm homogeneous_part(const BivarPoly& p, int j);
BivarPoly to_poly(const BinaryForm& f);

// Point of P^1, stored with the larger-modulus coordinate equal to 1
// (the first coordinate wins ties).
class ProjPoint {
 public:
  ProjPoint(Complex v1, Complex v2);

  Complex v1() const noexcept { return v1_; }
  Complex v2() const noexcept { return v2_; }

  // Chordal (Fubini-Study sine) distance in [0, 1].
  static double distance(const ProjPoint& a, const ProjPoint& b);
  static double distance(Complex a1, Complex a2, Complex b1, Complex b2);

 private:
  Complex v1_;
  Complex v2_;
};

struct ProjRoot {
  ProjPoint point;
  int multiplicity = 1;
};

// Roots of a univariate polynomial given lowest-degree coefficient first,
// from companion-matrix eigenvalues. Leading coefficient must be nonzero.
std::vector<Complex> companion_roots(std::span<const Complex> coeffs_low_first);

// All projective roots of f with multiplicities summing to deg f.
std::vector<ProjRoot> binary_form_roots(const BinaryForm& f);

// Determinant of the Sylvester matrix built from the full coefficient
// vectors, i.e. the homogeneous resultant; computed on unit-normalized forms.
Complex binary_resultant(const BinaryForm& f, const BinaryForm& g);
bool resultant_vanishes(const BinaryForm& f, const BinaryForm& g, double tol = 1e-10);

// Text format: terms like (0.5+0.1i)*z^2*w joined by + or -.
BivarPoly parse_poly(std::string_view text);
std::string format_poly(const BivarPoly& p);
std::string format_complex(Complex c);

}  // namespace fatou
