#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fatou/algebra.hpp"

namespace fatou {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Normalized coefficients at or below this are exact zeros for the purpose
// of splitting off roots at [1:0] and [0:1].
constexpr double kZeroCoeff = 1e-13;

// p(x) and its derivatives up to order `order`, coefficients lowest first.
Complex eval_derivative(std::span<const Complex> c, int order, Complex x) {
  Complex acc{};
  const int n = static_cast<int>(c.size()) - 1;
  for (int k = n; k >= order; --k) {
    double falling = 1.0;
    for (int r = 0; r < order; ++r) falling *= static_cast<double>(k - r);
    acc = acc * x + c[k] * falling;
  }
  return acc;
}

// Newton on the (order)-th derivative, which has a simple root at a root of
// multiplicity order+1. Keeps the iterate only while |p| does not grow.
Complex polish(std::span<const Complex> c, int order, Complex x) {
  double best = std::abs(eval_derivative(c, 0, x));
  for (int it = 0; it < 8 && best > 0.0; ++it) {
    const Complex f = eval_derivative(c, order, x);
    const Complex df = eval_derivative(c, order + 1, x);
    if (df == Complex{}) break;
    const Complex next = x - f / df;
    if (!is_finite(next)) break;
    const double val = std::abs(eval_derivative(c, 0, next));
    if (val > best) break;
    best = val;
    x = next;
  }
  return x;
}

struct Cluster {
  Complex center;
  int multiplicity;
};

// Groups eigenvalues belonging to one multiple root. An m-fold root splits
// into eigenvalues spread by about eps^(1/m), so a fixed merge distance
// cannot catch higher multiplicities; candidates are grouped loosely and
// kept only when their spread fits that scale.
std::vector<Cluster> cluster_roots(const std::vector<Complex>& roots) {
  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double tol = 1e-2 * (1.0 + std::max(std::abs(roots[i]), std::abs(roots[j])));
      if (std::abs(roots[i] - roots[j]) <= tol) parent[find(i)] = find(j);
    }
  std::vector<std::vector<Complex>> groups;
  std::vector<std::size_t> group_of(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (group_of[r] == n) {
      group_of[r] = groups.size();
      groups.emplace_back();
    }
    groups[group_of[r]].push_back(roots[i]);
  }
  std::vector<Cluster> out;
  for (const auto& g : groups) {
    const int m = static_cast<int>(g.size());
    Complex mean{};
    for (auto r : g) mean += r;
    mean /= static_cast<double>(m);
    double spread = 0.0;
    for (auto r : g) spread = std::max(spread, std::abs(r - mean));
    const double allowed = std::max(1e-7, 100.0 * std::pow(kEps, 1.0 / m)) * (1.0 + std::abs(mean));
    if (m == 1 || spread <= allowed) {
      out.push_back({mean, m});
    } else {
      for (auto r : g) out.push_back({r, 1});
    }
  }
  return out;
}

}  // namespace

std::vector<Complex> companion_roots(std::span<const Complex> c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};
  if (c[n] == Complex{}) throw Error(ErrorKind::Precondition, "companion matrix needs a nonzero leading coefficient");
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NonFinite, "companion eigenvalue solve failed");
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[i] = solver.eigenvalues()[i];
  return roots;
}

std::vector<ProjRoot> binary_form_roots(const BinaryForm& f) {
  if (f.is_zero()) throw Error(ErrorKind::ZeroForm, "roots of the zero form");
  const BinaryForm fn = f.normalized();
  const int d = fn.degree();
  std::vector<ProjRoot> out;

  int lead = 0;
  while (lead <= d && std::abs(fn.coeff(lead)) <= kZeroCoeff) ++lead;
  int trail = 0;
  while (trail <= d && std::abs(fn.coeff(d - trail)) <= kZeroCoeff) ++trail;
  // w^lead divides f: root [1:0]; z^trail divides f: root [0:1].
  if (lead > 0) out.push_back({ProjPoint(1.0, 0.0), lead});
  if (trail > 0) out.push_back({ProjPoint(0.0, 1.0), trail});

  const int s = lead;
  const int e = d - trail;
  if (e > s) {
    std::vector<Complex> poly;
    const bool affine_in_z = std::abs(fn.coeff(s)) >= std::abs(fn.coeff(e));
    if (affine_in_z) {
      // w = 1: sum a_i z^(e-i)
      for (int i = e; i >= s; --i) poly.push_back(fn.coeff(i));
    } else {
      // z = 1: sum a_i w^(i-s)
      for (int i = s; i <= e; ++i) poly.push_back(fn.coeff(i));
    }
    for (const auto& cl : cluster_roots(companion_roots(poly))) {
      const Complex r = polish(poly, cl.multiplicity - 1, cl.center);
      out.push_back({affine_in_z ? ProjPoint(r, 1.0) : ProjPoint(1.0, r), cl.multiplicity});
    }
  }
  std::sort(out.begin(), out.end(), [](const ProjRoot& a, const ProjRoot& b) {
    auto key = [](const ProjRoot& r) {
      return std::make_tuple(r.point.v1().real(), r.point.v1().imag(), r.point.v2().real(), r.point.v2().imag());
    };
    return key(a) < key(b);
  });
  return out;
}

Complex binary_resultant(const BinaryForm& f, const BinaryForm& g) {
  if (f.is_zero() || g.is_zero()) throw Error(ErrorKind::ZeroForm, "resultant with the zero form");
  const BinaryForm a = f.normalized();
  const BinaryForm b = g.normalized();
  const int m = a.degree();
  const int n = b.degree();
  const int size = m + n;
  if (size == 0) return 1.0;
  Eigen::MatrixXcd syl = Eigen::MatrixXcd::Zero(size, size);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) syl(r, r + i) = a.coeff(i);
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) syl(n + r, r + i) = b.coeff(i);
  return syl.partialPivLu().determinant();
}

bool resultant_vanishes(const BinaryForm& f, const BinaryForm& g, double tol) {
  return std::abs(binary_resultant(f, g)) <= tol;
}

}  // namespace fatou
