#pragma once

// Attracting directions of the cusp family (z, w) + (z^p - w^q)^k (z, -w)
// along loops t -> t e^(2 pi i s) in V, and the permutation one loop induces.

#include <iosfwd>
#include <string>
#include <vector>

#include "fatou/dynamics.hpp"

namespace fatou {

// Throws DegenerateFamily for p = q, Precondition for other violations
// (p, q >= 1 coprime, k >= 2).
void validate_cusp_params(const CuspParams& params);

// Solutions of alpha^(k-1) = -1 / ((p+q)^k t^(kpq)): along the direction
// alpha (t^q, -t^p) the leading term of F - Id at (t^q, t^p) is
// alpha^k (p+q)^k t^(kpq) (t^q, -t^p).
struct DirectionFiber {
  CuspParams params;
  Complex t;
  std::vector<Complex> alphas;  // sorted by argument in [0, 2 pi)
  double max_residual = 0.0;    // max |alpha^(k-1) (p+q)^k t^(kpq) + 1|
};

DirectionFiber direction_fiber(const CuspParams& params, Complex t);

struct MonodromyReport {
  CuspParams params;
  Complex t0;
  int steps = 0;
  // Root with label j at s = 0 ends with label permutation[j] (labels 0-based).
  std::vector<int> permutation;
  int cycle_count = 0;
  int predicted_shift = 0;  // (-p q) mod (k - 1)
  int observed_shift = -1;  // -1 when the permutation is not a cyclic shift
  bool cycles_uniform = false;  // every cycle has length (k-1) / gcd(pq, k-1)
  bool match = false;
};

int predicted_shift(const CuspParams& params);

// Throws Precondition for steps < 8 k p q and TrackingAmbiguity when two
// roots come within 1e-6 of each other.
MonodromyReport continue_loop(const CuspParams& params, Complex t0, int steps);

// `p,q,k,shift_predicted,shift_observed,cycles,match`
void write_monodromy_line(std::ostream& os, const MonodromyReport& report);
std::string monodromy_header();

enum class DichotomyCase { Divisible, Coprime, Intermediate };

std::string to_string(DichotomyCase c);

struct ComponentVerdict {
  std::vector<std::vector<int>> classes;  // petal labels grouped by cycle
  int class_count = 0;
  DichotomyCase dichotomy = DichotomyCase::Intermediate;
  bool beyond_stated_cases = false;
  std::string note;
};

// Needs report.match. Component counts assume that two petals share a
// Fatou component iff a loop of (base point, direction) pairs joins them.
ComponentVerdict component_verdict(const MonodromyReport& report);

// Labels a converged basin cell by the attracting direction it approaches:
// m in 0..k-2 with g^(k-1) H closest to the negative real axis, H evaluated
// at the last orbit point.
PetalIndexer cusp_petal_indexer(const PlanarMap& map);

}  // namespace fatou
