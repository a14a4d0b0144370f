#pragma once

#include <cstdint>
#include <optional>

#include "sievelab/rational.hpp"

namespace sievelab::params {

// The parameter bundle a run is described by. N' = N/2^k is kept as a real
// ratio; z, y, M derive from it.
struct SieveParams {
  std::int64_t b = 1;
  std::uint64_t N = 0;
  int k = 0;
  double delta = 0.125;
  double epsilon = 0.01;
  std::optional<Rational> a;  // exponent policy 2^k <= N^a, when one is declared

  double n_prime() const;  // N / 2^k
  double z() const;        // N'^delta
  double y() const;        // N'^(1/3)
  int M() const;           // floor((1 - 3 delta) log N' / log 2)
  void validate() const;
};

// k = floor(a log2 N), capped so that 2^k <= N^a.
int k_from_policy(std::uint64_t N, const Rational& a);

// theta = epsilon / (2 (1 - a + epsilon)(1 - a))
double theta_of(double a, double epsilon);

// alpha = 1/2 - a/(2(1-a)) + theta
double alpha_of(double a, double theta);

// Admissible delta interval [1/8 - a/(8(1-a)), 1/6 - a/(2(1-a))) for the
// Chen-weight route, exact in rationals. Nonempty exactly when a < 1/10.
struct DeltaInterval {
  Rational lo;  // closed
  Rational hi;  // open
  bool empty() const { return !(lo < hi); }
  bool contains(const Rational& d) const { return lo <= d && d < hi; }
};
DeltaInterval chen_feasible(const Rational& a);

// Left endpoint 1/8 - a/(8(1-a)) of the admissible interval; the objective
// is maximized there.
Rational delta_star(const Rational& a);

// Deterministic maximization of f_{a,delta} over the admissible region
// intersected with delta >= 1/(3e) (so the same parameters stay valid for
// the s2 pipeline). Coarse grid, then golden-section refinement per
// coordinate bracketed by the winning cell's neighbours; ties break toward
// smaller a, then smaller delta.
struct ChenOptimum {
  double a = 0.0;
  double delta = 0.0;
  double f = 0.0;
};
struct OptimizeOptions {
  int grid_a = 48;
  int grid_d = 48;
  double tol = 1e-10;       // quadrature tolerance inside the objective
  double a_lo = 1e-4;       // search range for a; may be collapsed to a point
  double a_hi = 0.1 - 1e-4;
  bool edge_delta_only = false;  // restrict delta to max(delta_star(a), 1/(3e))
};
ChenOptimum optimize_chen(const OptimizeOptions& opt = {});

// Richert-weight parameter set for K in [3, 8].
//   K <= 7: a = (3K-7)/(6K-6), alpha = 1/2 - a/(2(1-a)) + theta,
//           v = 4/alpha, u = 4/(3 alpha), lambda_min = 1/(K+1-u),
//           lead_constant = 8 theta (1+3K)^3 log3 / [8 + 3 theta (1+4K+3K^2)]^2.
//   K = 8:  modulus capped at N^(2/5), alpha = 1/6, v = 24, u = 8,
//           lambda_min = 1, lead_constant = 52/3 (and 2v(1-2/3)log3 = 16 log3).
struct RichertParams {
  int K = 3;
  double epsilon = 0.01;
  Rational a;
  double theta = 0.0;
  double alpha = 0.0;
  double v = 0.0;
  double u = 0.0;
  double lambda_min = 0.0;
  double lead_constant = 0.0;
  double lead_exact = 0.0;        // product form before the final weakening
  double lead_specialized = 0.0;  // K=3 only: 40 theta log3/(2/5+6theta)^2
};
RichertParams richert_derive(int K, double epsilon);

}  // namespace sievelab::params
