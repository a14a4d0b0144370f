#pragma once

#include <cstdint>

#include "sievelab/errors.hpp"
#include "sievelab/rational.hpp"

namespace sievelab {

class PrimeTable;

namespace constants {

// Euler-Mascheroni constant as a 20-digit literal.
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Linear-sieve initial values.
//   F(s) = 2 e^gamma / s            on 1 <= s <= 3
//   f(s) = 2 e^gamma log(s-1) / s   on 2 <= s <= 4
// The lower function is accepted only on [2,4]: the formula goes negative
// below s = 2 and every use here has s >= 2.
double upper_F(double s);
double lower_f(double s);

// C1 = 4d(1-a)/(1-2a) * log((1-2a)/(2d(1-a)) - 1), split into exact
// rational prefactor and log argument to dodge cancellation at extreme
// parameters.
struct C1Parts {
  Rational prefactor;
  Rational log_arg;
  double value() const;
};
C1Parts c1_parts(const Rational& a, const Rational& delta);
double c1(double a, double delta);

// C2 = d(1-a)/(1-2a) * (log(1/(3d)) - log((1 - (2/3)r)/(1 - 2dr))),
// r = (1-a)/(1-2a).
struct C2Parts {
  Rational prefactor;
  Rational log_arg1;
  Rational log_arg2;
  double value() const;
};
C2Parts c2_parts(const Rational& a, const Rational& delta);
double c2(double a, double delta);

// C_delta = integral over [delta, 1/3] of log(2-3b) / (b(1-b)) db.
// The integrand vanishes at b = 1/3; smooth throughout, so plain adaptive
// Simpson is enough.
double c_delta(double delta, double tol = 1e-12);

// C_{delta,m}: same integrand with lower limit delta*logNp/(logNp - m log 2).
// Lower limit exactly 1/3 gives 0; beyond is a domain error.
double c_delta_m(double delta, double logNp, int m, double tol = 1e-12);

// f_{a,d} = C1 - 2 C2 - 2 d C_delta / (1-a). (a, d) must lie in the
// admissible box 0 < a < 1/10, 1/8 - a/(8(1-a)) <= d < 1/6 - a/(2(1-a)).
double f_ad(double a, double delta, double tol = 1e-12);

// f'_{a,d} = 2 C1 - 4 C2 - (1 - 2^-M) 4 d C_delta / (1-a), M >= 1.
// Strictly above 2 f_{a,d} for every finite M.
double f_prime_ad(double a, double delta, int M, double tol = 1e-12);

struct ConstantBundle {
  double a = 0.0;
  double delta = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c_delta = 0.0;
  double f_ad = 0.0;
  double f_prime_ad = 0.0;
  int f_prime_M = 1;
  double quad_err = 0.0;  // absolute bound honoured by the quadrature
};
ConstantBundle evaluate_bundle(double a, double delta, double tol = 1e-12, int f_prime_M = 1);

// The arithmetic constant in every lower bound:
//   twin_factor = prod_{2<p<=P} (1 - 1/(p-1)^2), P = truncation_prime
//   b_factor    = prod_{2<p|b} (p-1)/(p-2)       (exact over b's divisors)
// tail_bound dominates the partial product's distance from the infinite one:
// sum_{p>P} -log(1-1/(p-1)^2) <= sum_{n>P} 2/(n-1)^2 <= 2/(P-1).
struct SingularSeries {
  std::int64_t b = 1;
  double twin_factor = 1.0;
  double b_factor = 1.0;
  std::int64_t truncation_prime = 3;
  double tail_bound = 1.0;
};
SingularSeries singular_series(std::int64_t b, std::int64_t truncation_prime);

// Exact finite product V(z) = prod_{p<z, p !| 2b} (1 - 1/(p-1)) from a prime
// table, plus the Mertens asymptotic form it approaches,
//   2 * b_factor * twin_factor * e^-gamma / log z.
double mertens_V(double z, std::int64_t b, const PrimeTable& primes);
double mertens_V_asymptotic(double z, const SingularSeries& series);

// li(x) = integral over [2, x] of dt/log t, absolute tolerance tol.
double log_integral(double x, double tol = 1e-9);

}  // namespace constants
}  // namespace sievelab
