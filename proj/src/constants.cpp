#include "sievelab/constants.hpp"

#include <cmath>
#include <vector>

#include "sievelab/primes.hpp"
#include "sievelab/quadrature.hpp"

namespace sievelab::constants {
namespace {

const Rational kOne(1);
const Rational kThird(1, 3);

double cdelta_integrand(double b) {
  if (b >= 1.0 / 3.0) return 0.0;  // log(2-3b) -> 0 at the endpoint
  return std::log(2.0 - 3.0 * b) / (b * (1.0 - b));
}

void check_admissible(double a, double delta) {
  constexpr double slack = 1e-12;
  if (!(a > 0.0) || !(a < 0.1))
    throw std::domain_error("f_ad: a must lie in (0, 1/10)");
  double lo = 0.125 - a / (8.0 * (1.0 - a));
  double hi = 1.0 / 6.0 - a / (2.0 * (1.0 - a));
  if (delta < lo - slack || delta >= hi)
    throw std::domain_error("f_ad: delta outside the admissible interval");
}

}  // namespace

double upper_F(double s) {
  if (!(s >= 1.0 && s <= 3.0)) throw std::domain_error("upper_F: s must lie in [1,3]");
  return 2.0 * std::exp(kEulerGamma) / s;
}

double lower_f(double s) {
  if (!(s >= 2.0 && s <= 4.0)) throw std::domain_error("lower_f: s must lie in [2,4]");
  return 2.0 * std::exp(kEulerGamma) * std::log(s - 1.0) / s;
}

double C1Parts::value() const { return prefactor.to_double() * std::log(log_arg.to_double()); }

C1Parts c1_parts(const Rational& a, const Rational& delta) {
  if (a < Rational(0) || a >= Rational(1, 2))
    throw std::domain_error("c1: a must lie in [0, 1/2)");
  Rational one_a = kOne - a;
  Rational one_2a = kOne - Rational(2) * a;
  Rational pre = Rational(4) * delta * one_a / one_2a;
  Rational arg = one_2a / (Rational(2) * delta * one_a) - kOne;
  if (arg <= Rational(0)) throw std::domain_error("c1: log argument not positive");
  return {pre, arg};
}

double c1(double a, double delta) {
  if (!(a >= 0.0 && a < 0.5)) throw std::domain_error("c1: a must lie in [0, 1/2)");
  double arg = (1.0 - 2.0 * a) / (2.0 * delta * (1.0 - a)) - 1.0;
  if (!(arg > 0.0)) throw std::domain_error("c1: log argument not positive");
  return 4.0 * delta * (1.0 - a) / (1.0 - 2.0 * a) * std::log(arg);
}

double C2Parts::value() const {
  return prefactor.to_double() * (std::log(log_arg1.to_double()) - std::log(log_arg2.to_double()));
}

C2Parts c2_parts(const Rational& a, const Rational& delta) {
  if (a < Rational(0) || a >= Rational(1, 2))
    throw std::domain_error("c2: a must lie in [0, 1/2)");
  if (delta <= Rational(0) || delta > kThird)
    throw std::domain_error("c2: delta must lie in (0, 1/3]");
  Rational one_a = kOne - a;
  Rational one_2a = kOne - Rational(2) * a;
  Rational r = one_a / one_2a;
  Rational pre = delta * r;
  Rational arg1 = kOne / (Rational(3) * delta);
  Rational num = kOne - Rational(2, 3) * r;
  Rational den = kOne - Rational(2) * delta * r;
  if (num <= Rational(0) || den <= Rational(0))
    throw std::domain_error("c2: inner ratio argument not positive");
  return {pre, arg1, num / den};
}

double c2(double a, double delta) {
  if (!(a >= 0.0 && a < 0.5)) throw std::domain_error("c2: a must lie in [0, 1/2)");
  if (!(delta > 0.0 && delta <= 1.0 / 3.0 + 1e-15))
    throw std::domain_error("c2: delta must lie in (0, 1/3]");
  double r = (1.0 - a) / (1.0 - 2.0 * a);
  double num = 1.0 - (2.0 / 3.0) * r;
  double den = 1.0 - 2.0 * delta * r;
  if (!(num > 0.0) || !(den > 0.0))
    throw std::domain_error("c2: inner ratio argument not positive");
  return delta * r * (std::log(1.0 / (3.0 * delta)) - std::log(num / den));
}

double c_delta(double delta, double tol) {
  if (!(delta > 0.0 && delta <= 1.0 / 3.0 + 1e-15))
    throw std::domain_error("c_delta: delta must lie in (0, 1/3]");
  if (delta >= 1.0 / 3.0) return 0.0;
  return adaptive_simpson(cdelta_integrand, delta, 1.0 / 3.0, tol);
}

double c_delta_m(double delta, double logNp, int m, double tol) {
  if (m < 0) throw std::domain_error("c_delta_m: m must be >= 0");
  if (!(logNp > 0.0)) throw std::domain_error("c_delta_m: logNp must be positive");
  double logNm = logNp - m * std::log(2.0);
  if (!(logNm > 0.0)) throw std::domain_error("c_delta_m: 2^m exceeds N'");
  double lower = delta * logNp / logNm;
  if (lower > 1.0 / 3.0 + 1e-9)
    throw std::domain_error("c_delta_m: lower limit beyond 1/3");
  if (lower >= 1.0 / 3.0) return 0.0;
  return adaptive_simpson(cdelta_integrand, lower, 1.0 / 3.0, tol);
}

double f_ad(double a, double delta, double tol) {
  check_admissible(a, delta);
  return c1(a, delta) - 2.0 * c2(a, delta) - 2.0 * delta * c_delta(delta, tol) / (1.0 - a);
}

double f_prime_ad(double a, double delta, int M, double tol) {
  if (M < 1) throw std::domain_error("f_prime_ad: M must be >= 1");
  check_admissible(a, delta);
  double drop = 1.0 - std::ldexp(1.0, -M);  // 1 - 2^-M
  return 2.0 * c1(a, delta) - 4.0 * c2(a, delta) -
         drop * 4.0 * delta * c_delta(delta, tol) / (1.0 - a);
}

ConstantBundle evaluate_bundle(double a, double delta, double tol, int f_prime_M) {
  ConstantBundle out;
  out.a = a;
  out.delta = delta;
  out.c1 = c1(a, delta);
  out.c2 = c2(a, delta);
  out.c_delta = c_delta(delta, tol);
  out.f_ad = out.c1 - 2.0 * out.c2 - 2.0 * delta * out.c_delta / (1.0 - a);
  check_admissible(a, delta);
  out.f_prime_M = f_prime_M;
  double drop = 1.0 - std::ldexp(1.0, -f_prime_M);
  out.f_prime_ad = 2.0 * out.c1 - 4.0 * out.c2 - drop * 4.0 * delta * out.c_delta / (1.0 - a);
  out.quad_err = tol;
  return out;
}

SingularSeries singular_series(std::int64_t b, std::int64_t truncation_prime) {
  if (b < 1 || b % 2 == 0) throw std::domain_error("singular_series: b must be odd and positive");
  if (truncation_prime < 3) throw std::domain_error("singular_series: truncation_prime must be >= 3");

  SingularSeries out;
  out.b = b;
  out.truncation_prime = truncation_prime;

  // Partial twin product over odd primes <= P with a throwaway local sieve.
  std::vector<std::uint8_t> composite(static_cast<std::size_t>(truncation_prime) + 1, 0);
  double twin = 1.0;
  for (std::int64_t p = 3; p <= truncation_prime; p += 2) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    double q = static_cast<double>(p - 1);
    twin *= 1.0 - 1.0 / (q * q);
    for (std::int64_t j = p * p; j <= truncation_prime; j += 2 * p)
      composite[static_cast<std::size_t>(j)] = 1;
  }
  out.twin_factor = twin;
  out.tail_bound = 2.0 / static_cast<double>(truncation_prime - 1);

  // Exact product over the odd prime divisors of b.
  double bf = 1.0;
  std::int64_t rem = b;
  for (std::int64_t p = 3; p * p <= rem; p += 2) {
    if (rem % p) continue;
    bf *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
    while (rem % p == 0) rem /= p;
  }
  if (rem > 2) bf *= static_cast<double>(rem - 1) / static_cast<double>(rem - 2);
  out.b_factor = bf;
  return out;
}

double mertens_V(double z, std::int64_t b, const PrimeTable& primes) {
  if (!(z >= 3.0)) throw std::domain_error("mertens_V: z must be >= 3");
  if (static_cast<double>(primes.limit()) < z - 1.0)
    throw capacity_error("mertens_V: prime table does not cover z");
  double prod = 1.0;
  std::uint64_t top = static_cast<std::uint64_t>(std::ceil(z)) - 1;
  primes.for_each_prime(3, top, [&](std::uint64_t p) {
    if (static_cast<double>(p) >= z) return;
    if (b % static_cast<std::int64_t>(p) == 0) return;
    prod *= 1.0 - 1.0 / static_cast<double>(p - 1);
  });
  return prod;
}

double mertens_V_asymptotic(double z, const SingularSeries& series) {
  if (!(z > 1.0)) throw std::domain_error("mertens_V_asymptotic: z must exceed 1");
  return 2.0 * series.b_factor * series.twin_factor * std::exp(-kEulerGamma) / std::log(z);
}

double log_integral(double x, double tol) {
  if (!(x >= 2.0)) throw std::domain_error("log_integral: x must be >= 2");
  if (x == 2.0) return 0.0;
  return adaptive_simpson([](double t) { return 1.0 / std::log(t); }, 2.0, x, tol);
}

}  // namespace sievelab::constants
