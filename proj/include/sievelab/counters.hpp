#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sievelab/primes.hpp"
#include "sievelab/rational.hpp"

namespace sievelab::counters {

struct Tables {
  const PrimeTable& primes;
  const SpfTable& spf;
};

// Smallest integer >= t and smallest integer > t, computed in extended
// precision so that prime-vs-threshold comparisons are exact integer
// comparisons.
std::uint64_t first_at_least(double t);
std::uint64_t first_exceeding(double t);

// Per-prime record of the shifted value p - b = 2^v2 * m, m odd.
struct ShiftedRecord {
  std::uint64_t p = 0;
  int v2 = 0;
  std::uint64_t m = 1;
  int omega_odd = 0;           // distinct odd prime factors of p - b
  int big_omega_odd = 0;       // with multiplicity
  std::uint64_t min_odd = 0;   // 0 when m = 1
  std::uint64_t max_odd = 0;
};
ShiftedRecord factor_shift(std::uint64_t p, std::int64_t b, const SpfTable& spf);

// Chen weight w(n) = 1 - (1/2) sum_{z<=q<y, q^k || n} k
//                      - (1/2) #{n = p1 p2 p3 : z <= p1 < y <= p2 <= p3},
// exact as a rational with denominator 2.
Rational chen_weight(std::uint64_t n, double z, double y, const SpfTable& spf);

// Modified weight w'(n): the triple sum runs over n = 2^m p1 p2 p3 for
// 0 <= m <= M with per-m threshold y^(m) = (N'/2^m)^(1/3); logNp = log N'.
Rational modified_weight(std::uint64_t n, double z, double y, int M, double logNp,
                         const SpfTable& spf);

// The set S a positive-weight survivor must land in: 1, a prime >= z, or
// p1 p2 with z <= p1 <= p2 and p2 >= y. (A pair with both factors below y
// carries weight 0 and is excluded; a pair with both at or above y carries
// weight 1 and must be included.)
bool membership_S(std::uint64_t n, double z, double y, const SpfTable& spf);

// Bookkeeping of the split sum_{q^k||n} k = sum_{q|n} 1 + sum_{k>=2} (k-1)
// over the window z <= q < y.
struct SecondSumSplit {
  int mult_sum = 0;
  int distinct_sum = 0;
  int excess_sum = 0;
};
SecondSumSplit second_sum_split(std::uint64_t n, double z, double y, const SpfTable& spf);

enum class CountMode { multiplicity, distinct };

// Primes p <= N + b, p > b, with 2^k | p - b and at most K odd prime
// factors of p - b (with or without multiplicity by mode).
std::uint64_t count_sK(std::uint64_t N, std::int64_t b, int k, int K, CountMode mode,
                       const Tables& tables, int threads = 1);

// Primes p <= N + b, p > b, with 2^k || p - b (exact) and odd part a P2:
// at most two prime factors counted with multiplicity, all exceeding
// N'^zexp where N' = N/2^k; m = 1 qualifies as the empty product.
std::uint64_t count_n2(std::uint64_t N, std::int64_t b, int k, double zexp,
                       const Tables& tables, int threads = 1);

// Same with only 2^k | p - b required; extra powers of 2 ride along.
std::uint64_t count_s2(std::uint64_t N, std::int64_t b, int k, double zexp,
                       const Tables& tables, int threads = 1);

struct AuditViolation {
  std::uint64_t n = 0;
  std::string check;   // "w_le_1" | "classification" | "sum_bound" | "coprime_2b"
  std::string detail;
};

struct AuditReport {
  std::uint64_t N = 0;
  std::int64_t b = 1;
  int k = 0;
  double delta = 0.0;
  double n_prime = 0.0, z = 0.0, y = 0.0;
  std::uint64_t members_checked = 0;    // n in A with (n, P(z)) = 1
  std::uint64_t universal_checked = 0;  // all n <= N' coprime to 2b and P(z)
  Rational weight_sum;                  // sum of w(n) over checked members
  std::uint64_t qualifying_count = 0;   // members that land in S
  std::vector<AuditViolation> violations;
  bool clean() const { return violations.empty(); }
};

// Pointwise verification of the weighted-count chain on A = {(p-b)/2^k},
// plus an exhaustive classification sweep over every n <= N' coprime to 2b
// with all prime factors >= z. Single-threaded so witnesses come out in a
// fixed order.
AuditReport decomposition_audit(std::uint64_t N, std::int64_t b, int k, double delta,
                                const Tables& tables);

}  // namespace sievelab::counters
