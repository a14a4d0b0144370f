#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "sievelab/errors.hpp"

namespace sievelab {

// Odd-only primality bitset: bit i covers the odd number 2i+1, set = prime.
// Immutable once built; all read paths are thread-safe.
class PrimeTable {
 public:
  static constexpr std::uint64_t kLimitCeiling = 20'000'000'000ULL;

  PrimeTable() = default;

  std::uint64_t limit() const { return limit_; }
  std::uint64_t count() const { return count_; }

  bool is_prime(std::uint64_t n) const {
    if (n > limit_) throw capacity_error("PrimeTable: n exceeds table limit");
    if (n < 3) return n == 2;
    if ((n & 1) == 0) return false;
    std::uint64_t i = n >> 1;
    return (bits_[i >> 6] >> (i & 63)) & 1;
  }

  // Visits every prime in [lo, hi] in increasing order.
  template <class Fn>
  void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
    if (hi > limit_) throw capacity_error("PrimeTable: range exceeds table limit");
    if (lo > hi) return;
    if (lo <= 2 && 2 <= hi) fn(std::uint64_t{2});
    std::uint64_t first = lo < 3 ? 3 : (lo | 1);
    if (first > hi) return;
    std::uint64_t ib = first >> 1, ie = (hi - 1) >> 1;  // bits of first and of the last odd <= hi
    std::uint64_t w = ib >> 6;
    std::uint64_t word = bits_[w] & (~0ULL << (ib & 63));
    const std::uint64_t we = ie >> 6;
    while (true) {
      if (w == we) word &= (ie & 63) == 63 ? ~0ULL : ((1ULL << ((ie & 63) + 1)) - 1);
      while (word) {
        unsigned bit = static_cast<unsigned>(std::countr_zero(word));
        fn(((w << 6) + bit) * 2 + 1);
        word &= word - 1;
      }
      if (w == we) break;
      word = bits_[++w];
    }
  }

  // Binary cache: "SVLB1" magic, limit and count as 8-byte little-endian,
  // then the raw bitset words. load() recomputes the popcount checksum and
  // rejects files whose stored count disagrees.
  void save(const std::string& path) const;
  static PrimeTable load(const std::string& path);

 private:
  friend PrimeTable sieve_primes(std::uint64_t limit, int threads);

  std::uint64_t limit_ = 0;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Segmented sieve of Eratosthenes over 2^20-bit odd-only segments, segments
// distributed across `threads` workers (0 = hardware concurrency). Segment
// boundaries are word-aligned so writers never share a word.
PrimeTable sieve_primes(std::uint64_t limit, int threads = 0);

// Smallest-prime-factor table over [2, limit], built with a linear sieve.
class SpfTable {
 public:
  static constexpr std::uint64_t kLimitCeiling = (1ULL << 31);

  SpfTable() = default;

  std::uint64_t limit() const { return limit_; }

  std::uint32_t spf(std::uint64_t n) const {
    if (n < 2 || n > limit_) throw capacity_error("SpfTable: n out of range");
    return spf_[n];
  }

  bool is_prime(std::uint64_t n) const { return n >= 2 && spf(n) == n; }

  struct Factor {
    std::uint64_t p;
    int e;
  };

  // Prime factorization by repeated spf division; n = 1 gives the empty list.
  std::vector<Factor> factorize(std::uint64_t n) const;

  int omega(std::uint64_t n) const;  // distinct prime factors
  int big_omega(std::uint64_t n) const;  // with multiplicity

 private:
  friend SpfTable spf_table(std::uint64_t limit);

  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
};

SpfTable spf_table(std::uint64_t limit);

// Euler phi by trial-division factorization; fine for the desk-scale moduli
// used here.
std::uint64_t euler_phi(std::uint64_t n);

// Number of primes p <= x with p = r (mod q).
std::uint64_t prime_count_ap(std::uint64_t x, std::uint64_t q, std::uint64_t r,
                             const PrimeTable& table);

// One equidistribution measurement: error = pi(x; q, r) - li(x)/phi(q).
struct EquidistRow {
  double x = 0.0;
  std::uint64_t modulus = 0;
  std::uint64_t residue = 0;
  std::uint64_t pi_val = 0;
  double li_over_phi = 0.0;
  double error = 0.0;
};
EquidistRow equidist_error(std::uint64_t x, std::uint64_t q, std::uint64_t r,
                           const PrimeTable& table, double tol = 1e-6);

// In the distribution estimate feeding these bounds, an error exponent A
// admits the level exponent B = A + 6. The harness exposes Dmax directly
// instead of deriving it from (A, B); this records the relation only.
constexpr int distribution_level_B(int A) { return A + 6; }

// Desk-scale surrogate of the averaged power-modulus error:
//   sum over odd squarefree d <= Dmax, (d, qpow) = 1, of
//   max over sampled residues r, (r, qpow*d) = 1, of |equidist error|.
// All residues are used when phi(qpow*d) <= 64, otherwise 64 residues fixed
// by `seed`. y is pinned to x (the theorem's inner max is not scanned).
struct AveragedErrorReport {
  std::uint64_t x = 0;
  std::uint64_t qpow = 0;
  std::uint64_t dmax = 0;
  double sum_max_abs_error = 0.0;
  std::vector<EquidistRow> worst_rows;  // per-d argmax rows, ascending modulus
};
AveragedErrorReport averaged_error_report(std::uint64_t x, std::uint64_t qpow,
                                          std::uint64_t Dmax, const PrimeTable& table,
                                          std::uint64_t seed = 1, double li_tol = 1e-6);
double averaged_error(std::uint64_t x, std::uint64_t qpow, std::uint64_t Dmax,
                      const PrimeTable& table, std::uint64_t seed = 1);

}  // namespace sievelab
