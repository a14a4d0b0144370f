#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <utility>
#include <vector>

#include "sievelab/bounds.hpp"
#include "sievelab/counters.hpp"
#include "sievelab/primes.hpp"

using namespace sievelab;
using namespace sievelab::counters;
using sievelab::Rational;

namespace {

bool tprime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<std::uint64_t, int>> tfactor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

// Number of factorizations n = p1 p2 p3 with zlo <= p1 < yhi <= p2 <= p3,
// by direct enumeration over prime divisors.
int oracle_triples(std::uint64_t n, double z, double y) {
  int count = 0;
  for (auto [p1, e1] : tfactor(n)) {
    if (!(static_cast<double>(p1) >= z && static_cast<double>(p1) < y)) continue;
    std::uint64_t m = n / p1;
    for (auto [p2, e2] : tfactor(m)) {
      if (static_cast<double>(p2) < y) continue;
      if (m % p2) continue;
      std::uint64_t p3 = m / p2;
      if (p3 >= p2 && tprime(p3)) ++count;
    }
  }
  return count;
}

Rational oracle_chen(std::uint64_t n, double z, double y) {
  int ksum = 0;
  for (auto [p, e] : tfactor(n))
    if (static_cast<double>(p) >= z && static_cast<double>(p) < y) ksum += e;
  return Rational(2 - ksum - oracle_triples(n, z, y), 2);
}

Rational oracle_modified(std::uint64_t n, double z, double y, int M, double logNp) {
  int ksum = 0;
  for (auto [p, e] : tfactor(n))
    if (static_cast<double>(p) >= z && static_cast<double>(p) < y) ksum += e;
  int v2 = 0;
  std::uint64_t odd = n;
  while (odd % 2 == 0) {
    odd /= 2;
    ++v2;
  }
  int triples = 0;
  if (v2 <= M) {
    double ym = std::exp((logNp - v2 * std::log(2.0)) / 3.0);
    triples = oracle_triples(odd, z, ym);
  }
  return Rational(2 - ksum - triples, 2);
}

}  // namespace

TEST_CASE("factor_shift") {
  auto spf = spf_table(1000);
  auto r13 = factor_shift(13, 1, spf);
  CHECK(r13.v2 == 2);
  CHECK(r13.m == 3);
  CHECK(r13.big_omega_odd == 1);
  auto r17 = factor_shift(17, 1, spf);
  CHECK(r17.v2 == 4);
  CHECK(r17.m == 1);
  CHECK(r17.big_omega_odd == 0);
  CHECK(r17.min_odd == 0);
  CHECK(r17.max_odd == 0);
  auto r61 = factor_shift(61, 1, spf);
  CHECK(r61.v2 == 2);
  CHECK(r61.m == 15);
  CHECK(r61.omega_odd == 2);
  CHECK(r61.big_omega_odd == 2);
  CHECK(r61.min_odd == 3);
  CHECK(r61.max_odd == 5);
  CHECK_THROWS_AS(factor_shift(3, 5, spf), std::domain_error);
  CHECK_THROWS_AS(factor_shift(7, 2, spf), std::domain_error);
}

TEST_CASE("chen_weight pinned values") {
  auto spf = spf_table(10'000);
  const double z = 5.5, y = 30.5;
  CHECK(chen_weight(1, z, y, spf) == Rational(1));
  CHECK(chen_weight(7, z, y, spf) == Rational(1, 2));    // prime inside the window
  CHECK(chen_weight(31, z, y, spf) == Rational(1));      // prime above it
  CHECK(chen_weight(49, z, y, spf) == Rational(0));      // 7^2, k = 2
  CHECK(chen_weight(8029, z, y, spf) == Rational(0));    // 7 * 31 * 37
  CHECK(chen_weight(1147, z, y, spf) == Rational(1));    // 31 * 37, both past y
  CHECK_THROWS_AS(chen_weight(0, z, y, spf), std::domain_error);
  CHECK_THROWS_AS(chen_weight(5, 10.0, 3.0, spf), std::domain_error);
}

TEST_CASE("chen_weight equals the enumeration oracle on a sweep") {
  auto spf = spf_table(20'000);
  const double z = 5.5, y = 30.5;
  for (std::uint64_t n = 1; n <= 20'000; ++n)
    CHECK(chen_weight(n, z, y, spf) == oracle_chen(n, z, y));
  const double z2 = 7.5, y2 = 100.3;
  for (std::uint64_t n = 1; n <= 20'000; n += 3)
    CHECK(chen_weight(n, z2, y2, spf) == oracle_chen(n, z2, y2));
}

TEST_CASE("modified_weight: odd n reduces to the m = 0 term") {
  auto spf = spf_table(70'000);
  const double logNp = std::log(250'000.0);
  const double y = std::exp(logNp / 3.0), z = 5.5;
  for (std::uint64_t n = 1; n <= 9'999; n += 2)
    CHECK(modified_weight(n, z, y, 5, logNp, spf) == chen_weight(n, z, y, spf));
  CHECK(modified_weight(1, z, y, 5, logNp, spf) == Rational(1));
}

TEST_CASE("modified_weight: explicit m = 1 window instance and oracle sweep") {
  auto spf = spf_table(70'000);
  const double logNp = std::log(250'000.0);
  const double y = std::exp(logNp / 3.0), z = 5.5;
  // n = 2 * 7 * 67 * 71; y^(1) = 50, so (7, 67, 71) matches the m = 1 window
  CHECK(modified_weight(66'598, z, y, 3, logNp, spf) == Rational(0));
  // with M = 0 the m = 1 term is out of range and only the k-sum survives
  CHECK(modified_weight(66'598, z, y, 0, logNp, spf) == Rational(1, 2));

  for (std::uint64_t n = 1; n <= 20'000; ++n)
    CHECK(modified_weight(n, z, y, 3, logNp, spf) == oracle_modified(n, z, y, 3, logNp));
}

TEST_CASE("membership_S shapes") {
  auto spf = spf_table(10'000);
  const double z = 5.5, y = 30.5;
  CHECK(membership_S(1, z, y, spf));
  CHECK(!membership_S(3, z, y, spf));          // prime below z
  CHECK(membership_S(7, z, y, spf));           // prime in [z, y)
  CHECK(membership_S(31, z, y, spf));          // prime above y
  CHECK(!membership_S(77, z, y, spf));         // 7 * 11, both below y
  CHECK(membership_S(217, z, y, spf));         // 7 * 31 straddles y
  CHECK(membership_S(1147, z, y, spf));        // 31 * 37, both above y
  CHECK(membership_S(961, z, y, spf));         // 31^2
  CHECK(!membership_S(93, z, y, spf));         // 3 * 31, small factor below z
  CHECK(!membership_S(8029, z, y, spf));       // three factors
}

TEST_CASE("second-sum split bookkeeping identity, exhaustive to 1e6") {
  auto spf = spf_table(1'000'000);
  const double z = 5.5, y = 97.5;
  for (std::uint64_t n = 1; n <= 1'000'000; ++n) {
    auto s = second_sum_split(n, z, y, spf);
    CHECK(s.mult_sum == s.distinct_sum + s.excess_sum);
  }
}

TEST_CASE("count_sK examples") {
  auto primes = sieve_primes(1'200, 1);
  auto spf = spf_table(1'100);
  Tables tables{primes, spf};
  CHECK(count_sK(20, 1, 2, 1, CountMode::multiplicity, tables) == 3);  // 5, 13, 17
  CHECK(count_sK(20, 1, 5, 3, CountMode::multiplicity, tables) == 0);  // 32 | p-1 empty
  CHECK(count_sK(20, 1, 2, 60, CountMode::multiplicity, tables) ==
        prime_count_ap(21, 4, 1, primes));  // vacuous K
  CHECK_THROWS_AS(count_sK(20, 2, 1, 1, CountMode::multiplicity, tables), std::domain_error);
  CHECK_THROWS_AS(count_sK(2000, 1, 1, 1, CountMode::multiplicity, tables), capacity_error);
}

TEST_CASE("count_n2 and count_s2 examples") {
  auto primes = sieve_primes(200, 1);
  auto spf = spf_table(150);
  Tables tables{primes, spf};
  // N' = 25, threshold 25^0.05 < 3: p in {5, 13, 29, 37, 53, 61, 101}
  CHECK(count_n2(100, 1, 2, 0.05, tables) == 7);
  CHECK(count_n2(20, 1, 10, 0.05, tables) == 0);
  CHECK(count_s2(100, 1, 2, 0.05, tables) >= count_n2(100, 1, 2, 0.05, tables));
  // k = 0 admits every prime p > b with odd part of p - b a P2 (p = 2 included)
  CHECK(count_s2(20, 1, 0, 0.05, tables) == 8);
  CHECK_THROWS_AS(count_n2(100, 1, 2, 0.4, tables), std::domain_error);
}

TEST_CASE("fast counters equal trial-division oracles on sweeps") {
  const std::uint64_t N = 20'000;
  auto primes = sieve_primes(N + 3, 1);
  auto spf = spf_table(N);
  Tables tables{primes, spf};

  for (std::int64_t b : {1, 3}) {
    // naive per-prime records
    struct Rec {
      std::uint64_t diff;
      int v2, omega, Omega;
      std::uint64_t min_f;
    };
    std::vector<Rec> recs;
    for (std::uint64_t p = b + 1; p <= N + static_cast<std::uint64_t>(b); ++p) {
      if (!tprime(p)) continue;
      std::uint64_t d = p - b;
      int v2 = 0;
      std::uint64_t m = d;
      while (m % 2 == 0) {
        m /= 2;
        ++v2;
      }
      int om = 0, Om = 0;
      std::uint64_t min_f = 0, max_f = 0;
      for (auto [q, e] : tfactor(m)) {
        if (!min_f) min_f = q;
        max_f = q;
        om += 1;
        Om += e;
      }
      recs.push_back({d, v2, om, Om, min_f ? min_f : UINT64_MAX});

      // full ShiftedRecord against the trial-division route
      auto rec = factor_shift(p, b, spf);
      CHECK(rec.v2 == v2);
      CHECK(rec.m == m);
      CHECK((rec.p - b) == (std::uint64_t{1} << rec.v2) * rec.m);
      CHECK(rec.omega_odd == om);
      CHECK(rec.big_omega_odd == Om);
      CHECK(rec.min_odd == min_f);
      CHECK(rec.max_odd == max_f);
      CHECK(rec.omega_odd <= rec.big_omega_odd);
      CHECK(rec.min_odd <= rec.max_odd);
      CHECK(((rec.min_odd == 0 && rec.max_odd == 0) == (rec.m == 1)));
    }

    for (int k = 0; k <= 3; ++k) {
      for (int K = 0; K <= 4; ++K) {
        for (auto mode : {CountMode::multiplicity, CountMode::distinct}) {
          std::uint64_t naive = 0;
          for (auto& r : recs)
            if (r.v2 >= k && (mode == CountMode::multiplicity ? r.Omega : r.omega) <= K) ++naive;
          CHECK(count_sK(N, b, k, K, mode, tables) == naive);
        }
      }
      for (double zexp : {0.05, 0.31}) {
        double tau = std::pow(static_cast<double>(N) / std::ldexp(1.0, k), zexp);
        std::uint64_t naive_n2 = 0, naive_s2 = 0;
        for (auto& r : recs) {
          bool p2ok = r.Omega <= 2 && (r.Omega == 0 || static_cast<double>(r.min_f) > tau);
          if (p2ok && r.v2 == k) ++naive_n2;
          if (p2ok && r.v2 >= k) ++naive_s2;
        }
        CHECK(count_n2(N, b, k, zexp, tables) == naive_n2);
        CHECK(count_s2(N, b, k, zexp, tables) == naive_s2);
      }
    }
  }
}

TEST_CASE("s2 and n2 comparison rows satisfy the factor-2 ratio relation") {
  const std::uint64_t N = 50'000;
  auto primes = sieve_primes(N + 3, 1);
  auto spf = spf_table(N);
  Tables tables{primes, spf};
  auto series = constants::singular_series(1, 100'003);
  for (int k : {1, 2, 3}) {
    std::uint64_t n2 = count_n2(N, 1, k, 0.1, tables);
    std::uint64_t s2 = count_s2(N, 1, k, 0.1, tables);
    bounds::BoundSpec n2_spec{bounds::Theorem::n2, 0, 0.01, N, 1, k, series};
    bounds::BoundSpec s2_spec{bounds::Theorem::s2, 0, 0.01, N, 1, k, series};
    auto n2_row = bounds::compare(n2, n2_spec);
    auto s2_row = bounds::compare(s2, s2_spec);
    CHECK(*s2_row.ratio >= *n2_row.ratio / 2.0);  // count_s2 >= count_n2, bound doubled
  }
}

TEST_CASE("count monotonicity in K and mode") {
  const std::uint64_t N = 50'000;
  auto primes = sieve_primes(N + 3, 1);
  auto spf = spf_table(N);
  Tables tables{primes, spf};
  std::uint64_t prev = 0;
  for (int K = 0; K <= 8; ++K) {
    std::uint64_t mult = count_sK(N, 1, 2, K, CountMode::multiplicity, tables);
    std::uint64_t dist = count_sK(N, 1, 2, K, CountMode::distinct, tables);
    CHECK(mult >= prev);
    CHECK(dist >= mult);  // distinct counts fewer factors, so more primes qualify
    prev = mult;
  }
}

TEST_CASE("parallel counting matches single-threaded") {
  const std::uint64_t N = 300'000;
  auto primes = sieve_primes(N + 3, 0);
  auto spf = spf_table(N);
  Tables tables{primes, spf};
  CHECK(count_sK(N, 1, 2, 2, CountMode::multiplicity, tables, 4) ==
        count_sK(N, 1, 2, 2, CountMode::multiplicity, tables, 1));
  CHECK(count_n2(N, 1, 2, 0.1, tables, 4) == count_n2(N, 1, 2, 0.1, tables, 1));
  CHECK(count_s2(N, 3, 1, 0.1, tables, 4) == count_s2(N, 3, 1, 0.1, tables, 1));
}

TEST_CASE("decomposition_audit: clean on example configurations") {
  auto primes = sieve_primes(100'003, 1);
  auto spf = spf_table(12'500);
  Tables tables{primes, spf};
  auto report = decomposition_audit(100'000, 1, 3, 85.0 / 688.0, tables);
  CHECK(report.clean());
  CHECK(report.members_checked > 0);
  CHECK(report.universal_checked > 0);
  CHECK(report.weight_sum <= Rational(static_cast<std::int64_t>(report.qualifying_count)));

  auto spf2 = spf_table(2'500);
  Tables tables2{primes, spf2};
  auto report2 = decomposition_audit(10'000, 3, 2, 0.125, tables2);
  CHECK(report2.clean());

  // k so large that A is empty: vacuously clean
  auto report3 = decomposition_audit(100'000, 1, 40, 0.125, tables);
  CHECK(report3.clean());
  CHECK(report3.members_checked == 0);
  CHECK(report3.universal_checked == 0);
}

TEST_CASE("classification invariant at N' = 1e5 across b and delta") {
  auto primes = sieve_primes(800'015, 0);
  auto spf = spf_table(100'000);
  Tables tables{primes, spf};
  for (std::int64_t b : {1, 3, 15}) {
    for (double delta : {0.125, 85.0 / 688.0}) {
      auto report = decomposition_audit(800'000, b, 3, delta, tables);
      CHECK(report.clean());
    }
  }
}
