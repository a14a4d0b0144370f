#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <vector>

#include "sievelab/primes.hpp"
#include "sievelab/quadrature.hpp"

using namespace sievelab;

namespace {

std::vector<std::uint8_t> naive_sieve(std::uint64_t limit) {
  std::vector<std::uint8_t> is_prime(limit + 1, 1);
  is_prime[0] = 0;
  if (limit >= 1) is_prime[1] = 0;
  for (std::uint64_t i = 2; i * i <= limit; ++i)
    if (is_prime[i])
      for (std::uint64_t j = i * i; j <= limit; j += i) is_prime[j] = 0;
  return is_prime;
}

}  // namespace

TEST_CASE("tiny table") {
  auto t = sieve_primes(10, 1);
  CHECK(t.count() == 4);
  for (std::uint64_t p : {2, 3, 5, 7}) CHECK(t.is_prime(p));
  for (std::uint64_t n : {1, 4, 6, 8, 9, 10}) CHECK(!t.is_prime(n));
  CHECK_THROWS_AS(t.is_prime(11), capacity_error);
  CHECK_THROWS_AS(sieve_primes(1, 1), std::domain_error);
  CHECK_THROWS_AS(sieve_primes(PrimeTable::kLimitCeiling + 1, 1), capacity_error);
}

TEST_CASE("segmented sieve agrees with the naive sieve up to 1e6") {
  const std::uint64_t limit = 1'000'000;
  auto naive = naive_sieve(limit);
  auto table = sieve_primes(limit, 1);
  CHECK(table.count() == 78498);
  std::uint64_t mismatches = 0;
  for (std::uint64_t n = 0; n <= limit; ++n)
    if ((naive[n] != 0) != table.is_prime(n)) ++mismatches;
  CHECK(mismatches == 0);

  auto parallel = sieve_primes(limit, 4);
  CHECK(parallel.count() == table.count());
  for (std::uint64_t n = limit - 2000; n <= limit; ++n)
    CHECK(parallel.is_prime(n) == table.is_prime(n));
}

TEST_CASE("for_each_prime respects bounds and order") {
  auto t = sieve_primes(100, 1);
  std::vector<std::uint64_t> got;
  t.for_each_prime(10, 30, [&](std::uint64_t p) { got.push_back(p); });
  CHECK(got == std::vector<std::uint64_t>{11, 13, 17, 19, 23, 29});
  got.clear();
  t.for_each_prime(2, 2, [&](std::uint64_t p) { got.push_back(p); });
  CHECK(got == std::vector<std::uint64_t>{2});
  CHECK_THROWS_AS(t.for_each_prime(2, 101, [](std::uint64_t) {}), capacity_error);
}

TEST_CASE("spf table: invariants against trial division") {
  const std::uint64_t limit = 100'000;
  auto spf = spf_table(limit);
  CHECK(spf.spf(49) == 7);
  CHECK(spf.spf(12) == 2);
  CHECK(spf.big_omega(720) == 7);  // 2^4 * 3^2 * 5
  CHECK(spf.omega(720) == 3);
  CHECK_THROWS_AS(spf.spf(limit + 1), capacity_error);
  CHECK_THROWS_AS(spf_table(SpfTable::kLimitCeiling + 1), capacity_error);

  for (std::uint64_t n = 2; n <= limit; ++n) {
    std::uint32_t p = spf.spf(n);
    CHECK(n % p == 0);
    CHECK((static_cast<std::uint64_t>(p) * p <= n || p == n));
  }
  // factorization equals trial division
  for (std::uint64_t n = 2; n <= limit; n += 1) {
    std::uint64_t rebuilt = 1;
    for (auto f : spf.factorize(n))
      for (int e = 0; e < f.e; ++e) rebuilt *= f.p;
    CHECK(rebuilt == n);
  }
  // spf(n) really is the smallest prime factor, against trial division
  for (std::uint64_t n = 2; n <= limit; ++n) {
    std::uint64_t smallest = 0;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) { smallest = d; break; }
    if (smallest == 0) smallest = n;
    CHECK(spf.spf(n) == smallest);
  }
}

TEST_CASE("distribution level exponent metadata") {
  CHECK(distribution_level_B(1) == 7);
  CHECK(distribution_level_B(4) == 10);
}

TEST_CASE("prime_count_ap examples and residue partition") {
  auto t = sieve_primes(100'000, 1);
  CHECK(prime_count_ap(20, 4, 1, t) == 3);   // 5, 13, 17
  CHECK(prime_count_ap(10, 2, 0, t) == 1);   // only p = 2
  CHECK(prime_count_ap(100, 1, 0, t) == 25);
  CHECK_THROWS_AS(prime_count_ap(20, 4, 4, t), std::domain_error);
  CHECK_THROWS_AS(prime_count_ap(200'000, 4, 1, t), capacity_error);

  for (std::uint64_t q : {3, 4, 8}) {
    for (std::uint64_t x : {1000, 100000}) {
      std::uint64_t total = 0;
      for (std::uint64_t r = 0; r < q; ++r) total += prime_count_ap(x, q, r, t);
      std::uint64_t pi = 0;
      t.for_each_prime(2, x, [&](std::uint64_t) { ++pi; });
      CHECK(total == pi);
    }
  }
}

TEST_CASE("equidist_error: examples and reconstruction") {
  auto t = sieve_primes(100'000, 1);
  auto row = equidist_error(20, 4, 1, t, 1e-9);
  double li20 = gauss_legendre_auto([](double u) { return 1.0 / std::log(u); }, 2.0, 20.0, 1e-10);
  CHECK(row.pi_val == 3);
  CHECK(std::fabs(row.error - (3.0 - li20 / 2.0)) <= 1e-6);

  // x = 2: li vanishes, the error is the raw count
  auto tiny = equidist_error(2, 3, 2, t);
  CHECK(tiny.pi_val == 1);
  CHECK(tiny.error == 1.0);
  CHECK(equidist_error(2, 3, 1, t).error == 0.0);

  CHECK_THROWS_AS(equidist_error(100, 4, 2, t), std::domain_error);  // gcd(2,4) != 1

  // pi = li/phi + error reproduces the stored count (same-scale cancellation)
  for (std::uint64_t q : {3, 4, 8}) {
    auto r = equidist_error(50'000, q, 1, t, 1e-8);
    CHECK(r.li_over_phi + r.error == static_cast<double>(r.pi_val));
  }
}

TEST_CASE("averaged_error: single-term case, d filtering, validation") {
  auto t = sieve_primes(100'000, 1);

  double single = averaged_error(50'000, 8, 1, t, 1);
  double worst = 0.0;
  for (std::uint64_t r : {1, 3, 5, 7})
    worst = std::max(worst, std::fabs(equidist_error(50'000, 8, r, t).error));
  CHECK(single == doctest::Approx(worst).epsilon(1e-9));

  auto report = averaged_error_report(50'000, 8, 9, t, 1);
  CHECK(report.worst_rows.size() == 4);  // d in {1, 3, 5, 7}; 9 = 3^2 dropped
  CHECK(report.worst_rows[0].modulus == 8);
  CHECK(report.worst_rows[3].modulus == 56);

  CHECK_THROWS_AS(averaged_error(50'000, 1, 1, t, 1), std::domain_error);
  CHECK_THROWS_AS(averaged_error(50'000, 6, 1, t, 1), std::domain_error);
  CHECK_THROWS_AS(averaged_error(200'000, 8, 1, t, 1), capacity_error);
  CHECK_THROWS_AS(averaged_error(50'000, 8, 40'000, t, 1), capacity_error);

  // deterministic in the seed
  CHECK(averaged_error(50'000, 8, 9, t, 7) == averaged_error(50'000, 8, 9, t, 7));
}

TEST_CASE("binary cache round trip and corruption detection") {
  auto t = sieve_primes(100'000, 1);
  const std::string path = "primes_cache_test.svlb";
  t.save(path);
  auto loaded = PrimeTable::load(path);
  CHECK(loaded.limit() == t.limit());
  CHECK(loaded.count() == t.count());
  for (std::uint64_t n = 0; n <= 2000; ++n) CHECK(loaded.is_prime(n) == t.is_prime(n));

  // flip one payload bit: popcount checksum must catch it
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    char c;
    f.seekg(5 + 8 + 8 + 100);
    f.get(c);
    f.seekp(5 + 8 + 8 + 100);
    f.put(static_cast<char>(c ^ 0x01));
  }
  CHECK_THROWS_AS(PrimeTable::load(path), std::runtime_error);

  {
    std::ofstream f("primes_cache_bad.svlb", std::ios::binary);
    f << "NOPE!" << std::string(16, '\0');
  }
  CHECK_THROWS_AS(PrimeTable::load("primes_cache_bad.svlb"), std::runtime_error);
  CHECK_THROWS_AS(PrimeTable::load("no_such_file.svlb"), std::runtime_error);
  std::remove(path.c_str());
  std::remove("primes_cache_bad.svlb");
}

TEST_CASE("euler_phi by factorization") {
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(8) == 4);
  CHECK(euler_phi(9) == 6);
  CHECK(euler_phi(40) == 16);
  CHECK(euler_phi(97) == 96);
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    std::uint64_t count = 0;
    for (std::uint64_t r = 1; r <= n; ++r)
      if (std::gcd(r, n) == 1) ++count;
    CHECK(euler_phi(n) == count);
  }
}
