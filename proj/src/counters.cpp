#include "sievelab/counters.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>

namespace sievelab::counters {
namespace {

// Pieces of p - b = 2^v2 * m shared by the counting predicates.
struct Shift {
  std::uint64_t value;  // p - b
  int v2;
  std::uint64_t m;  // odd part
};

Shift split_shift(std::uint64_t p, std::int64_t b) {
  std::uint64_t d = p - static_cast<std::uint64_t>(b);
  int v2 = d == 0 ? 0 : std::countr_zero(d);
  return {d, v2, d >> v2};
}

// Does the odd number m factor into at most two primes (with multiplicity),
// every one of them >= pmin? m = 1 passes vacuously.
bool is_p2_above(std::uint64_t m, std::uint64_t pmin, const SpfTable& spf) {
  int count = 0;
  while (m > 1) {
    std::uint64_t p = spf.spf(m);
    if (p < pmin) return false;
    while (m % p == 0) {
      m /= p;
      if (++count > 2) return false;
    }
  }
  return true;
}

void check_counting_inputs(std::uint64_t N, std::int64_t b, int k, const Tables& tables) {
  if (b < 1 || b % 2 == 0) throw std::domain_error("counters: b must be odd and positive");
  if (k < 0 || k > 62) throw std::domain_error("counters: k must lie in [0, 62]");
  if (N < 1) throw std::domain_error("counters: N must be positive");
  if (N + static_cast<std::uint64_t>(b) > tables.primes.limit())
    throw capacity_error("counters: prime table too small for N + b");
  if (N > tables.spf.limit())
    throw capacity_error("counters: spf table too small for shifts up to N");
}

// Scans primes p in (b, N+b] over `threads` contiguous blocks and sums the
// per-block counts of the predicate. Blocks partition the range, so the
// merge is plain addition.
template <class Pred>
std::uint64_t count_primes_where(std::uint64_t N, std::int64_t b, const Tables& tables,
                                 int threads, Pred&& pred) {
  const std::uint64_t lo = static_cast<std::uint64_t>(b) + 1;
  const std::uint64_t hi = N + static_cast<std::uint64_t>(b);
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || hi - lo < 1 << 16) {
    std::uint64_t count = 0;
    tables.primes.for_each_prime(lo, hi, [&](std::uint64_t p) {
      if (pred(p)) ++count;
    });
    return count;
  }
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(threads), 0);
  std::vector<std::thread> pool;
  const std::uint64_t span = (hi - lo) / static_cast<std::uint64_t>(threads) + 1;
  for (int t = 0; t < threads; ++t) {
    std::uint64_t blo = lo + span * static_cast<std::uint64_t>(t);
    std::uint64_t bhi = std::min(hi, blo + span - 1);
    if (blo > hi) break;
    pool.emplace_back([&, blo, bhi, t] {
      std::uint64_t count = 0;
      tables.primes.for_each_prime(blo, bhi, [&](std::uint64_t p) {
        if (pred(p)) ++count;
      });
      partial[static_cast<std::size_t>(t)] = count;
    });
  }
  for (auto& th : pool) th.join();
  std::uint64_t total = 0;
  for (std::uint64_t c : partial) total += c;
  return total;
}

}  // namespace

std::uint64_t first_at_least(double t) {
  if (t <= 0.0) return 0;
  long double x = static_cast<long double>(t);
  std::uint64_t c = static_cast<std::uint64_t>(ceill(x));
  while (c > 0 && static_cast<long double>(c - 1) >= x) --c;
  while (static_cast<long double>(c) < x) ++c;
  return c;
}

std::uint64_t first_exceeding(double t) {
  if (t < 0.0) return 0;
  long double x = static_cast<long double>(t);
  std::uint64_t c = static_cast<std::uint64_t>(floorl(x)) + 1;
  while (c > 1 && static_cast<long double>(c - 1) > x) --c;
  while (static_cast<long double>(c) <= x) ++c;
  return c;
}

ShiftedRecord factor_shift(std::uint64_t p, std::int64_t b, const SpfTable& spf) {
  if (b < 1 || b % 2 == 0) throw std::domain_error("factor_shift: b must be odd and positive");
  if (p <= static_cast<std::uint64_t>(b)) throw std::domain_error("factor_shift: need p > b");
  Shift s = split_shift(p, b);
  if (s.m > spf.limit() && s.m > 1)
    throw capacity_error("factor_shift: odd part exceeds spf table");
  ShiftedRecord rec;
  rec.p = p;
  rec.v2 = s.v2;
  rec.m = s.m;
  std::uint64_t m = s.m;
  while (m > 1) {
    std::uint64_t q = spf.spf(m);
    if (rec.min_odd == 0) rec.min_odd = q;
    rec.max_odd = q;
    ++rec.omega_odd;
    while (m % q == 0) {
      m /= q;
      ++rec.big_omega_odd;
    }
  }
  return rec;
}

Rational chen_weight(std::uint64_t n, double z, double y, const SpfTable& spf) {
  if (n < 1) throw std::domain_error("chen_weight: n must be >= 1");
  if (!(z < y)) throw std::domain_error("chen_weight: need z < y");
  const std::uint64_t q_lo = first_at_least(z);
  const std::uint64_t q_hi = first_at_least(y);  // window is q_lo <= q < q_hi

  auto factors = spf.factorize(n);
  int ksum = 0, omega_total = 0;
  for (const auto& f : factors) {
    omega_total += f.e;
    if (f.p >= q_lo && f.p < q_hi) ksum += f.e;
  }

  int triples = 0;
  if (omega_total == 3) {
    for (const auto& f : factors) {
      if (f.p < q_lo || f.p >= q_hi) continue;
      // remaining pair after removing one copy of f.p, smallest first
      std::uint64_t rest = n / f.p;
      std::uint64_t p2 = spf.spf(rest);
      if (p2 >= q_hi) ++triples;  // p2 <= p3 and both >= y
    }
  }
  return Rational(2 - ksum - triples, 2);
}

Rational modified_weight(std::uint64_t n, double z, double y, int M, double logNp,
                         const SpfTable& spf) {
  if (n < 1) throw std::domain_error("modified_weight: n must be >= 1");
  if (M < 0) throw std::domain_error("modified_weight: M must be >= 0");
  if (!(z < y)) throw std::domain_error("modified_weight: need z < y");
  const std::uint64_t q_lo = first_at_least(z);
  const std::uint64_t q_hi = first_at_least(y);

  auto factors = spf.factorize(n);
  int ksum = 0;
  for (const auto& f : factors)
    if (f.p >= q_lo && f.p < q_hi) ksum += f.e;

  // n = 2^m p1 p2 p3 forces m = v2(n); only that term of the m-sum can fire.
  int triples = 0;
  int v2 = n == 1 ? 0 : std::countr_zero(n);
  if (v2 <= M) {
    std::uint64_t odd = n >> v2;
    auto odd_factors = spf.factorize(odd);
    int omega_odd_total = 0;
    for (const auto& f : odd_factors) omega_odd_total += f.e;
    if (omega_odd_total == 3) {
      double ym = std::exp((logNp - v2 * std::log(2.0)) / 3.0);
      const std::uint64_t ym_lo = first_at_least(ym);
      for (const auto& f : odd_factors) {
        if (f.p < q_lo || f.p >= ym_lo) continue;
        std::uint64_t rest = odd / f.p;
        if (spf.spf(rest) >= ym_lo) ++triples;
      }
    }
  }
  return Rational(2 - ksum - triples, 2);
}

bool membership_S(std::uint64_t n, double z, double y, const SpfTable& spf) {
  if (n == 1) return true;
  if (n < 1) return false;
  const std::uint64_t z_lo = first_at_least(z);
  const std::uint64_t y_lo = first_at_least(y);
  auto factors = spf.factorize(n);
  int omega_total = 0;
  for (const auto& f : factors) omega_total += f.e;
  if (omega_total == 1) return n >= z_lo;
  if (omega_total == 2) {
    std::uint64_t p1 = factors.front().p;  // spf chain yields ascending primes
    std::uint64_t p2 = factors.size() == 2 ? factors.back().p : p1;
    return p1 >= z_lo && p2 >= y_lo;
  }
  return false;
}

SecondSumSplit second_sum_split(std::uint64_t n, double z, double y, const SpfTable& spf) {
  const std::uint64_t q_lo = first_at_least(z);
  const std::uint64_t q_hi = first_at_least(y);
  SecondSumSplit out;
  for (const auto& f : spf.factorize(n)) {
    if (f.p < q_lo || f.p >= q_hi) continue;
    out.mult_sum += f.e;
    out.distinct_sum += 1;
    if (f.e >= 2) out.excess_sum += f.e - 1;
  }
  return out;
}

std::uint64_t count_sK(std::uint64_t N, std::int64_t b, int k, int K, CountMode mode,
                       const Tables& tables, int threads) {
  check_counting_inputs(N, b, k, tables);
  if (K < 0) throw std::domain_error("count_sK: K must be >= 0");
  const std::uint64_t mask = (1ULL << k) - 1;
  return count_primes_where(N, b, tables, threads, [&](std::uint64_t p) {
    std::uint64_t d = p - static_cast<std::uint64_t>(b);
    if (d & mask) return false;
    std::uint64_t m = d >> (d == 0 ? 0 : std::countr_zero(d));
    int factors = mode == CountMode::multiplicity ? tables.spf.big_omega(m) : tables.spf.omega(m);
    return factors <= K;
  });
}

std::uint64_t count_n2(std::uint64_t N, std::int64_t b, int k, double zexp,
                       const Tables& tables, int threads) {
  check_counting_inputs(N, b, k, tables);
  if (!(zexp > 0.0 && zexp < 1.0 / 3.0))
    throw std::domain_error("count_n2: zexp must lie in (0, 1/3)");
  const long double n_prime = static_cast<long double>(N) / exp2l(k);
  const std::uint64_t pmin = first_exceeding(static_cast<double>(powl(n_prime, zexp)));
  return count_primes_where(N, b, tables, threads, [&](std::uint64_t p) {
    Shift s = split_shift(p, b);
    if (s.v2 != k) return false;  // exact divisibility 2^k || p - b
    return is_p2_above(s.m, pmin, tables.spf);
  });
}

std::uint64_t count_s2(std::uint64_t N, std::int64_t b, int k, double zexp,
                       const Tables& tables, int threads) {
  check_counting_inputs(N, b, k, tables);
  if (!(zexp > 0.0 && zexp < 1.0 / 3.0))
    throw std::domain_error("count_s2: zexp must lie in (0, 1/3)");
  const long double n_prime = static_cast<long double>(N) / exp2l(k);
  const std::uint64_t pmin = first_exceeding(static_cast<double>(powl(n_prime, zexp)));
  return count_primes_where(N, b, tables, threads, [&](std::uint64_t p) {
    Shift s = split_shift(p, b);
    if (s.v2 < k) return false;  // only 2^k | p - b
    return is_p2_above(s.m, pmin, tables.spf);
  });
}

AuditReport decomposition_audit(std::uint64_t N, std::int64_t b, int k, double delta,
                                const Tables& tables) {
  if (b < 1 || b % 2 == 0) throw std::domain_error("decomposition_audit: b must be odd");
  if (k < 0 || k > 62) throw std::domain_error("decomposition_audit: k must lie in [0, 62]");
  if (N < 1) throw std::domain_error("decomposition_audit: N must be positive");
  if (!(delta > 0.0 && delta < 1.0 / 3.0))
    throw std::domain_error("decomposition_audit: delta must lie in (0, 1/3)");
  if (N + static_cast<std::uint64_t>(b) > tables.primes.limit())
    throw capacity_error("decomposition_audit: prime table too small for N + b");

  AuditReport report;
  report.N = N;
  report.b = b;
  report.k = k;
  report.delta = delta;
  const long double n_prime = static_cast<long double>(N) / exp2l(k);
  // The audit only factorizes elements of A and candidates up to N'.
  if (static_cast<long double>(tables.spf.limit()) < floorl(n_prime))
    throw capacity_error("decomposition_audit: spf table too small for N'");
  report.n_prime = static_cast<double>(n_prime);
  report.z = static_cast<double>(powl(n_prime, static_cast<long double>(delta)));
  report.y = static_cast<double>(powl(n_prime, 1.0L / 3.0L));
  report.weight_sum = Rational(0);

  const std::uint64_t z_lo = first_at_least(report.z);
  const std::uint64_t n_cap = static_cast<std::uint64_t>(n_prime);

  auto coprime_Pz = [&](std::uint64_t n) {
    // gcd(n, 2b) = 1 assumed by the caller; then (n, P(z)) = 1 iff every
    // prime factor is >= z.
    std::uint64_t m = n;
    while (m > 1) {
      std::uint64_t q = tables.spf.spf(m);
      if (q < z_lo) return false;
      while (m % q == 0) m /= q;
    }
    return true;
  };

  // Exhaustive classification sweep: every n <= N' coprime to 2b with all
  // prime factors >= z must satisfy w(n) > 0 => n in S.
  const std::uint64_t b2 = 2 * static_cast<std::uint64_t>(b);
  for (std::uint64_t n = 1; n <= n_cap; ++n) {
    if (std::gcd(n, b2) != 1) continue;
    if (!coprime_Pz(n)) continue;
    ++report.universal_checked;
    Rational w = chen_weight(n, report.z, report.y, tables.spf);
    if (w > Rational(0) && !membership_S(n, report.z, report.y, tables.spf))
      report.violations.push_back({n, "classification", "w(n) > 0 but n not in S (n=" +
                                                            std::to_string(n) + ")"});
  }

  // Members of A = {(p-b)/2^k : 0 < p-b <= N, 2^k || p-b}.
  const std::uint64_t hi = N + static_cast<std::uint64_t>(b);
  tables.primes.for_each_prime(static_cast<std::uint64_t>(b) + 1, hi, [&](std::uint64_t p) {
    Shift s = split_shift(p, b);
    if (s.v2 != k) return;
    std::uint64_t n = s.value >> k;
    if (std::gcd(n, b2) != 1) {
      report.violations.push_back({n, "coprime_2b", "member of A shares a factor with 2b"});
      return;
    }
    if (!coprime_Pz(n)) return;
    ++report.members_checked;
    Rational w = chen_weight(n, report.z, report.y, tables.spf);
    if (w > Rational(1))
      report.violations.push_back({n, "w_le_1", "w(n) = " + w.str()});
    bool in_S = membership_S(n, report.z, report.y, tables.spf);
    if (w > Rational(0) && !in_S)
      report.violations.push_back({n, "classification", "w(n) = " + w.str() + " but n not in S"});
    report.weight_sum = report.weight_sum + w;
    if (in_S) ++report.qualifying_count;
  });

  if (report.weight_sum > Rational(static_cast<std::int64_t>(report.qualifying_count)))
    report.violations.push_back(
        {0, "sum_bound", "sum w = " + report.weight_sum.str() + " exceeds |A n S| = " +
                             std::to_string(report.qualifying_count)});
  return report;
}

}  // namespace sievelab::counters
