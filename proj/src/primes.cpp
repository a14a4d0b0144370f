#include "sievelab/primes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <thread>

#include "sievelab/constants.hpp"

namespace sievelab {
namespace {

constexpr std::uint64_t kSegmentBits = 1ULL << 20;  // odd numbers per segment

// Base primes up to n via a plain odd sieve (n stays <= sqrt(2e10) ~ 1.5e5).
std::vector<std::uint32_t> base_primes(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  if (n < 3) return out;
  std::vector<std::uint8_t> comp(n / 2 + 1, 0);  // index i <-> 2i+1
  for (std::uint64_t p = 3; p * p <= n; p += 2) {
    if (comp[p >> 1]) continue;
    for (std::uint64_t m = p * p; m <= n; m += 2 * p) comp[m >> 1] = 1;
  }
  for (std::uint64_t p = 3; p <= n; p += 2)
    if (!comp[p >> 1]) out.push_back(static_cast<std::uint32_t>(p));
  return out;
}

void sieve_segment(std::vector<std::uint64_t>& bits, std::uint64_t bit_lo, std::uint64_t bit_hi,
                   const std::vector<std::uint32_t>& bases) {
  const std::uint64_t n_lo = 2 * bit_lo + 1;
  const std::uint64_t n_hi = 2 * (bit_hi - 1) + 1;
  for (std::uint64_t p : bases) {
    std::uint64_t m = p * p;
    if (m > n_hi) break;
    if (m < n_lo) {
      m = ((n_lo + p - 1) / p) * p;
      if ((m & 1) == 0) m += p;
    }
    for (; m <= n_hi; m += 2 * p) {
      std::uint64_t i = m >> 1;
      bits[i >> 6] &= ~(1ULL << (i & 63));
    }
  }
}

std::uint64_t read_u64_le(std::istream& in) {
  unsigned char raw[8];
  in.read(reinterpret_cast<char*>(raw), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | raw[i];
  return v;
}

void write_u64_le(std::ostream& out, std::uint64_t v) {
  unsigned char raw[8];
  for (int i = 0; i < 8; ++i) raw[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(raw), 8);
}

}  // namespace

PrimeTable sieve_primes(std::uint64_t limit, int threads) {
  if (limit < 2) throw std::domain_error("sieve_primes: limit must be >= 2");
  if (limit > PrimeTable::kLimitCeiling)
    throw capacity_error("sieve_primes: limit exceeds the 2e10 implementation ceiling");

  PrimeTable table;
  table.limit_ = limit;
  const std::uint64_t nbits = (limit + 1) / 2;
  const std::uint64_t nwords = (nbits + 63) / 64;
  table.bits_.assign(nwords, ~0ULL);
  table.bits_[0] &= ~1ULL;  // 1 is not prime
  if (nbits & 63) table.bits_[nwords - 1] &= (1ULL << (nbits & 63)) - 1;

  const auto bases = base_primes(static_cast<std::uint32_t>(std::sqrt(static_cast<double>(limit))) + 1);

  const std::uint64_t nsegs = (nbits + kSegmentBits - 1) / kSegmentBits;
  unsigned hw = std::thread::hardware_concurrency();
  unsigned nthreads = threads > 0 ? static_cast<unsigned>(threads) : (hw ? hw : 1);
  nthreads = std::min<std::uint64_t>(nthreads, nsegs);

  auto worker = [&](std::atomic<std::uint64_t>& next) {
    for (std::uint64_t s = next.fetch_add(1); s < nsegs; s = next.fetch_add(1)) {
      std::uint64_t lo = s * kSegmentBits;
      std::uint64_t hi = std::min(nbits, lo + kSegmentBits);
      sieve_segment(table.bits_, lo, hi, bases);
    }
  };

  std::atomic<std::uint64_t> next{0};
  if (nthreads <= 1) {
    worker(next);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back([&] { worker(next); });
    for (auto& th : pool) th.join();
  }

  std::uint64_t cnt = limit >= 2 ? 1 : 0;
  for (std::uint64_t w : table.bits_) cnt += static_cast<std::uint64_t>(std::popcount(w));
  table.count_ = cnt;
  return table;
}

void PrimeTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("PrimeTable::save: cannot open " + path);
  out.write("SVLB1", 5);
  write_u64_le(out, limit_);
  write_u64_le(out, count_);
  for (std::uint64_t w : bits_) write_u64_le(out, w);
  if (!out) throw std::runtime_error("PrimeTable::save: write failed for " + path);
}

PrimeTable PrimeTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("PrimeTable::load: cannot open " + path);
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, "SVLB1", 5) != 0)
    throw std::runtime_error("PrimeTable::load: bad magic in " + path);
  PrimeTable table;
  table.limit_ = read_u64_le(in);
  std::uint64_t stored_count = read_u64_le(in);
  if (!in || table.limit_ < 2 || table.limit_ > kLimitCeiling)
    throw std::runtime_error("PrimeTable::load: corrupt header in " + path);
  const std::uint64_t nbits = (table.limit_ + 1) / 2;
  const std::uint64_t nwords = (nbits + 63) / 64;
  table.bits_.resize(nwords);
  for (std::uint64_t i = 0; i < nwords; ++i) table.bits_[i] = read_u64_le(in);
  if (!in) throw std::runtime_error("PrimeTable::load: truncated bitset in " + path);
  std::uint64_t cnt = table.limit_ >= 2 ? 1 : 0;
  for (std::uint64_t w : table.bits_) cnt += static_cast<std::uint64_t>(std::popcount(w));
  if (cnt != stored_count)
    throw std::runtime_error("PrimeTable::load: checksum mismatch in " + path);
  table.count_ = cnt;
  return table;
}

std::vector<SpfTable::Factor> SpfTable::factorize(std::uint64_t n) const {
  std::vector<Factor> out;
  if (n <= 1) return out;
  if (n > limit_) throw capacity_error("SpfTable: n out of range");
  while (n > 1) {
    std::uint64_t p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

int SpfTable::omega(std::uint64_t n) const {
  if (n <= 1) return 0;
  if (n > limit_) throw capacity_error("SpfTable: n out of range");
  int w = 0;
  while (n > 1) {
    std::uint64_t p = spf_[n];
    ++w;
    while (n % p == 0) n /= p;
  }
  return w;
}

int SpfTable::big_omega(std::uint64_t n) const {
  if (n <= 1) return 0;
  if (n > limit_) throw capacity_error("SpfTable: n out of range");
  int w = 0;
  while (n > 1) {
    n /= spf_[n];
    ++w;
  }
  return w;
}

SpfTable spf_table(std::uint64_t limit) {
  if (limit < 2) throw std::domain_error("spf_table: limit must be >= 2");
  if (limit > SpfTable::kLimitCeiling)
    throw capacity_error("spf_table: limit exceeds the 2^31 memory budget");
  SpfTable table;
  table.limit_ = limit;
  table.spf_.assign(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (table.spf_[i] == 0) {
      table.spf_[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      if (p > table.spf_[i] || i * p > limit) break;
      table.spf_[i * p] = p;
    }
  }
  return table;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw std::domain_error("euler_phi: n must be positive");
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    result -= result / p;
    while (n % p == 0) n /= p;
  }
  if (n > 1) result -= result / n;
  return result;
}

std::uint64_t prime_count_ap(std::uint64_t x, std::uint64_t q, std::uint64_t r,
                             const PrimeTable& table) {
  if (q == 0 || r >= q) throw std::domain_error("prime_count_ap: need 0 <= r < q");
  if (x > table.limit()) throw capacity_error("prime_count_ap: table too small");
  std::uint64_t count = 0;
  table.for_each_prime(2, x, [&](std::uint64_t p) {
    if (p % q == r) ++count;
  });
  return count;
}

EquidistRow equidist_error(std::uint64_t x, std::uint64_t q, std::uint64_t r,
                           const PrimeTable& table, double tol) {
  if (q == 0 || r >= q) throw std::domain_error("equidist_error: need 0 <= r < q");
  if (std::gcd(r, q) != 1) throw std::domain_error("equidist_error: gcd(r, q) must be 1");
  if (x > table.limit()) throw capacity_error("equidist_error: table too small");
  EquidistRow row;
  row.x = static_cast<double>(x);
  row.modulus = q;
  row.residue = r;
  row.pi_val = prime_count_ap(x, q, r, table);
  double li = x >= 2 ? constants::log_integral(static_cast<double>(x), tol) : 0.0;
  row.li_over_phi = li / static_cast<double>(euler_phi(q));
  row.error = static_cast<double>(row.pi_val) - row.li_over_phi;
  return row;
}

AveragedErrorReport averaged_error_report(std::uint64_t x, std::uint64_t qpow,
                                          std::uint64_t Dmax, const PrimeTable& table,
                                          std::uint64_t seed, double li_tol) {
  if (qpow < 2 || (qpow & (qpow - 1)) != 0)
    throw std::domain_error("averaged_error: qpow must be a power of 2, >= 2");
  if (Dmax < 1) throw std::domain_error("averaged_error: Dmax must be >= 1");
  if (x > table.limit()) throw capacity_error("averaged_error: table too small");
  if (qpow * Dmax >= x) throw capacity_error("averaged_error: moduli too large for x");

  AveragedErrorReport report;
  report.x = x;
  report.qpow = qpow;
  report.dmax = Dmax;
  const double li = constants::log_integral(static_cast<double>(x), li_tol);

  for (std::uint64_t d = 1; d <= Dmax; ++d) {
    if ((d & 1) == 0) continue;
    if (std::gcd(d, qpow) != 1) continue;
    bool squarefree = true;  // d is odd, check odd squares only
    for (std::uint64_t p = 3; p * p <= d; p += 2)
      if (d % (p * p) == 0) { squarefree = false; break; }
    if (!squarefree) continue;

    const std::uint64_t m = qpow * d;
    std::vector<std::uint64_t> counts(m, 0);
    table.for_each_prime(2, x, [&](std::uint64_t p) { ++counts[p % m]; });

    const std::uint64_t phi = euler_phi(m);
    const double expected = li / static_cast<double>(phi);

    std::vector<std::uint64_t> residues;
    if (phi <= 64) {
      for (std::uint64_t r = 1; r < m; ++r)
        if (std::gcd(r, m) == 1) residues.push_back(r);
    } else {
      std::mt19937_64 rng(seed ^ (d * 0x9E3779B97F4A7C15ULL));
      std::uniform_int_distribution<std::uint64_t> pick(1, m - 1);
      std::vector<std::uint8_t> taken(m, 0);
      while (residues.size() < 64) {
        std::uint64_t r = pick(rng);
        if (taken[r] || std::gcd(r, m) != 1) continue;
        taken[r] = 1;
        residues.push_back(r);
      }
      std::sort(residues.begin(), residues.end());
    }

    EquidistRow worst;
    double worst_abs = -1.0;
    for (std::uint64_t r : residues) {
      double err = static_cast<double>(counts[r]) - expected;
      if (std::fabs(err) > worst_abs) {
        worst_abs = std::fabs(err);
        worst.x = static_cast<double>(x);
        worst.modulus = m;
        worst.residue = r;
        worst.pi_val = counts[r];
        worst.li_over_phi = expected;
        worst.error = err;
      }
    }
    report.sum_max_abs_error += worst_abs;
    report.worst_rows.push_back(worst);
  }
  return report;
}

double averaged_error(std::uint64_t x, std::uint64_t qpow, std::uint64_t Dmax,
                      const PrimeTable& table, std::uint64_t seed) {
  return averaged_error_report(x, qpow, Dmax, table, seed).sum_max_abs_error;
}

}  // namespace sievelab
