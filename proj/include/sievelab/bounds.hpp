#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sievelab/constants.hpp"

namespace sievelab::bounds {

// Which theorem's lower-bound display is being evaluated.
enum class Theorem { n2, s2, s3, sK, s8 };

Theorem theorem_for(const std::string& kind, int K);
std::string kind_name(Theorem t);

struct BoundSpec {
  Theorem theorem = Theorem::n2;
  int K = 0;               // required in [4, 7] for Theorem::sK
  double epsilon = 0.01;   // enters the s3/sK constants via theta
  std::uint64_t N = 0;
  std::int64_t b = 1;
  int k = 0;
  constants::SingularSeries singular;
};

// The leading constant of the bound: 0.0016 (n2), twice that (s2),
// 40 theta log3/(2/5+6theta)^2 (s3), the (1+3K)^3 display (sK, K=4..7),
// 52/3 (s8).
double bound_constant(const BoundSpec& spec);

// constant * twin_factor * b_factor * N' / ((log N)(log N')), natural logs.
double bound_value(const BoundSpec& spec);

// Absolute uncertainty from truncating the twin product.
double bound_uncertainty(const BoundSpec& spec);

// One comparison row; the regime flag stays false at desk scale (the
// theorems' modulus window and "sufficiently large N" caveat are never
// satisfied there).
struct CountResult {
  std::uint64_t N = 0;
  std::int64_t b = 1;
  int k = 0;
  std::string kind;  // "n2" | "s2" | "sK"
  int K = 0;
  std::uint64_t count = 0;
  std::optional<double> bound;
  std::optional<double> bound_err;
  std::optional<double> ratio;
  bool regime = false;
};

CountResult compare(std::uint64_t count, const BoundSpec& spec);

// CSV schema: N,b,k,kind,K,count,bound,bound_err,ratio,regime with a header
// row, LF endings, floats at 12 significant digits, empty cells for absent
// optionals.
std::string csv_header();
std::string to_csv_row(const CountResult& row);
CountResult from_csv_row(const std::string& line);

// 12-significant-digit float rendering shared by every CSV emitter.
std::string format_double(double v);

}  // namespace sievelab::bounds
