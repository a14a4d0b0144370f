#include "sievelab/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "sievelab/params.hpp"

namespace sievelab::bounds {
namespace {

constexpr double kChenConstant = 0.0016;

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\n' && c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Theorem theorem_for(const std::string& kind, int K) {
  if (kind == "n2") return Theorem::n2;
  if (kind == "s2") return Theorem::s2;
  if (kind == "sK") {
    if (K == 3) return Theorem::s3;
    if (K >= 4 && K <= 7) return Theorem::sK;
    if (K == 8) return Theorem::s8;
    throw std::domain_error("theorem_for: no bound display for sK with K=" + std::to_string(K));
  }
  throw std::domain_error("theorem_for: unknown kind '" + kind + "'");
}

std::string kind_name(Theorem t) {
  switch (t) {
    case Theorem::n2: return "n2";
    case Theorem::s2: return "s2";
    default: return "sK";
  }
}

double bound_constant(const BoundSpec& spec) {
  const double log3 = std::log(3.0);
  switch (spec.theorem) {
    case Theorem::n2:
      return kChenConstant;
    case Theorem::s2:
      return 2.0 * kChenConstant;
    case Theorem::s3: {
      double theta = params::theta_of(1.0 / 6.0, spec.epsilon);
      double denom = 0.4 + 6.0 * theta;
      return 40.0 * theta * log3 / (denom * denom);
    }
    case Theorem::sK: {
      if (spec.K < 4 || spec.K > 7)
        throw std::domain_error("bound_constant: Theorem sK needs K in [4, 7]");
      double a = static_cast<double>(3 * spec.K - 7) / static_cast<double>(6 * spec.K - 6);
      double theta = params::theta_of(a, spec.epsilon);
      double cube = std::pow(1.0 + 3.0 * spec.K, 3);
      double bracket = 8.0 + 3.0 * theta * (1.0 + 4.0 * spec.K + 3.0 * spec.K * spec.K);
      return 8.0 * theta * cube * log3 / (bracket * bracket);
    }
    case Theorem::s8:
      return 52.0 / 3.0;
  }
  throw std::logic_error("bound_constant: unreachable");
}

double bound_value(const BoundSpec& spec) {
  double n_prime = static_cast<double>(spec.N) / std::ldexp(1.0, spec.k);
  if (!(n_prime >= 3.0)) throw std::domain_error("bound_value: N' must be >= 3");
  double logs = std::log(static_cast<double>(spec.N)) * std::log(n_prime);
  return bound_constant(spec) * spec.singular.twin_factor * spec.singular.b_factor * n_prime /
         logs;
}

double bound_uncertainty(const BoundSpec& spec) {
  return bound_value(spec) * spec.singular.tail_bound / spec.singular.twin_factor;
}

CountResult compare(std::uint64_t count, const BoundSpec& spec) {
  CountResult row;
  row.N = spec.N;
  row.b = spec.b;
  row.k = spec.k;
  row.kind = kind_name(spec.theorem);
  row.K = spec.theorem == Theorem::s3   ? 3
          : spec.theorem == Theorem::sK ? spec.K
          : spec.theorem == Theorem::s8 ? 8
                                        : 0;
  row.count = count;
  double bound = bound_value(spec);
  row.bound = bound;
  row.bound_err = bound_uncertainty(spec);
  row.ratio = bound > 0.0 ? static_cast<double>(count) / bound : 0.0;
  row.regime = false;
  return row;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_header() { return "N,b,k,kind,K,count,bound,bound_err,ratio,regime"; }

std::string to_csv_row(const CountResult& row) {
  std::ostringstream out;
  out << row.N << ',' << row.b << ',' << row.k << ',' << row.kind << ',' << row.K << ','
      << row.count << ',';
  out << (row.bound ? format_double(*row.bound) : "") << ',';
  out << (row.bound_err ? format_double(*row.bound_err) : "") << ',';
  out << (row.ratio ? format_double(*row.ratio) : "") << ',';
  out << (row.regime ? "true" : "false");
  return out.str();
}

CountResult from_csv_row(const std::string& line) {
  auto fields = split_fields(line);
  if (fields.size() != 10) throw std::invalid_argument("from_csv_row: expected 10 fields");
  CountResult row;
  row.N = std::stoull(fields[0]);
  row.b = std::stoll(fields[1]);
  row.k = std::stoi(fields[2]);
  row.kind = fields[3];
  row.K = std::stoi(fields[4]);
  row.count = std::stoull(fields[5]);
  if (!fields[6].empty()) row.bound = std::stod(fields[6]);
  if (!fields[7].empty()) row.bound_err = std::stod(fields[7]);
  if (!fields[8].empty()) row.ratio = std::stod(fields[8]);
  row.regime = fields[9] == "true";
  return row;
}

}  // namespace sievelab::bounds
