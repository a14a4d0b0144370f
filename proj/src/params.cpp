#include "sievelab/params.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sievelab/constants.hpp"

namespace sievelab::params {
namespace {

constexpr double kGolden = 0.6180339887498948482;  // 1/phi
const double kDeltaFloor = 1.0 / (3.0 * std::exp(1.0));

struct Candidate {
  double a, delta, f;
};

// Ties break toward smaller a, then smaller delta.
bool better(const Candidate& lhs, const Candidate& rhs) {
  if (lhs.f != rhs.f) return lhs.f > rhs.f;
  if (lhs.a != rhs.a) return lhs.a < rhs.a;
  return lhs.delta < rhs.delta;
}

double feasible_delta_lo(double a) {
  return std::max(0.125 - a / (8.0 * (1.0 - a)), kDeltaFloor);
}
double feasible_delta_hi(double a) { return 1.0 / 6.0 - a / (2.0 * (1.0 - a)); }

}  // namespace

double SieveParams::n_prime() const { return static_cast<double>(N) / std::ldexp(1.0, k); }
double SieveParams::z() const { return std::pow(n_prime(), delta); }
double SieveParams::y() const { return std::cbrt(n_prime()); }
int SieveParams::M() const {
  return static_cast<int>(std::floor((1.0 - 3.0 * delta) * std::log(n_prime()) / std::log(2.0)));
}

void SieveParams::validate() const {
  if (b < 1 || b % 2 == 0) throw std::domain_error("SieveParams: b must be odd and positive");
  if (N < 1) throw std::domain_error("SieveParams: N must be positive");
  if (k < 0) throw std::domain_error("SieveParams: k must be >= 0");
  if (!(delta > 0.0 && delta < 1.0 / 3.0))
    throw std::domain_error("SieveParams: delta must lie in (0, 1/3)");
  if (epsilon <= 0.0) throw std::domain_error("SieveParams: epsilon must be positive");
  if (a) {
    double cap = a->to_double() * std::log2(static_cast<double>(N));
    if (static_cast<double>(k) > cap + 1e-9)
      throw std::domain_error("SieveParams: 2^k exceeds N^a for the declared exponent a");
  }
}

int k_from_policy(std::uint64_t N, const Rational& a) {
  if (N < 2) throw std::domain_error("k_from_policy: N must be >= 2");
  double cap = a.to_double() * std::log2(static_cast<double>(N));
  int k = static_cast<int>(std::floor(cap));
  while (k > 0 && static_cast<double>(k) > cap) --k;
  return std::max(k, 0);
}

double theta_of(double a, double epsilon) {
  if (!(a >= 0.0 && a < 1.0)) throw std::domain_error("theta_of: a must lie in [0, 1)");
  if (epsilon < 0.0) throw std::domain_error("theta_of: epsilon must be >= 0");
  return epsilon / (2.0 * (1.0 - a + epsilon) * (1.0 - a));
}

double alpha_of(double a, double theta) {
  if (!(a >= 0.0 && a < 1.0)) throw std::domain_error("alpha_of: a must lie in [0, 1)");
  return 0.5 - a / (2.0 * (1.0 - a)) + theta;
}

DeltaInterval chen_feasible(const Rational& a) {
  if (a <= Rational(0) || a >= Rational(1, 10))
    throw std::domain_error("chen_feasible: a must lie in (0, 1/10)");
  Rational one_a = Rational(1) - a;
  Rational lo = Rational(1, 8) - a / (Rational(8) * one_a);
  Rational hi = Rational(1, 6) - a / (Rational(2) * one_a);
  return {lo, hi};
}

Rational delta_star(const Rational& a) { return chen_feasible(a).lo; }

ChenOptimum optimize_chen(const OptimizeOptions& opt) {
  if (opt.grid_a < 16 || opt.grid_d < 16)
    throw std::domain_error("optimize_chen: grid counts must be >= 16");
  if (!(opt.a_lo > 0.0) || !(opt.a_hi < 0.1) || opt.a_lo > opt.a_hi)
    throw std::domain_error("optimize_chen: a range must satisfy 0 < a_lo <= a_hi < 1/10");

  auto objective = [&](double a, double delta) {
    return constants::f_ad(a, delta, opt.tol);
  };
  auto delta_at = [&](double a, int j, int n) {
    double lo = feasible_delta_lo(a);
    double hi = feasible_delta_hi(a) * (1.0 - 1e-12);
    if (opt.edge_delta_only || n == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1);
  };

  std::vector<double> a_grid(opt.grid_a);
  for (int i = 0; i < opt.grid_a; ++i)
    a_grid[i] = opt.a_lo + (opt.a_hi - opt.a_lo) * static_cast<double>(i) /
                               static_cast<double>(opt.grid_a - 1);
  // The reference point (1/87, 85/688) is always a candidate column when in range.
  const double a_ref = 1.0 / 87.0;
  if (a_ref >= opt.a_lo && a_ref <= opt.a_hi) a_grid.push_back(a_ref);

  bool found = false;
  Candidate best{0, 0, 0};
  int best_i = -1, best_j = -1;
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    double a = a_grid[i];
    if (!(feasible_delta_lo(a) < feasible_delta_hi(a))) continue;
    int nd = opt.edge_delta_only ? 1 : opt.grid_d;
    for (int j = 0; j < nd; ++j) {
      Candidate cand{a, delta_at(a, j, nd), 0};
      cand.f = objective(cand.a, cand.delta);
      if (!found || better(cand, best)) {
        found = true;
        best = cand;
        best_i = static_cast<int>(i);
        best_j = j;
      }
    }
  }
  if (!found) throw std::domain_error("optimize_chen: empty feasible set");

  // Golden-section refinement per coordinate, bracketed by the winning
  // cell's grid neighbours. Degenerate brackets (collapsed range, edge cell)
  // refine nothing.
  auto golden = [&](double lo, double hi, auto&& f1d) {
    double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
    double f1 = f1d(x1), f2 = f1d(x2);
    for (int it = 0; it < 48 && hi - lo > 1e-13; ++it) {
      if (f1 < f2) {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + kGolden * (hi - lo);
        f2 = f1d(x2);
      } else {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - kGolden * (hi - lo);
        f1 = f1d(x1);
      }
    }
    return 0.5 * (lo + hi);
  };

  if (a_grid.size() > 1 && best_i >= 0) {
    double lo = best_i > 0 ? a_grid[best_i - 1] : a_grid[best_i];
    double hi = best_i + 1 < static_cast<int>(a_grid.size()) ? a_grid[best_i + 1] : a_grid[best_i];
    if (hi > lo) {
      double a_fine = golden(lo, hi, [&](double a) {
        if (!(feasible_delta_lo(a) < feasible_delta_hi(a))) return -1e300;
        double d = opt.edge_delta_only ? feasible_delta_lo(a)
                                       : std::clamp(best.delta, feasible_delta_lo(a),
                                                    feasible_delta_hi(a) * (1.0 - 1e-12));
        return objective(a, d);
      });
      if (feasible_delta_lo(a_fine) < feasible_delta_hi(a_fine)) {
        double d = opt.edge_delta_only ? feasible_delta_lo(a_fine)
                                       : std::clamp(best.delta, feasible_delta_lo(a_fine),
                                                    feasible_delta_hi(a_fine) * (1.0 - 1e-12));
        Candidate cand{a_fine, d, objective(a_fine, d)};
        if (better(cand, best)) best = cand;
      }
    }
  }
  if (!opt.edge_delta_only && opt.grid_d > 1 && best_j >= 0) {
    int nd = opt.grid_d;
    double lo = best_j > 0 ? delta_at(best.a, best_j - 1, nd) : delta_at(best.a, best_j, nd);
    double hi = best_j + 1 < nd ? delta_at(best.a, best_j + 1, nd) : delta_at(best.a, best_j, nd);
    if (hi > lo) {
      double d_ref = golden(lo, hi, [&](double d) { return objective(best.a, d); });
      Candidate cand{best.a, d_ref, objective(best.a, d_ref)};
      if (better(cand, best)) best = cand;
    }
  }

  return {best.a, best.delta, best.f};
}

RichertParams richert_derive(int K, double epsilon) {
  if (K < 3 || K > 8) throw std::domain_error("richert_derive: K must lie in [3, 8]");
  RichertParams out;
  out.K = K;
  out.epsilon = epsilon;
  const double log3 = std::log(3.0);

  if (K == 8) {
    // Modulus window capped at N^(2/5) exp(-(log log N)^3); theta plays no role.
    out.a = Rational(2, 5);
    out.theta = 0.0;
    out.alpha = 1.0 / 6.0;
    out.v = 24.0;
    out.u = 8.0;
    out.lambda_min = 1.0;
    out.lead_exact = 16.0 * log3;
    out.lead_constant = 52.0 / 3.0;
    return out;
  }

  if (!(epsilon > 0.0)) throw std::domain_error("richert_derive: epsilon must be positive");
  out.a = Rational(3 * K - 7, 6 * K - 6);
  double a = out.a.to_double();
  out.theta = theta_of(a, epsilon);
  out.alpha = alpha_of(a, out.theta);
  out.v = 4.0 / out.alpha;
  out.u = 4.0 / (3.0 * out.alpha);
  out.lambda_min = 1.0 / (static_cast<double>(K) + 1.0 - out.u);

  double th = out.theta;
  double cube = std::pow(1.0 + 3.0 * K, 3);
  double bracket = 8.0 + 3.0 * th * (1.0 + 4.0 * K + 3.0 * K * K);
  out.lead_constant = 8.0 * th * cube * log3 / (bracket * bracket);
  out.lead_exact = 8.0 * th * cube * log3 / ((4.0 + th * (3.0 * K + 1.0)) * bracket);
  if (K == 3) {
    double denom = 0.4 + 6.0 * th;
    out.lead_specialized = 40.0 * th * log3 / (denom * denom);
  }
  return out;
}

}  // namespace sievelab::params
