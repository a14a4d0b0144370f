#include "sievelab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sievelab/acceptance.hpp"
#include "sievelab/bounds.hpp"
#include "sievelab/constants.hpp"
#include "sievelab/counters.hpp"
#include "sievelab/params.hpp"
#include "sievelab/primes.hpp"
#include "sievelab/quadrature.hpp"

namespace sievelab::cli {
namespace {

using nlohmann::json;

struct ParsedRatio {
  double value = 0.0;
  std::optional<Rational> exact;
};

// Accepts "p/q" (kept exact) or a plain float literal.
ParsedRatio parse_ratio_or_double(const std::string& text) {
  if (text.find('/') != std::string::npos) {
    Rational r = Rational::parse(text);
    return {r.to_double(), r};
  }
  std::size_t pos = 0;
  double v = std::stod(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return {v, std::nullopt};
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + out_path);
  out << text;
}

// Prime table construction honouring the SIEVELAB_CACHE directory.
PrimeTable build_prime_table(std::uint64_t limit, int threads) {
  const char* dir = std::getenv("SIEVELAB_CACHE");
  if (dir && *dir) {
    std::string path = std::string(dir) + "/primes_" + std::to_string(limit) + ".svlb";
    try {
      return PrimeTable::load(path);
    } catch (const std::runtime_error&) {
      PrimeTable t = sieve_primes(limit, threads);
      try {
        t.save(path);
      } catch (const std::runtime_error&) {
        // cache directory not writable; keep going without it
      }
      return t;
    }
  }
  return sieve_primes(limit, threads);
}

json equidist_row_json(const EquidistRow& row) {
  return json{{"error", row.error},
              {"li_over_phi", row.li_over_phi},
              {"modulus", row.modulus},
              {"pi", row.pi_val},
              {"residue", row.residue},
              {"x", row.x}};
}

int run_constants(const std::string& a_text, const std::string& delta_text, double tol,
                  int f_prime_M, const std::string& out) {
  Rational a = Rational::parse(a_text);
  ParsedRatio delta = parse_ratio_or_double(delta_text);
  auto bundle = constants::evaluate_bundle(a.to_double(), delta.value, tol, f_prime_M);
  json doc{{"a", a.str()},
           {"c1", bundle.c1},
           {"c2", bundle.c2},
           {"c_delta", bundle.c_delta},
           {"delta", delta.exact ? delta.exact->str() : bounds::format_double(delta.value)},
           {"f_ad", bundle.f_ad},
           {"f_prime_M", bundle.f_prime_M},
           {"f_prime_ad", bundle.f_prime_ad},
           {"quad_err", bundle.quad_err}};
  if (delta.exact) {
    auto p1 = constants::c1_parts(a, *delta.exact);
    auto p2 = constants::c2_parts(a, *delta.exact);
    doc["c1_prefactor"] = p1.prefactor.str();
    doc["c1_log_arg"] = p1.log_arg.str();
    doc["c2_prefactor"] = p2.prefactor.str();
    doc["c2_log_arg1"] = p2.log_arg1.str();
    doc["c2_log_arg2"] = p2.log_arg2.str();
  }
  write_output(doc.dump(2) + "\n", out);
  return 0;
}

int run_optimize(int grid_a, int grid_d, double tol, bool edge, const std::string& out) {
  params::OptimizeOptions opt;
  opt.grid_a = grid_a;
  opt.grid_d = grid_d;
  opt.tol = tol;
  opt.edge_delta_only = edge;
  auto best = params::optimize_chen(opt);
  json doc{{"a_star", best.a},
           {"delta_star", best.delta},
           {"edge_delta_only", edge},
           {"f_star", best.f},
           {"grid_a", grid_a},
           {"grid_d", grid_d}};
  write_output(doc.dump(2) + "\n", out);
  return 0;
}

int run_richert(int K, double epsilon, const std::string& out) {
  auto rp = params::richert_derive(K, epsilon);
  json doc{{"K", rp.K},
           {"a", rp.a.str()},
           {"alpha", rp.alpha},
           {"epsilon", rp.epsilon},
           {"lambda_min", rp.lambda_min},
           {"lead_constant", rp.lead_constant},
           {"lead_exact", rp.lead_exact},
           {"theta", rp.theta},
           {"u", rp.u},
           {"v", rp.v}};
  if (K == 3) doc["lead_specialized"] = rp.lead_specialized;
  if (K == 8) {
    doc["sixteen_log3"] = 16.0 * std::log(3.0);
    doc["check_16log3_gt_52over3"] = 16.0 * std::log(3.0) > 52.0 / 3.0;
  }
  write_output(doc.dump(2) + "\n", out);
  return 0;
}

int run_count(const std::string& kind, std::uint64_t N, std::int64_t b, int k,
              const std::string& a_exp, int K, double zexp, const std::string& mode_text,
              double epsilon, std::int64_t trunc_prime, int threads, const std::string& out) {
  if (kind != "n2" && kind != "s2" && kind != "sK")
    throw std::invalid_argument("count: --kind must be n2, s2 or sK");
  if (!a_exp.empty()) k = params::k_from_policy(N, Rational::parse(a_exp));
  counters::CountMode mode;
  if (mode_text == "multiplicity")
    mode = counters::CountMode::multiplicity;
  else if (mode_text == "distinct")
    mode = counters::CountMode::distinct;
  else
    throw std::invalid_argument("count: --mode must be multiplicity or distinct");

  SpfTable spf = spf_table(N);  // cheap capacity check before the big sieve
  PrimeTable primes = build_prime_table(N + static_cast<std::uint64_t>(b), threads);
  counters::Tables tables{primes, spf};

  std::uint64_t count = 0;
  if (kind == "n2")
    count = counters::count_n2(N, b, k, zexp, tables, threads);
  else if (kind == "s2")
    count = counters::count_s2(N, b, k, zexp, tables, threads);
  else
    count = counters::count_sK(N, b, k, K, mode, tables, threads);

  bounds::CountResult row;
  if (kind != "sK" || (K >= 3 && K <= 8)) {
    bounds::BoundSpec spec;
    spec.theorem = bounds::theorem_for(kind, K);
    spec.K = K;
    spec.epsilon = epsilon;
    spec.N = N;
    spec.b = b;
    spec.k = k;
    spec.singular = constants::singular_series(b, trunc_prime);
    row = bounds::compare(count, spec);
  } else {
    row.N = N;
    row.b = b;
    row.k = k;
    row.kind = kind;
    row.K = K;
    row.count = count;
  }
  write_output(bounds::csv_header() + "\n" + bounds::to_csv_row(row) + "\n", out);
  return 0;
}

int run_audit(std::uint64_t N, std::int64_t b, int k, const std::string& delta_text,
              int threads, const std::string& out) {
  ParsedRatio delta = parse_ratio_or_double(delta_text);
  PrimeTable primes = build_prime_table(N + static_cast<std::uint64_t>(b), threads);
  SpfTable spf = spf_table(static_cast<std::uint64_t>(
      std::max(2.0, std::floor(static_cast<double>(N) / std::ldexp(1.0, k)))));
  counters::Tables tables{primes, spf};
  auto report = counters::decomposition_audit(N, b, k, delta.value, tables);
  json viol = json::array();
  for (const auto& v : report.violations)
    viol.push_back(json{{"check", v.check}, {"detail", v.detail}, {"n", v.n}});
  json doc{{"N", report.N},
           {"b", report.b},
           {"clean", report.clean()},
           {"delta", delta.exact ? delta.exact->str() : bounds::format_double(delta.value)},
           {"k", report.k},
           {"members_checked", report.members_checked},
           {"n_prime", report.n_prime},
           {"qualifying_count", report.qualifying_count},
           {"universal_checked", report.universal_checked},
           {"violations", viol},
           {"weight_sum", report.weight_sum.str()},
           {"y", report.y},
           {"z", report.z}};
  write_output(doc.dump(2) + "\n", out);
  return 0;
}

int run_equidist(std::uint64_t x, int k, std::uint64_t Dmax, std::uint64_t seed, double tol,
                 int threads, const std::string& out) {
  if (k < 1) throw std::invalid_argument("equidist: --k must be >= 1 (modulus 2^k)");
  std::uint64_t qpow = 1ULL << k;
  PrimeTable primes = build_prime_table(x, threads);
  auto report = averaged_error_report(x, qpow, Dmax, primes, seed, tol);
  json rows = json::array();
  for (const auto& row : report.worst_rows) rows.push_back(equidist_row_json(row));
  double norm = static_cast<double>(x) / std::log(static_cast<double>(x));
  json doc{{"Dmax", report.dmax},
           {"normalized", report.sum_max_abs_error / norm},
           {"qpow", report.qpow},
           {"rows", rows},
           {"seed", seed},
           {"sum_max_abs_error", report.sum_max_abs_error},
           {"x", report.x}};
  write_output(doc.dump(2) + "\n", out);
  return 0;
}

int run_bounds(const std::string& kind, int K, std::uint64_t N, std::int64_t b, int k,
               double epsilon, std::int64_t trunc_prime, const std::string& out) {
  bounds::BoundSpec spec;
  spec.theorem = bounds::theorem_for(kind, K);
  spec.K = K;
  spec.epsilon = epsilon;
  spec.N = N;
  spec.b = b;
  spec.k = k;
  spec.singular = constants::singular_series(b, trunc_prime);
  json doc{{"K", K},
           {"N", N},
           {"b", b},
           {"b_factor", spec.singular.b_factor},
           {"bound", bounds::bound_value(spec)},
           {"bound_err", bounds::bound_uncertainty(spec)},
           {"constant", bounds::bound_constant(spec)},
           {"k", k},
           {"kind", kind},
           {"n_prime", static_cast<double>(N) / std::ldexp(1.0, k)},
           {"trunc_prime", spec.singular.truncation_prime},
           {"twin_factor", spec.singular.twin_factor}};
  write_output(doc.dump(2) + "\n", out);
  return 0;
}

int run_report(std::vector<std::uint64_t> Ns, std::vector<std::int64_t> bs, std::vector<int> ks,
               double zexp, double epsilon, std::int64_t trunc_prime, int threads,
               const std::string& out) {
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  const std::int64_t max_b = bs.back();

  std::string text = bounds::csv_header() + "\n";
  for (std::uint64_t N : Ns) {
    PrimeTable primes = build_prime_table(N + static_cast<std::uint64_t>(max_b), threads);
    SpfTable spf = spf_table(N);
    counters::Tables tables{primes, spf};
    for (std::int64_t b : bs) {
      auto singular = constants::singular_series(b, trunc_prime);
      for (int k : ks) {
        auto emit = [&](bounds::Theorem theorem, int K, std::uint64_t count) {
          bounds::BoundSpec spec{theorem, K, epsilon, N, b, k, singular};
          text += bounds::to_csv_row(bounds::compare(count, spec)) + "\n";
        };
        emit(bounds::Theorem::n2, 0, counters::count_n2(N, b, k, zexp, tables, threads));
        emit(bounds::Theorem::s2, 0, counters::count_s2(N, b, k, zexp, tables, threads));
        for (int K = 3; K <= 8; ++K) {
          std::uint64_t c =
              counters::count_sK(N, b, k, K, counters::CountMode::multiplicity, tables, threads);
          emit(bounds::theorem_for("sK", K), K, c);
        }
      }
    }
  }
  write_output(text, out);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"sievelab: constants, parameter relations and empirical counts for shifted "
               "primes with a prescribed 2-power factor"};
  app.require_subcommand(1);

  std::string out;
  int threads = 0;

  // constants
  auto* sc_constants = app.add_subcommand("constants", "evaluate C1, C2, C_delta, f_ad");
  std::string c_a = "1/87", c_delta_text = "85/688";
  double c_tol = 1e-12;
  int c_M = 1;
  sc_constants->add_option("--a", c_a, "exponent ratio a as p/q");
  sc_constants->add_option("--delta", c_delta_text, "delta as p/q or float");
  sc_constants->add_option("--tol", c_tol, "quadrature tolerance");
  sc_constants->add_option("--M", c_M, "M used for f'_{a,delta}");
  sc_constants->add_option("--out", out, "output path (default stdout)");

  // optimize
  auto* sc_optimize = app.add_subcommand("optimize", "maximize f_ad over the feasible region");
  int o_grid_a = 48, o_grid_d = 48;
  double o_tol = 1e-10;
  bool o_edge = false;
  sc_optimize->add_option("--grid-a", o_grid_a, "grid points in a (>= 16)");
  sc_optimize->add_option("--grid-d", o_grid_d, "grid points in delta (>= 16)");
  sc_optimize->add_option("--tol", o_tol, "quadrature tolerance");
  sc_optimize->add_flag("--edge", o_edge, "restrict delta to the left admissible edge");
  sc_optimize->add_option("--out", out, "output path (default stdout)");

  // richert
  auto* sc_richert = app.add_subcommand("richert", "derive weighted-sieve parameters for K");
  int r_K = 3;
  double r_eps = 0.01;
  sc_richert->add_option("--K", r_K, "odd-prime-factor budget, 3..8")->required();
  sc_richert->add_option("--epsilon", r_eps, "epsilon in the modulus window");
  sc_richert->add_option("--out", out, "output path (default stdout)");

  // count
  auto* sc_count = app.add_subcommand("count", "empirical counts n2/s2/sK");
  std::string k_kind = "sK", k_mode = "multiplicity", k_aexp;
  std::uint64_t k_N = 0;
  std::int64_t k_b = 1, k_trunc = 10'000'000;
  int k_k = 2, k_K = 2;
  double k_zexp = 0.1, k_eps = 0.01;
  sc_count->add_option("--kind", k_kind, "n2 | s2 | sK");
  sc_count->add_option("--N", k_N, "shift range bound")->required();
  sc_count->add_option("--b", k_b, "odd shift b");
  auto* k_opt = sc_count->add_option("--k", k_k, "power-of-2 exponent");
  sc_count->add_option("--a-exp", k_aexp, "derive k from the policy 2^k <= N^a, a = p/q")
      ->excludes(k_opt);
  sc_count->add_option("--K", k_K, "odd prime factor budget (kind sK)");
  sc_count->add_option("--zexp", k_zexp, "threshold exponent for n2/s2");
  sc_count->add_option("--mode", k_mode, "multiplicity | distinct");
  sc_count->add_option("--epsilon", k_eps, "epsilon for the sK bound");
  sc_count->add_option("--trunc", k_trunc, "twin-product truncation prime");
  sc_count->add_option("--threads", threads, "worker threads (0 = all)");
  sc_count->add_option("--out", out, "output path (default stdout)");

  // audit
  auto* sc_audit = app.add_subcommand("audit", "pointwise weighted-count decomposition audit");
  std::uint64_t a_N = 0;
  std::int64_t a_b = 1;
  int a_k = 2;
  std::string a_delta = "85/688";
  sc_audit->add_option("--N", a_N, "shift range bound")->required();
  sc_audit->add_option("--b", a_b, "odd shift b");
  sc_audit->add_option("--k", a_k, "power-of-2 exponent");
  sc_audit->add_option("--delta", a_delta, "delta as p/q or float");
  sc_audit->add_option("--threads", threads, "worker threads for table build");
  sc_audit->add_option("--out", out, "output path (default stdout)");

  // equidist
  auto* sc_equidist = app.add_subcommand("equidist", "averaged progression error for 2-power moduli");
  std::uint64_t e_x = 0, e_Dmax = 10, e_seed = 1;
  int e_k = 3;
  double e_tol = 1e-6;
  sc_equidist->add_option("--N", e_x, "count primes up to N")->required();
  sc_equidist->add_option("--k", e_k, "modulus 2^k");
  sc_equidist->add_option("--Dmax", e_Dmax, "range of auxiliary moduli d");
  sc_equidist->add_option("--seed", e_seed, "residue sampling seed");
  sc_equidist->add_option("--tol", e_tol, "li quadrature tolerance");
  sc_equidist->add_option("--threads", threads, "worker threads for table build");
  sc_equidist->add_option("--out", out, "output path (default stdout)");

  // bounds
  auto* sc_bounds = app.add_subcommand("bounds", "evaluate a theorem's lower-bound value");
  std::string b_kind = "n2";
  int b_K = 0, b_k = 2;
  std::uint64_t b_N = 0;
  std::int64_t b_b = 1, b_trunc = 10'000'000;
  double b_eps = 0.01;
  sc_bounds->add_option("--kind", b_kind, "n2 | s2 | sK");
  sc_bounds->add_option("--K", b_K, "K for kind sK (3..8)");
  sc_bounds->add_option("--N", b_N, "N")->required();
  sc_bounds->add_option("--b", b_b, "odd shift b");
  sc_bounds->add_option("--k", b_k, "power-of-2 exponent");
  sc_bounds->add_option("--epsilon", b_eps, "epsilon for sK");
  sc_bounds->add_option("--trunc", b_trunc, "twin-product truncation prime");
  sc_bounds->add_option("--out", out, "output path (default stdout)");

  // report
  auto* sc_report = app.add_subcommand("report", "batch count-vs-bound grid as CSV");
  std::vector<std::uint64_t> rp_N;
  std::vector<std::int64_t> rp_b{1};
  std::vector<int> rp_k{2};
  double rp_zexp = 0.1, rp_eps = 0.01;
  std::int64_t rp_trunc = 10'000'000;
  sc_report->add_option("--N", rp_N, "N values")->required();
  sc_report->add_option("--b", rp_b, "odd shifts b");
  sc_report->add_option("--k", rp_k, "power-of-2 exponents");
  sc_report->add_option("--zexp", rp_zexp, "threshold exponent for n2/s2");
  sc_report->add_option("--epsilon", rp_eps, "epsilon for the sK bounds");
  sc_report->add_option("--trunc", rp_trunc, "twin-product truncation prime");
  sc_report->add_option("--threads", threads, "worker threads (0 = all)");
  sc_report->add_option("--out", out, "output path (default stdout)");

  // verify
  auto* sc_verify = app.add_subcommand("verify", "run the acceptance suite");
  sc_verify->add_option("--threads", threads, "worker threads (0 = all)");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sc_constants->parsed()) return run_constants(c_a, c_delta_text, c_tol, c_M, out);
    if (sc_optimize->parsed()) return run_optimize(o_grid_a, o_grid_d, o_tol, o_edge, out);
    if (sc_richert->parsed()) return run_richert(r_K, r_eps, out);
    if (sc_count->parsed())
      return run_count(k_kind, k_N, k_b, k_k, k_aexp, k_K, k_zexp, k_mode, k_eps, k_trunc,
                       threads, out);
    if (sc_audit->parsed()) return run_audit(a_N, a_b, a_k, a_delta, threads, out);
    if (sc_equidist->parsed()) return run_equidist(e_x, e_k, e_Dmax, e_seed, e_tol, threads, out);
    if (sc_bounds->parsed()) return run_bounds(b_kind, b_K, b_N, b_b, b_k, b_eps, b_trunc, out);
    if (sc_report->parsed())
      return run_report(rp_N, rp_b, rp_k, rp_zexp, rp_eps, rp_trunc, threads, out);
    if (sc_verify->parsed()) {
      acceptance::Options opt;
      opt.threads = threads;
      auto results = acceptance::run_all(opt, std::cout);
      return acceptance::all_hard_passed(results) ? 0 : 1;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace sievelab::cli
