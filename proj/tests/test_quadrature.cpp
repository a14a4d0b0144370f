#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sievelab/quadrature.hpp"

using namespace sievelab;

TEST_CASE("adaptive Simpson reproduces closed-form integrals") {
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-11));
  CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return 1.0 / x; }, 1.0, std::exp(1.0), 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("empty or inverted interval integrates to zero") {
  CHECK(adaptive_simpson([](double) { return 1.0; }, 2.0, 2.0, 1e-10) == 0.0);
  CHECK(adaptive_simpson([](double) { return 1.0; }, 3.0, 2.0, 1e-10) == 0.0);
  CHECK(gauss_legendre_auto([](double) { return 1.0; }, 2.0, 2.0, 1e-10) == 0.0);
}

TEST_CASE("exhausted recursion budget raises tolerance_error") {
  CHECK_THROWS_AS(
      adaptive_simpson([](double x) { return std::sin(50.0 * x); }, 0.0, 10.0, 1e-14, 3),
      tolerance_error);
}

TEST_CASE("invalid tolerance is a domain error") {
  CHECK_THROWS_AS(adaptive_simpson([](double) { return 1.0; }, 0.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(gauss_legendre_auto([](double) { return 1.0; }, 0.0, 1.0, -1.0),
                  std::domain_error);
}

TEST_CASE("the two schemes agree within 10x tolerance on the working integrands") {
  auto sieve_integrand = [](double t) {
    if (t >= 1.0 / 3.0) return 0.0;
    return std::log(2.0 - 3.0 * t) / (t * (1.0 - t));
  };
  const double tol = 1e-10;
  for (double delta = 0.05; delta < 1.0 / 3.0; delta += 0.02) {
    double s = adaptive_simpson(sieve_integrand, delta, 1.0 / 3.0, tol);
    double g = gauss_legendre_auto(sieve_integrand, delta, 1.0 / 3.0, tol);
    CHECK(std::fabs(s - g) <= 10.0 * tol);
  }
  auto li_integrand = [](double t) { return 1.0 / std::log(t); };
  double s = adaptive_simpson(li_integrand, 2.0, 1e4, 1e-8);
  double g = gauss_legendre_auto(li_integrand, 2.0, 1e4, 1e-8);
  CHECK(std::fabs(s - g) <= 1e-7);
}
