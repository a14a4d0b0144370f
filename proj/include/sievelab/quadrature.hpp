#pragma once

#include <functional>
#include <stdexcept>

namespace sievelab {

// Raised when adaptive refinement runs out of recursion budget before the
// requested absolute tolerance is met.
struct tolerance_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Integrand = std::function<double(double)>;

// Adaptive Simpson with interval bisection and the usual (S2-S1)/15
// Richardson correction. |result - true value| <= tol (absolute) for smooth
// integrands; throws tolerance_error once max_depth bisections are exhausted
// on some subinterval.
double adaptive_simpson(const Integrand& f, double a, double b, double tol, int max_depth = 60);

// Composite Gauss-Legendre on `panels` equal subintervals, 16 nodes each.
// No error control; used as the independent cross-check for the adaptive
// scheme.
double gauss_legendre(const Integrand& f, double a, double b, int panels = 32);

// Gauss-Legendre with panel doubling until two successive refinements agree
// within tol. Independent of adaptive_simpson end to end.
double gauss_legendre_auto(const Integrand& f, double a, double b, double tol);

}  // namespace sievelab
