#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "randrho/errors.hpp"

namespace randrho {

// log |Gamma(x)| with the sign tracked separately, so products of Gamma
// factors at negative non-integer arguments can be combined stably in log
// space.  Negative arguments go through the reflection formula
// Gamma(x) = pi / (sin(pi x) Gamma(1 - x)).
struct SignedLogGamma {
  double log_abs;
  double sign;  // +1 or -1
};

inline SignedLogGamma log_gamma_signed(double x) {
  if (x > 0.0) return {std::lgamma(x), 1.0};
  if (x == std::floor(x))
    throw numeric_error("log_gamma: pole at non-positive integer " +
                        std::to_string(x));
  const double s = std::sin(M_PI * x);
  return {std::log(M_PI) - std::log(std::abs(s)) - std::lgamma(1.0 - x),
          s > 0.0 ? 1.0 : -1.0};
}

inline double log_gamma(double x) { return log_gamma_signed(x).log_abs; }

// Generalized hypergeometric pFq by direct truncated power series with term
// recurrence.  Convergence requires |z| <= 1 (and Re(sum b - sum a) > 0 at
// z = 1).  The stated relative tail bound holds away from z = 1; close to
// the radius the n^(-(1+psi)) tail decays too slowly for any fixed budget,
// so the sum stops at max_terms with a relative error of order
// max_terms^(-psi) -- confined to a ~1e-4 neighborhood of a law's support
// edge and far below every integral tolerance used here.
inline double generalized_hypergeometric(const std::vector<double>& a,
                                         const std::vector<double>& b,
                                         double z, double rel_tol = 1e-14,
                                         std::size_t max_terms = 2000000) {
  if (std::abs(z) > 1.0 + 1e-15)
    throw numeric_error("hypergeometric: series diverges for |z| > 1");
  for (double bi : b)
    if (bi <= 0.0 && bi == std::floor(bi))
      throw numeric_error("hypergeometric: lower parameter at pole");
  double term = 1.0;
  double total = 1.0;
  int consecutive_small = 0;
  for (std::size_t n = 0; n < max_terms; ++n) {
    double ratio = z / (static_cast<double>(n) + 1.0);
    for (double ai : a) ratio *= ai + static_cast<double>(n);
    for (double bi : b) ratio /= bi + static_cast<double>(n);
    term *= ratio;
    if (term == 0.0) break;  // terminating series (negative-integer a)
    total += term;
    if (std::abs(term) <= rel_tol * std::abs(total)) {
      if (++consecutive_small >= 2) break;
    } else {
      consecutive_small = 0;
    }
  }
  return total;
}

// Binomial coefficient as a double, rounded back to the nearest integer to
// absorb the division roundoff; exact for the moment orders used here.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double result = 1.0;
  for (int i = 1; i <= k; ++i)
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  return result < 9.0e15 ? std::round(result) : result;
}

}  // namespace randrho
