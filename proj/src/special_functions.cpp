#include "fracls/special_functions.hpp"

#include <cmath>
#include <string>

#include "fracls/errors.hpp"

namespace fracls {

namespace {

constexpr int kMittagLefflerMaxTerms = 500;
constexpr long double kMittagLefflerRelTol = 1e-16L;

template <typename T>
T checked_gamma(T x) {
  if (!std::isfinite(x) || x <= 0) {
    throw DomainError("gamma: argument must be finite and positive, got " +
                      std::to_string(static_cast<double>(x)));
  }
  return std::tgamma(x);
}

// z^k / Gamma(alpha k + 1); falls back to logarithms once Gamma overflows.
long double series_term(long double alpha, long double z, int k) {
  const long double g_arg = alpha * k + 1.0L;
  if (g_arg < 1700.0L) {
    return std::pow(z, static_cast<long double>(k)) / std::tgamma(g_arg);
  }
  const long double log_mag = k * std::log(std::fabs(z)) - std::lgamma(g_arg);
  const long double mag = std::exp(log_mag);
  return (z < 0 && (k % 2 == 1)) ? -mag : mag;
}

}  // namespace

double gamma(double x) { return checked_gamma(x); }

long double gamma(long double x) { return checked_gamma(x); }

double mittag_leffler(double alpha, double z) {
  if (!std::isfinite(alpha) || alpha <= 0) {
    throw DomainError("mittag_leffler: alpha must be positive");
  }
  if (!std::isfinite(z)) {
    throw DomainError("mittag_leffler: argument must be finite");
  }
  if (z == 0.0) {
    return 1.0;
  }
  long double sum = 1.0L;
  int small_run = 0;
  for (int k = 1; k < kMittagLefflerMaxTerms; ++k) {
    const long double term = series_term(alpha, z, k);
    sum += term;
    // Two consecutive negligible terms: the tail is past its peak.
    if (std::fabs(term) <= kMittagLefflerRelTol * std::fabs(sum)) {
      if (++small_run == 2) {
        return static_cast<double>(sum);
      }
    } else {
      small_run = 0;
    }
  }
  throw ConvergenceError("mittag_leffler: series did not converge within " +
                         std::to_string(kMittagLefflerMaxTerms) + " terms");
}

}  // namespace fracls
