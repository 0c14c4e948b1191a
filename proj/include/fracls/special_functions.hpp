#pragma once

namespace fracls {

/// Gamma function for x > 0. Throws DomainError for non-positive or non-finite x.
double gamma(double x);
long double gamma(long double x);

/// One-parameter Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(alpha k + 1).
///
/// Summed as a truncated power series: stops once a term falls below
/// 1e-16 of the partial sum, and throws ConvergenceError after 500 terms.
/// Intended for moderate arguments (|z| <= 50); the alternating series for
/// large negative z loses accuracy to cancellation.
double mittag_leffler(double alpha, double z);

}  // namespace fracls
