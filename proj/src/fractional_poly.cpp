#include "fracls/fractional_poly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracls/errors.hpp"

namespace fracls {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda <= 2.0)) {
    throw InvariantError("fractional polynomial: lambda must lie in (0, 2], got " +
                         std::to_string(lambda));
  }
}

}  // namespace

FractionalPolynomial::FractionalPolynomial(double lambda, std::vector<double> coeffs)
    : lambda_(lambda), coeffs_(std::move(coeffs)) {
  check_lambda(lambda_);
  if (coeffs_.empty()) {
    throw InvariantError("fractional polynomial: coefficient list is empty");
  }
}

double FractionalPolynomial::evaluate(double x) const {
  if (!(x >= 0.0)) {
    throw DomainError("fractional polynomial: cannot evaluate at negative x");
  }
  // Extended-precision Horner: expanded Muntz bases carry large alternating coefficients.
  const long double t = std::pow(static_cast<long double>(x), static_cast<long double>(lambda_));
  long double acc = 0.0L;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * t + *it;
  }
  return static_cast<double>(acc);
}

FractionalPolynomial FractionalPolynomial::times_x_lambda() const {
  std::vector<double> shifted(coeffs_.size() + 1, 0.0);
  std::copy(coeffs_.begin(), coeffs_.end(), shifted.begin() + 1);
  return {lambda_, std::move(shifted)};
}

FractionalPolynomial linear_combine(std::span<const FractionalPolynomial> polys,
                                    std::span<const double> weights) {
  if (polys.size() != weights.size()) {
    throw UsageError("linear_combine: polynomial and weight counts differ");
  }
  if (polys.empty()) {
    throw UsageError("linear_combine: nothing to combine");
  }
  const double lambda = polys.front().lambda();
  std::size_t len = 0;
  for (const auto& p : polys) {
    if (p.lambda() != lambda) {
      throw InvariantError("linear_combine: polynomials have different lambda");
    }
    len = std::max(len, p.coeffs().size());
  }
  std::vector<double> out(len, 0.0);
  for (std::size_t j = 0; j < polys.size(); ++j) {
    const auto c = polys[j].coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
      out[i] += weights[j] * c[i];
    }
  }
  return {lambda, std::move(out)};
}

double jacobi_eval(JacobiParams params, int n, double x) {
  const double a = params.a;
  const double b = params.b;
  if (n < 0) {
    throw DomainError("jacobi_eval: degree must be non-negative");
  }
  if (!(a > -1.0 && b > -1.0)) {
    throw DomainError("jacobi_eval: parameters must exceed -1");
  }
  if (!(x >= -1.0 && x <= 1.0)) {
    throw DomainError("jacobi_eval: argument outside [-1, 1]");
  }
  double p_prev = 1.0;
  if (n == 0) {
    return p_prev;
  }
  double p = 0.5 * ((a - b) + (a + b + 2.0) * x);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * (k + 1) * (k + a + b + 1.0) * s;
    const double c2 = (s + 1.0) * (s * (s + 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a) * (k + b) * (s + 2.0);
    const double p_next = (c2 * p - c3 * p_prev) / c1;
    p_prev = p;
    p = p_next;
  }
  return p;
}

FractionalPolynomial muntz_legendre_coeffs(int n, double lambda) {
  check_lambda(lambda);
  if (n < 0) {
    throw DomainError("muntz_legendre_coeffs: degree must be non-negative");
  }
  if (n > kMuntzLegendreMaxDegree) {
    throw DomainError("muntz_legendre_coeffs: degree " + std::to_string(n) +
                      " exceeds the direct-formula limit of " +
                      std::to_string(kMuntzLegendreMaxDegree));
  }
  const long double lam = lambda;
  std::vector<double> eta(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    // prod_k ((i+k) lambda + 1) / (lambda^n i! (n-i)!), accumulated as a
    // running ratio to keep intermediate magnitudes moderate.
    long double value = 1.0L;
    for (int k = 0; k < n; ++k) {
      value *= ((i + k) * lam + 1.0L) / lam;
    }
    for (int k = 2; k <= i; ++k) value /= k;
    for (int k = 2; k <= n - i; ++k) value /= k;
    eta[static_cast<std::size_t>(i)] =
        static_cast<double>(((n - i) % 2 == 0) ? value : -value);
  }
  return {lambda, std::move(eta)};
}

double muntz_legendre_eval(int n, double lambda, double x) {
  check_lambda(lambda);
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("muntz_legendre_eval: x outside [0, 1]");
  }
  const double t = std::clamp(2.0 * std::pow(x, lambda) - 1.0, -1.0, 1.0);
  return jacobi_eval({0.0, 1.0 / lambda - 1.0}, n, t);
}

std::vector<double> muntz_legendre_values(int n, double lambda, double x) {
  check_lambda(lambda);
  if (n < 0) {
    throw DomainError("muntz_legendre_values: degree must be non-negative");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("muntz_legendre_values: x outside [0, 1]");
  }
  const double a = 0.0;
  const double b = 1.0 / lambda - 1.0;
  const double t = std::clamp(2.0 * std::pow(x, lambda) - 1.0, -1.0, 1.0);
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  out[0] = 1.0;
  if (n == 0) return out;
  out[1] = 0.5 * ((a - b) + (a + b + 2.0) * t);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * (k + 1) * (k + a + b + 1.0) * s;
    const double c2 = (s + 1.0) * (s * (s + 2.0) * t + a * a - b * b);
    const double c3 = 2.0 * (k + a) * (k + b) * (s + 2.0);
    const auto i = static_cast<std::size_t>(k);
    out[i + 1] = (c2 * out[i] - c3 * out[i - 1]) / c1;
  }
  return out;
}

}  // namespace fracls
