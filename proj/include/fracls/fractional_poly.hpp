#pragma once

#include <span>
#include <vector>

namespace fracls {

/// A member of the Muntz space M_n^lambda = span{1, x^lambda, ..., x^{n lambda}},
/// stored by its coefficients in the fractional monomial basis:
///
///   P(x) = sum_i coeffs[i] * x^{i lambda},   x >= 0.
///
/// lambda must lie in (0, 2] and the coefficient list must be non-empty.
class FractionalPolynomial {
 public:
  FractionalPolynomial(double lambda, std::vector<double> coeffs);

  double lambda() const noexcept { return lambda_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double coeff(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  /// P(x) by Horner's scheme in t = x^lambda; 0^0 is taken as 1.
  double evaluate(double x) const;
  double operator()(double x) const { return evaluate(x); }

  /// x^lambda * P(x): the coefficient list shifted up by one index.
  FractionalPolynomial times_x_lambda() const;

 private:
  double lambda_;
  std::vector<double> coeffs_;
};

/// Coefficient-wise sum_j weights[j] * polys[j], padded to the largest degree.
/// All inputs must share the same lambda (InvariantError otherwise).
FractionalPolynomial linear_combine(std::span<const FractionalPolynomial> polys,
                                    std::span<const double> weights);

struct JacobiParams {
  double a;
  double b;
};

/// Classical Jacobi polynomial P_n^{(a,b)}(x) on [-1, 1] via its three-term recurrence.
double jacobi_eval(JacobiParams params, int n, double x);

/// Muntz-Legendre polynomial L_n(.; lambda) in coefficient form.
///
/// Uses the closed-form coefficients
///   eta_{n,i} = (-1)^{n-i} / (lambda^n i! (n-i)!) * prod_{k<n} ((i+k) lambda + 1),
/// which cancel badly for large n; limited to n <= 30.
FractionalPolynomial muntz_legendre_coeffs(int n, double lambda);

/// L_n(x; lambda) = P_n^{(0, 1/lambda - 1)}(2 x^lambda - 1), stable for x near 1.
double muntz_legendre_eval(int n, double lambda, double x);

/// L_0(x), ..., L_n(x) in one pass of the Jacobi recurrence.
std::vector<double> muntz_legendre_values(int n, double lambda, double x);

inline constexpr int kMuntzLegendreMaxDegree = 30;

}  // namespace fracls
