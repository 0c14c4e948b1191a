#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace fracls {

/// Weight (x - lo)^beta_left * (hi - x)^beta_right; both zero means unit weight.
struct JacobiWeight {
  double beta_left = 0.0;
  double beta_right = 0.0;

  bool is_unit() const noexcept { return beta_left == 0.0 && beta_right == 0.0; }
};

/// Nodes and positive weights with
///   sum_k weights[k] f(nodes[k]) ~= int_lo^hi weight(x) f(x) dx.
/// Nodes are strictly increasing and lie inside (lo, hi).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = 0.0;
  double hi = 1.0;
  JacobiWeight weight;

  std::size_t size() const noexcept { return nodes.size(); }
};

inline constexpr int kMaxQuadraturePoints = 256;

/// m-point Gauss-Legendre rule on [lo, hi], exact for polynomials of degree <= 2m-1.
QuadratureRule gauss_legendre(int m, double lo, double hi);

/// m-point Gauss-Jacobi rule for the weight (x-lo)^beta_left (hi-x)^beta_right.
/// Nodes come from the Golub-Welsch eigenproblem, polished by Newton steps on
/// P_m^{(beta_right, beta_left)}; weights use the closed-form derivative formula.
QuadratureRule gauss_jacobi(int m, double beta_left, double beta_right, double lo, double hi);

/// Rule on [0, hi] for integrands built from fractional monomials x^{i lambda}.
///
/// Substitutes x = hi * u^{1/lambda}, so x^{i lambda} becomes a polynomial in u and
/// the Jacobian u^{1/lambda - 1} is absorbed into a Gauss-Jacobi left exponent.
/// Against the weight x^beta_left (hi - x)^beta_right the rule integrates
/// x^{i lambda} exactly for i <= 2m-1 when beta_right == 0; a right-endpoint
/// factor leaves a smooth remainder that converges quickly with m.
/// lambda may be any positive step (it is not restricted to (0, 2]).
QuadratureRule gauss_muntz(int m, double lambda, double hi, double beta_left = 0.0,
                           double beta_right = 0.0);

/// sum_k weights[k] * f(nodes[k]); the weight function is already built into the rule.
/// Throws EvaluationError if f is not finite at some node.
double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);

/// int_lo^hi x^s dx = (hi^{s+1} - lo^{s+1}) / (s+1) for s > -1 and 0 <= lo < hi.
double frac_moment(double lo, double hi, double s);

/// Largest step s such that every exponent is an integer multiple of s, where
/// s = g / q with q <= max_denominator. Returns nullopt when no such q exists
/// (e.g. exponents with incommensurable fractional parts).
std::optional<double> common_exponent_step(std::span<const double> exponents,
                                           int max_denominator = 64);

}  // namespace fracls
