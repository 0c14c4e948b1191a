#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "fracls/fractional_poly.hpp"
#include "fracls/orthogonal_basis.hpp"
#include "fracls/quadrature.hpp"

namespace fracls {

/// Sampled data (x_k, y_k) with optional positive weights W(x_k).
struct DataSet {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> weights;  // empty means all ones

  std::size_t size() const noexcept { return xs.size(); }
  double weight(std::size_t k) const { return weights.empty() ? 1.0 : weights[k]; }
  /// Throws DomainError/UsageError when the invariants do not hold.
  void validate() const;
};

enum class BasisKind { monomial, muntz_legendre, orthogonal };

const char* to_string(BasisKind kind) noexcept;

struct FitResult {
  BasisKind basis = BasisKind::monomial;
  double lambda = 1.0;
  /// Coefficients in the basis named by `basis`.
  std::vector<double> coeffs;
  /// E^C or E^D of the fit, always >= 0.
  double error = 0.0;
  /// Condition estimate of the solved system; 1 for projection fits.
  double cond = 1.0;
  /// The same fit written in the fractional monomial basis.
  FractionalPolynomial expansion{1.0, {0.0}};
  /// Present for orthogonal-basis fits; prediction then goes through the recurrence.
  std::shared_ptr<const OrthogonalBasis> orthogonal;
  double lo = 0.0;
  double hi = 1.0;

  double predict(double x) const;
};

/// Continuous least squares in M_n^lambda on [lo, hi] by normal equations.
///
/// The rule defines the weight: a unit rule gives the plain E^C, a Jacobi rule
/// fits under that weight. With the monomial basis and a unit rule the matrix
/// entries are the exact moments int x^{(i+j) lambda} dx; otherwise they are
/// integrated with the rule. The right-hand side and the error always use the rule.
FitResult fit_continuous_normal(const std::function<double(double)>& y, double lo, double hi,
                                double lambda, int n, const QuadratureRule& rule,
                                BasisKind basis = BasisKind::monomial);

/// Discrete (weighted) least squares over the data by normal equations.
/// At lambda = 1 this is the classical polynomial least-squares fit.
FitResult fit_discrete_normal(const DataSet& data, double lambda, int n,
                              BasisKind basis = BasisKind::monomial);

/// a_i = <y, L_i>_W / <L_i, L_i>_W against a continuous orthogonal basis; no linear solve.
FitResult fit_projection(const std::function<double(double)>& y,
                         std::shared_ptr<const OrthogonalBasis> basis);

/// Discrete projection; the data abscissae must be the basis points.
FitResult fit_projection(const DataSet& data, std::shared_ptr<const OrthogonalBasis> basis);

inline double predict(const FitResult& fit, double x) { return fit.predict(x); }

enum class NoiseModel {
  relative,  // sd = percent/100 * |y_k|
  absolute,  // sd = percent/100
};

/// y_k + N(0, sd_k^2), deterministic for a given seed.
DataSet add_noise(const DataSet& data, double percent, std::uint64_t seed,
                  NoiseModel model = NoiseModel::relative);

inline constexpr int kMaxContinuousBasisSize = 20;

/// Normal matrices whose condition estimate exceeds this are refused.
inline constexpr double kMaxCondition = 1e15;

}  // namespace fracls
