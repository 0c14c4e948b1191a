#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "fracls/fractional_poly.hpp"
#include "fracls/quadrature.hpp"

namespace fracls {

struct UnitWeight {};
/// (x - lo)^beta_left (hi - x)^beta_right, singular at an endpoint when a beta is negative.
struct JacobiSingularWeight {
  double beta_left = 0.0;
  double beta_right = 0.0;
};
/// Weight values at the points of a discrete basis.
struct TabulatedWeight {
  std::vector<double> values;
};
struct CallableWeight {
  std::function<double(double)> fn;
};

/// The weight W(x) of an inner product, together with its interval.
struct WeightSpec {
  std::variant<UnitWeight, JacobiSingularWeight, TabulatedWeight, CallableWeight> kind;
  double lo = 0.0;
  double hi = 1.0;

  static WeightSpec unit(double lo = 0.0, double hi = 1.0) { return {UnitWeight{}, lo, hi}; }
  static WeightSpec jacobi(double beta_left, double beta_right, double lo = 0.0,
                           double hi = 1.0) {
    return {JacobiSingularWeight{beta_left, beta_right}, lo, hi};
  }
  static WeightSpec callable(std::function<double(double)> fn, double lo = 0.0,
                             double hi = 1.0) {
    return {CallableWeight{std::move(fn)}, lo, hi};
  }
};

enum class BasisMode { continuous, discrete };

/// A discrete measure sum_k weights[k] delta(x - nodes[k]). Continuous inner
/// products are represented by their quadrature rule with W folded into the weights.
struct Measure {
  BasisMode mode = BasisMode::discrete;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Measure realizing int_lo^hi W(x) f(x) g(x) dx with the given rule.
///
/// The rule must cover the weight's interval. A Jacobi weight must be built into
/// the rule (same exponents); a unit or callable weight needs a unit-weight rule.
/// Anything else is a UsageError.
Measure continuous_measure(const WeightSpec& weight, const QuadratureRule& rule);

/// Measure sum_k W(x_k) f(x_k) g(x_k). Points must be distinct and non-negative,
/// weight values strictly positive.
Measure discrete_measure(std::span<const double> weight_values, std::span<const double> points);

double inner_product(const Measure& measure, const std::function<double(double)>& f,
                     const std::function<double(double)>& g);

/// Monic fractional polynomials L_0..L_n in M_n^lambda, orthogonal under a weight,
/// generated by the three-term recurrence
///
///   L_0 = 1,  L_1 = x^lambda - B_1,
///   L_i = (x^lambda - B_i) L_{i-1} - C_i L_{i-2},   i >= 2,
///
/// with B_i = <x^lambda L_{i-1}, L_{i-1}> / <L_{i-1}, L_{i-1}> and
/// C_i = <x^lambda L_{i-1}, L_{i-2}> / <L_{i-2}, L_{i-2}>.
class OrthogonalBasis {
 public:
  double lambda() const noexcept { return lambda_; }
  int degree() const noexcept { return static_cast<int>(polys_.size()) - 1; }
  BasisMode mode() const noexcept { return measure_.mode; }

  std::span<const FractionalPolynomial> polys() const noexcept { return polys_; }
  /// B_1..B_n (index 0 holds B_1).
  std::span<const double> b() const noexcept { return b_; }
  /// C_2..C_n (index 0 holds C_2).
  std::span<const double> c() const noexcept { return c_; }
  std::span<const double> sq_norms() const noexcept { return sq_norms_; }
  const Measure& measure() const noexcept { return measure_; }

  /// L_0(x)..L_n(x) evaluated through the recurrence, which stays accurate
  /// where the expanded coefficients cancel.
  std::vector<double> evaluate_all(double x) const;
  double evaluate(int i, double x) const;

  double inner_product(const std::function<double(double)>& f,
                       const std::function<double(double)>& g) const {
    return fracls::inner_product(measure_, f, g);
  }

  /// Builds the basis for an arbitrary measure. Throws RankDeficiencyError when
  /// the measure has at most n support points and DegeneracyError when a squared
  /// norm collapses.
  static OrthogonalBasis from_measure(Measure measure, double lambda, int n);

  /// Rebuilds a basis from stored recurrence constants. The measure is left empty
  /// apart from its mode, so only evaluation and the coefficient form are usable.
  static OrthogonalBasis from_recurrence(double lambda, BasisMode mode, std::vector<double> b,
                                         std::vector<double> c, std::vector<double> sq_norms);

 private:
  OrthogonalBasis(double lambda, Measure measure) : lambda_(lambda), measure_(std::move(measure)) {}

  double lambda_;
  Measure measure_;
  std::vector<FractionalPolynomial> polys_;
  std::vector<double> b_;
  std::vector<double> c_;
  std::vector<double> sq_norms_;
};

/// Squared norms below this fraction of <x^{i lambda}, x^{i lambda}> abort the recurrence.
inline constexpr double kDegeneracyThreshold = 1e-14;

OrthogonalBasis build_continuous(const WeightSpec& weight, double lambda, int n,
                                 const QuadratureRule& rule);

OrthogonalBasis build_discrete(std::span<const double> weight_values,
                               std::span<const double> points, double lambda, int n);

/// Rule suited to M_n^lambda integrands under the given weight: the substituted
/// Gauss-Muntz rule when the interval starts at 0, plain Gauss-Jacobi otherwise.
QuadratureRule default_rule(const WeightSpec& weight, double lambda, int points = 64);

}  // namespace fracls
