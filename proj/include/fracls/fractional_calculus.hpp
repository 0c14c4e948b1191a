#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fracls/least_squares.hpp"
#include "fracls/quadrature.hpp"

namespace fracls {

struct PowerTerm {
  long double coeff = 0.0L;
  long double exponent = 0.0L;
};

/// Generalized fractional polynomial sum_j c_j x^{nu_j} in extended precision.
/// Terms are kept sorted by exponent; exponents closer than kExponentTolerance merge.
class FracFunction {
 public:
  static constexpr long double kExponentTolerance = 1e-12L;

  FracFunction() = default;
  explicit FracFunction(std::vector<PowerTerm> terms);

  static FracFunction monomial(long double coeff, long double exponent);
  static FracFunction from(const FractionalPolynomial& p);

  const std::vector<PowerTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  long double min_exponent() const;
  long double max_exponent() const;

  long double evaluate(long double x) const;
  double operator()(double x) const { return static_cast<double>(evaluate(x)); }

  FracFunction& operator+=(const FracFunction& other);
  FracFunction& operator*=(long double s);
  friend FracFunction operator+(FracFunction a, const FracFunction& b) { return a += b; }
  friend FracFunction operator*(long double s, FracFunction a) { return a *= s; }

 private:
  void normalize();
  std::vector<PowerTerm> terms_;
};

/// Caputo derivative of order alpha in (0, 1) with lower limit 0, by the power rule.
/// Constant terms vanish. Negative exponents are rejected.
FracFunction caputo_derivative(const FracFunction& p, double alpha);

struct FdeTerm {
  double order = 0.5;
  double coeff = 1.0;
};

/// sum_m coeff_m D^{alpha_m} y + reaction y = f on [0, interval_end], y(0) = initial_value.
struct FdeProblem {
  std::vector<FdeTerm> terms;
  double reaction = 0.0;
  std::variant<FracFunction, std::function<double(double)>> rhs;
  double initial_value = 0.0;
  double interval_end = 1.0;

  void validate() const;
  double eval_rhs(long double x) const;
};

/// Left-hand operator applied to p; f and the initial condition are not included.
FracFunction apply_operator(const FdeProblem& prob, const FracFunction& p);

inline constexpr int kMaxFdeBasisSize = 15;
/// Relative pivot threshold for the rank of the residual system.
inline constexpr double kFdeRankTolerance = 1e-15;

struct FdeSolution {
  FitResult fit;
  /// The approximate solution in extended precision.
  FracFunction solution;
  /// How the residual integral was discretized.
  std::string quadrature;
  int quadrature_points = 0;
  /// Numerical rank of the residual system; below n+1 the minimum-norm minimizer is returned.
  int rank = 0;
};

/// Minimizes E^C(a) = int_0^b R(x; a)^2 dx with
///   R = sum_i a_i (L phi_i)(x) - f(x) + sum_i a_i phi_i(0) - y(0)
/// over y = sum_i a_i phi_i in M_n^lambda. With a FracFunction right-hand side the
/// integral is evaluated exactly by a Gauss-Muntz rule on the common exponent step;
/// otherwise, or when a rule is supplied, by that rule. A basis function whose
/// residual column vanishes identically raises DegeneracyError.
FdeSolution solve_fde(const FdeProblem& prob, double lambda, int n,
                      BasisKind basis = BasisKind::monomial,
                      const std::optional<QuadratureRule>& rule = std::nullopt);

double fde_abs_error(const FitResult& fit, const std::function<double(double)>& exact, double x);
double fde_abs_error(const FdeSolution& sol, const std::function<double(double)>& exact, double x);

}  // namespace fracls
