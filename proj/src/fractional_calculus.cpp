#include "fracls/fractional_calculus.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracls/errors.hpp"
#include "fracls/special_functions.hpp"

namespace fracls {

using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

FracFunction::FracFunction(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {
  normalize();
}

FracFunction FracFunction::monomial(long double coeff, long double exponent) {
  return FracFunction({{coeff, exponent}});
}

FracFunction FracFunction::from(const FractionalPolynomial& p) {
  std::vector<PowerTerm> terms;
  for (int i = 0; i <= p.degree(); ++i) {
    terms.push_back({p.coeff(i), static_cast<long double>(i) * p.lambda()});
  }
  return FracFunction(std::move(terms));
}

void FracFunction::normalize() {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coeff) || !std::isfinite(t.exponent)) {
      throw InvariantError("FracFunction: non-finite term");
    }
    if (!(t.exponent > -1.0L)) {
      throw InvariantError("FracFunction: exponents must exceed -1");
    }
  }
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
  std::vector<PowerTerm> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && std::fabs(merged.back().exponent - t.exponent) <= kExponentTolerance) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const PowerTerm& t) { return t.coeff == 0.0L; });
  terms_ = std::move(merged);
}

long double FracFunction::min_exponent() const {
  if (terms_.empty()) throw UsageError("FracFunction: empty function has no exponents");
  return terms_.front().exponent;
}

long double FracFunction::max_exponent() const {
  if (terms_.empty()) throw UsageError("FracFunction: empty function has no exponents");
  return terms_.back().exponent;
}

long double FracFunction::evaluate(long double x) const {
  if (x < 0.0L) throw DomainError("FracFunction: x must be non-negative");
  long double s = 0.0L;
  for (const auto& t : terms_) {
    if (t.exponent == 0.0L) {
      s += t.coeff;
    } else {
      s += t.coeff * std::pow(x, t.exponent);
    }
  }
  return s;
}

FracFunction& FracFunction::operator+=(const FracFunction& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  normalize();
  return *this;
}

FracFunction& FracFunction::operator*=(long double s) {
  for (auto& t : terms_) t.coeff *= s;
  normalize();
  return *this;
}

FracFunction caputo_derivative(const FracFunction& p, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("caputo_derivative: order must lie in (0, 1)");
  }
  const long double a = alpha;
  std::vector<PowerTerm> out;
  for (const auto& t : p.terms()) {
    if (std::fabs(t.exponent) <= FracFunction::kExponentTolerance) continue;
    if (t.exponent < 0.0L) {
      throw DomainError("caputo_derivative: negative exponents are not supported");
    }
    const long double ratio = gamma(t.exponent + 1.0L) / gamma(t.exponent + 1.0L - a);
    out.push_back({t.coeff * ratio, t.exponent - a});
  }
  return FracFunction(std::move(out));
}

void FdeProblem::validate() const {
  for (const auto& t : terms) {
    if (!(t.order > 0.0 && t.order < 1.0)) {
      throw DomainError("FdeProblem: derivative orders must lie in (0, 1)");
    }
    if (!std::isfinite(t.coeff)) throw DomainError("FdeProblem: non-finite coefficient");
  }
  if (!std::isfinite(reaction) || !std::isfinite(initial_value)) {
    throw DomainError("FdeProblem: non-finite reaction or initial value");
  }
  if (!(interval_end > 0.0) || !std::isfinite(interval_end)) {
    throw DomainError("FdeProblem: interval [0, b] needs b > 0");
  }
  if (const auto* fn = std::get_if<std::function<double(double)>>(&rhs); fn && !*fn) {
    throw UsageError("FdeProblem: empty right-hand side");
  }
}

double FdeProblem::eval_rhs(long double x) const {
  if (const auto* f = std::get_if<FracFunction>(&rhs)) {
    return static_cast<double>(f->evaluate(x));
  }
  return std::get<std::function<double(double)>>(rhs)(static_cast<double>(x));
}

FracFunction apply_operator(const FdeProblem& prob, const FracFunction& p) {
  FracFunction out;
  for (const auto& t : prob.terms) {
    out += static_cast<long double>(t.coeff) * caputo_derivative(p, t.order);
  }
  if (prob.reaction != 0.0) {
    out += static_cast<long double>(prob.reaction) * p;
  }
  return out;
}

namespace {

struct ResidualRule {
  QuadratureRule rule;
  std::string description;
};

// Exact rule for sums of products of the given exponents, when a common step exists.
std::optional<ResidualRule> exact_rule(const std::vector<double>& exponents, double b) {
  const auto step = common_exponent_step(exponents);
  if (!step) return std::nullopt;
  const double lo = *std::min_element(exponents.begin(), exponents.end());
  const double hi = *std::max_element(exponents.begin(), exponents.end());
  const double beta_left = 2.0 * std::min(0.0, lo);
  const double degree = std::round((2.0 * hi - beta_left) / *step);
  const int m = static_cast<int>(std::ceil((degree + 1.0) / 2.0)) + 1;
  if (m > kMaxQuadraturePoints) return std::nullopt;
  std::ostringstream os;
  os << "gauss-muntz step=" << *step << " points=" << m << " beta_left=" << beta_left << " (exact)";
  return ResidualRule{gauss_muntz(m, *step, b, beta_left, 0.0), os.str()};
}

ResidualRule fallback_rule(double min_exponent, double b) {
  const double beta_left = 2.0 * std::min(0.0, min_exponent);
  std::ostringstream os;
  os << "gauss-jacobi points=128 beta_left=" << beta_left;
  return {gauss_jacobi(128, beta_left, 0.0, 0.0, b), os.str()};
}

// 1 / sqrt of the rule's weight function at x.
long double inv_sqrt_weight(const QuadratureRule& rule, long double x) {
  long double w = 1.0L;
  if (rule.weight.beta_left != 0.0) w *= std::pow(x - rule.lo, static_cast<long double>(rule.weight.beta_left));
  if (rule.weight.beta_right != 0.0) w *= std::pow(rule.hi - x, static_cast<long double>(rule.weight.beta_right));
  return 1.0L / std::sqrt(w);
}

}  // namespace

FdeSolution solve_fde(const FdeProblem& prob, double lambda, int n, BasisKind basis,
                      const std::optional<QuadratureRule>& rule) {
  prob.validate();
  if (n < 0 || n + 1 > kMaxFdeBasisSize) {
    throw DomainError("solve_fde: basis size n+1 must lie in [1, " +
                      std::to_string(kMaxFdeBasisSize) + "]");
  }
  if (basis == BasisKind::orthogonal) {
    throw UsageError("solve_fde: basis must be monomial or muntz_legendre");
  }
  const double b = prob.interval_end;
  if (basis == BasisKind::muntz_legendre && b != 1.0) {
    throw UsageError("solve_fde: the Muntz-Legendre basis lives on [0, 1]");
  }
  const int size = n + 1;

  std::vector<FracFunction> phi;
  phi.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    if (basis == BasisKind::monomial) {
      phi.push_back(FracFunction::monomial(1.0L, static_cast<long double>(i) * lambda));
    } else {
      phi.push_back(FracFunction::from(muntz_legendre_coeffs(i, lambda)));
    }
  }
  // Validates lambda.
  FractionalPolynomial probe(lambda, {0.0});

  std::vector<FracFunction> columns;
  std::vector<long double> at_zero;
  std::vector<double> exponents{0.0};
  for (const auto& p : phi) {
    columns.push_back(apply_operator(prob, p));
    at_zero.push_back(p.evaluate(0.0L));
    for (const auto& t : columns.back().terms()) exponents.push_back(static_cast<double>(t.exponent));
  }
  const auto* f_exact = std::get_if<FracFunction>(&prob.rhs);
  if (f_exact) {
    for (const auto& t : f_exact->terms()) exponents.push_back(static_cast<double>(t.exponent));
  }
  const double min_exp = *std::min_element(exponents.begin(), exponents.end());
  if (!(min_exp > -0.5)) {
    throw DomainError("solve_fde: residual is not square integrable (exponent " +
                      std::to_string(min_exp) + ")");
  }

  ResidualRule rr;
  if (rule) {
    if (rule->lo != 0.0 || std::fabs(rule->hi - b) > 1e-12 * std::max(1.0, b)) {
      throw UsageError("solve_fde: rule must cover [0, b]");
    }
    rr = {*rule, "user rule points=" + std::to_string(rule->size())};
  } else if (auto exact = f_exact ? exact_rule(exponents, b) : std::nullopt) {
    rr = std::move(*exact);
  } else {
    rr = fallback_rule(min_exp, b);
  }
  const QuadratureRule& q = rr.rule;
  const std::size_t m = q.size();

  // Rows are sqrt(w_k) * R_k / sqrt(weight(x_k)), so ||M a - r||^2 = E^C(a).
  MatrixL mat(static_cast<Eigen::Index>(m), size);
  VectorL rhs(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const long double x = q.nodes[k];
    const long double s = std::sqrt(static_cast<long double>(q.weights[k])) * inv_sqrt_weight(q, x);
    for (int i = 0; i < size; ++i) {
      mat(static_cast<Eigen::Index>(k), i) = s * (columns[static_cast<std::size_t>(i)].evaluate(x) +
                                                  at_zero[static_cast<std::size_t>(i)]);
    }
    const long double fx = f_exact ? f_exact->evaluate(x) : prob.eval_rhs(x);
    if (!std::isfinite(fx)) {
      throw EvaluationError("solve_fde: right-hand side is not finite at a quadrature node");
    }
    rhs(static_cast<Eigen::Index>(k)) = s * (fx + prob.initial_value);
  }

  for (int i = 0; i < size; ++i) {
    if (mat.col(i).squaredNorm() == 0.0L) {
      throw DegeneracyError("solve_fde: basis function " + std::to_string(i) +
                                " is annihilated by the operator and not pinned by y(0)",
                            i);
    }
  }
  // Minimum-norm minimizer; the residual can be blind to some directions, e.g. a
  // constant and x^alpha both contribute only constants to R.
  Eigen::CompleteOrthogonalDecomposition<MatrixL> cod;
  cod.setThreshold(kFdeRankTolerance);
  cod.compute(mat);
  VectorL a = cod.solve(rhs);
  for (int step = 0; step < 2; ++step) {
    a += cod.solve(VectorL(rhs - mat * a));
  }
  const VectorL sv = Eigen::JacobiSVD<MatrixL>(mat).singularValues();
  const long double smin = sv(sv.size() - 1);
  const long double cond_normal = smin > 0.0L ? (sv(0) / smin) * (sv(0) / smin)
                                              : std::numeric_limits<long double>::infinity();
  const long double err = (mat * a - rhs).squaredNorm();

  FdeSolution out;
  FitResult& fit = out.fit;
  fit.basis = basis;
  fit.lambda = lambda;
  fit.coeffs.resize(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    fit.coeffs[static_cast<std::size_t>(i)] = static_cast<double>(a(i));
    out.solution += a(i) * phi[static_cast<std::size_t>(i)];
  }
  fit.error = static_cast<double>(err);
  fit.cond = static_cast<double>(cond_normal);
  fit.lo = 0.0;
  fit.hi = b;
  std::vector<double> mono(static_cast<std::size_t>(size), 0.0);
  for (const auto& t : out.solution.terms()) {
    const long double idx = t.exponent / lambda;
    const long double r = std::round(idx);
    if (std::fabs(idx - r) < 1e-9L && r >= 0.0L && r < size) {
      mono[static_cast<std::size_t>(r)] += static_cast<double>(t.coeff);
    }
  }
  fit.expansion = FractionalPolynomial(lambda, std::move(mono));
  out.quadrature = std::move(rr.description);
  out.quadrature_points = static_cast<int>(m);
  out.rank = static_cast<int>(cod.rank());
  return out;
}

double fde_abs_error(const FitResult& fit, const std::function<double(double)>& exact, double x) {
  return std::fabs(exact(x) - fit.predict(x));
}

double fde_abs_error(const FdeSolution& sol, const std::function<double(double)>& exact, double x) {
  return static_cast<double>(std::fabs(static_cast<long double>(exact(x)) - sol.solution.evaluate(x)));
}

}  // namespace fracls
