#include "fracls/least_squares.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <string>

#include "fracls/errors.hpp"

namespace fracls {

namespace {

// phi_0(x)..phi_n(x) for the monomial or Muntz-Legendre basis.
std::vector<double> basis_values(BasisKind kind, double lambda, int n, double x) {
  if (kind == BasisKind::muntz_legendre) {
    return muntz_legendre_values(n, lambda, x);
  }
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  const double t = std::pow(x, lambda);
  double p = 1.0;
  for (auto& e : v) {
    e = p;
    p *= t;
  }
  return v;
}

// Same, but through std::pow per entry so lambda = 1 reproduces x^{i+j} sums bit for bit.
double monomial(double x, double exponent) { return std::pow(x, exponent); }

FractionalPolynomial expand(BasisKind kind, double lambda, const std::vector<double>& coeffs) {
  if (kind == BasisKind::monomial) {
    return {lambda, coeffs};
  }
  const int n = static_cast<int>(coeffs.size()) - 1;
  std::vector<FractionalPolynomial> polys;
  polys.reserve(coeffs.size());
  for (int i = 0; i <= n; ++i) polys.push_back(muntz_legendre_coeffs(i, lambda));
  return linear_combine(polys, coeffs);
}

struct Solved {
  std::vector<double> x;
  double cond;
};

Solved solve_normal(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(lo > 0.0) || cond > kMaxCondition) {
    throw ConditioningError("normal equations are singular or too ill-conditioned (cond ~ " +
                                std::to_string(cond) + ")",
                            cond);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success) {
    throw ConditioningError("normal equations: LDLT factorization failed", cond);
  }
  Eigen::VectorXd sol = ldlt.solve(rhs);
  // One step of iterative refinement.
  sol += ldlt.solve(rhs - a * sol);
  return {std::vector<double>(sol.data(), sol.data() + sol.size()), cond};
}

void check_degree(int n) {
  if (n < 0) throw DomainError("least squares: degree must be non-negative");
}

}  // namespace

const char* to_string(BasisKind kind) noexcept {
  switch (kind) {
    case BasisKind::monomial:
      return "monomial";
    case BasisKind::muntz_legendre:
      return "muntz_legendre";
    case BasisKind::orthogonal:
      return "orthogonal";
  }
  return "unknown";
}

void DataSet::validate() const {
  if (xs.size() != ys.size()) {
    throw UsageError("data set: x and y columns differ in length");
  }
  if (xs.empty()) {
    throw UsageError("data set: no rows");
  }
  if (!weights.empty() && weights.size() != xs.size()) {
    throw UsageError("data set: weight column length differs");
  }
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!(xs[k] >= 0.0) || !std::isfinite(xs[k])) {
      throw DomainError("data set: x values must be finite and non-negative");
    }
    if (!std::isfinite(ys[k])) {
      throw DomainError("data set: y values must be finite");
    }
    if (!weights.empty() && !(weights[k] > 0.0)) {
      throw DomainError("data set: weights must be positive");
    }
  }
}

double FitResult::predict(double x) const {
  if (orthogonal) {
    const auto v = orthogonal->evaluate_all(x);
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * v[i];
    return s;
  }
  if (basis == BasisKind::muntz_legendre && x >= 0.0 && x <= 1.0) {
    const auto v = muntz_legendre_values(static_cast<int>(coeffs.size()) - 1, lambda, x);
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * v[i];
    return s;
  }
  return expansion.evaluate(x);
}

FitResult fit_continuous_normal(const std::function<double(double)>& y, double lo, double hi,
                                double lambda, int n, const QuadratureRule& rule,
                                BasisKind basis) {
  check_degree(n);
  if (n + 1 > kMaxContinuousBasisSize) {
    throw DomainError("fit_continuous_normal: at most " + std::to_string(kMaxContinuousBasisSize) +
                      " basis functions");
  }
  if (basis == BasisKind::orthogonal) {
    throw UsageError("fit_continuous_normal: use fit_projection for orthogonal bases");
  }
  if (!(lo >= 0.0 && lo < hi)) {
    throw DomainError("fit_continuous_normal: interval must satisfy 0 <= lo < hi");
  }
  if (std::fabs(rule.lo - lo) > 1e-12 * std::max(1.0, hi) ||
      std::fabs(rule.hi - hi) > 1e-12 * std::max(1.0, hi)) {
    throw UsageError("fit_continuous_normal: rule interval does not match [lo, hi]");
  }
  if (basis == BasisKind::muntz_legendre && (lo != 0.0 || hi != 1.0)) {
    throw UsageError("fit_continuous_normal: the Muntz-Legendre basis lives on [0, 1]");
  }
  const int size = n + 1;
  const std::size_t m = rule.size();
  std::vector<double> yv(m);
  std::vector<std::vector<double>> phi(m);
  for (std::size_t k = 0; k < m; ++k) {
    yv[k] = y(rule.nodes[k]);
    if (!std::isfinite(yv[k])) {
      throw EvaluationError("fit_continuous_normal: y is not finite at a quadrature node");
    }
    phi[k] = basis_values(basis, lambda, n, rule.nodes[k]);
  }

  Eigen::MatrixXd a(size, size);
  Eigen::VectorXd d(size);
  const bool exact_moments = basis == BasisKind::monomial && rule.weight.is_unit();
  for (int i = 0; i < size; ++i) {
    double di = 0.0;
    for (std::size_t k = 0; k < m; ++k) di += rule.weights[k] * yv[k] * phi[k][i];
    d(i) = di;
    for (int j = 0; j <= i; ++j) {
      double aij = 0.0;
      if (exact_moments) {
        aij = frac_moment(lo, hi, (i + j) * lambda);
      } else {
        for (std::size_t k = 0; k < m; ++k) aij += rule.weights[k] * phi[k][i] * phi[k][j];
      }
      a(i, j) = a(j, i) = aij;
    }
  }
  Solved s = solve_normal(a, d);

  FitResult fit;
  fit.basis = basis;
  fit.lambda = lambda;
  fit.coeffs = std::move(s.x);
  fit.cond = s.cond;
  fit.expansion = expand(basis, lambda, fit.coeffs);
  fit.lo = lo;
  fit.hi = hi;
  double err = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double p = 0.0;
    for (int i = 0; i < size; ++i) p += fit.coeffs[static_cast<std::size_t>(i)] * phi[k][i];
    const double r = yv[k] - p;
    err += rule.weights[k] * r * r;
  }
  fit.error = err;
  return fit;
}

FitResult fit_discrete_normal(const DataSet& data, double lambda, int n, BasisKind basis) {
  check_degree(n);
  data.validate();
  if (basis == BasisKind::orthogonal) {
    throw UsageError("fit_discrete_normal: use fit_projection for orthogonal bases");
  }
  if (data.size() < static_cast<std::size_t>(n) + 1) {
    throw RankDeficiencyError("fit_discrete_normal: " + std::to_string(data.size()) +
                              " points cannot determine " + std::to_string(n + 1) +
                              " coefficients");
  }
  // Validates lambda before any arithmetic.
  FractionalPolynomial probe(lambda, {0.0});
  const int size = n + 1;
  const std::size_t m = data.size();

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(size);
  std::vector<std::vector<double>> phi(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double x = data.xs[k];
    const double w = data.weight(k);
    if (basis == BasisKind::monomial) {
      for (int i = 0; i < size; ++i) {
        d(i) += w * data.ys[k] * monomial(x, i * lambda);
        for (int j = 0; j <= i; ++j) a(i, j) += w * monomial(x, (i + j) * lambda);
      }
      phi[k] = basis_values(basis, lambda, n, x);
    } else {
      if (x > 1.0) {
        throw DomainError("fit_discrete_normal: Muntz-Legendre basis needs x in [0, 1]");
      }
      phi[k] = basis_values(basis, lambda, n, x);
      for (int i = 0; i < size; ++i) {
        d(i) += w * data.ys[k] * phi[k][i];
        for (int j = 0; j <= i; ++j) a(i, j) += w * phi[k][i] * phi[k][j];
      }
    }
  }
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < i; ++j) a(j, i) = a(i, j);

  Solved s = solve_normal(a, d);
  FitResult fit;
  fit.basis = basis;
  fit.lambda = lambda;
  fit.coeffs = std::move(s.x);
  fit.cond = s.cond;
  fit.expansion = expand(basis, lambda, fit.coeffs);
  fit.lo = *std::min_element(data.xs.begin(), data.xs.end());
  fit.hi = *std::max_element(data.xs.begin(), data.xs.end());
  double err = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double p = 0.0;
    for (int i = 0; i < size; ++i) p += fit.coeffs[static_cast<std::size_t>(i)] * phi[k][i];
    const double r = data.ys[k] - p;
    err += data.weight(k) * r * r;
  }
  fit.error = err;
  return fit;
}

namespace {

FitResult project(const std::vector<double>& yv, std::shared_ptr<const OrthogonalBasis> basis) {
  const Measure& mu = basis->measure();
  const int n = basis->degree();
  std::vector<std::vector<double>> values(mu.nodes.size());
  for (std::size_t k = 0; k < mu.nodes.size(); ++k) values[k] = basis->evaluate_all(mu.nodes[k]);

  FitResult fit;
  fit.basis = BasisKind::orthogonal;
  fit.lambda = basis->lambda();
  fit.coeffs.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    double num = 0.0;
    for (std::size_t k = 0; k < mu.nodes.size(); ++k) num += mu.weights[k] * yv[k] * values[k][i];
    fit.coeffs[static_cast<std::size_t>(i)] = num / basis->sq_norms()[static_cast<std::size_t>(i)];
  }
  double err = 0.0;
  for (std::size_t k = 0; k < mu.nodes.size(); ++k) {
    double p = 0.0;
    for (int i = 0; i <= n; ++i) p += fit.coeffs[static_cast<std::size_t>(i)] * values[k][i];
    err += mu.weights[k] * (yv[k] - p) * (yv[k] - p);
  }
  fit.error = err;
  fit.cond = 1.0;
  fit.expansion = linear_combine(basis->polys(), fit.coeffs);
  if (!mu.nodes.empty()) {
    fit.lo = *std::min_element(mu.nodes.begin(), mu.nodes.end());
    fit.hi = *std::max_element(mu.nodes.begin(), mu.nodes.end());
  }
  fit.orthogonal = std::move(basis);
  return fit;
}

}  // namespace

FitResult fit_projection(const std::function<double(double)>& y,
                         std::shared_ptr<const OrthogonalBasis> basis) {
  if (!basis) throw UsageError("fit_projection: no basis");
  if (basis->mode() != BasisMode::continuous) {
    throw UsageError("fit_projection: a function target needs a continuous basis");
  }
  const Measure& mu = basis->measure();
  std::vector<double> yv(mu.nodes.size());
  for (std::size_t k = 0; k < yv.size(); ++k) {
    yv[k] = y(mu.nodes[k]);
    if (!std::isfinite(yv[k])) {
      throw EvaluationError("fit_projection: y is not finite at a quadrature node");
    }
  }
  return project(yv, std::move(basis));
}

FitResult fit_projection(const DataSet& data, std::shared_ptr<const OrthogonalBasis> basis) {
  if (!basis) throw UsageError("fit_projection: no basis");
  data.validate();
  if (basis->mode() != BasisMode::discrete) {
    throw UsageError("fit_projection: a data set needs a discrete basis");
  }
  const Measure& mu = basis->measure();
  if (mu.nodes.size() != data.size()) {
    throw UsageError("fit_projection: data abscissae differ from the basis points");
  }
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (mu.nodes[k] != data.xs[k]) {
      throw UsageError("fit_projection: data abscissae differ from the basis points");
    }
  }
  return project(data.ys, std::move(basis));
}

DataSet add_noise(const DataSet& data, double percent, std::uint64_t seed, NoiseModel model) {
  if (!(percent >= 0.0)) {
    throw DomainError("add_noise: percent must be non-negative");
  }
  DataSet out = data;
  if (percent == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& y : out.ys) {
    const double sd = (percent / 100.0) * (model == NoiseModel::relative ? std::fabs(y) : 1.0);
    y += normal(rng) * sd;
  }
  return out;
}

}  // namespace fracls
