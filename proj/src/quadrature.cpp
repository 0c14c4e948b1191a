#include "fracls/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fracls/errors.hpp"

namespace fracls {

namespace {

// P_m^{(a,b)}(t) and its derivative, by the standard three-term recurrence.
struct JacobiValue {
  double value;
  double derivative;
};

double jacobi_value(int m, double a, double b, double t) {
  double p_prev = 1.0;
  if (m == 0) return p_prev;
  double p = 0.5 * ((a - b) + (a + b + 2.0) * t);
  for (int k = 1; k < m; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * (k + 1) * (k + a + b + 1.0) * s;
    const double c2 = (s + 1.0) * (s * (s + 2.0) * t + a * a - b * b);
    const double c3 = 2.0 * (k + a) * (k + b) * (s + 2.0);
    const double next = (c2 * p - c3 * p_prev) / c1;
    p_prev = p;
    p = next;
  }
  return p;
}

JacobiValue jacobi_with_derivative(int m, double a, double b, double t) {
  const double dp = m == 0 ? 0.0 : 0.5 * (m + a + b + 1.0) * jacobi_value(m - 1, a + 1.0, b + 1.0, t);
  return {jacobi_value(m, a, b, t), dp};
}

// Gauss-Jacobi nodes/weights on [-1, 1] for the weight (1-t)^a (1+t)^b.
void reference_gauss_jacobi(int m, double a, double b, std::vector<double>& t,
                            std::vector<double>& w) {
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  const double ab = a + b;
  for (int k = 0; k < m; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < m; ++k) {
    const double s = 2.0 * k + ab;
    const double beta = (k == 1)
                            ? 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
                            : 4.0 * k * (k + a) * (k + b) * (k + ab) /
                                  (s * s * (s + 1.0) * (s - 1.0));
    sub(k - 1) = std::sqrt(beta);
  }

  if (m == 1) {
    t.assign(1, diag(0));
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw ConvergenceError("gauss_jacobi: tridiagonal eigensolver failed");
    }
    t.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
  }

  // log of 2^{a+b+1} Gamma(m+a+1) Gamma(m+b+1) / (Gamma(m+a+b+1) m!)
  const double log_c = (ab + 1.0) * std::log(2.0) + std::lgamma(m + a + 1.0) +
                       std::lgamma(m + b + 1.0) - std::lgamma(m + ab + 1.0) -
                       std::lgamma(m + 1.0);
  w.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double x = t[static_cast<std::size_t>(i)];
    for (int it = 0; it < 3; ++it) {
      const auto pv = jacobi_with_derivative(m, a, b, x);
      const double dx = pv.value / pv.derivative;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const auto pv = jacobi_with_derivative(m, a, b, x);
    t[static_cast<std::size_t>(i)] = x;
    w[static_cast<std::size_t>(i)] =
        std::exp(log_c - std::log1p(-x * x) - 2.0 * std::log(std::fabs(pv.derivative)));
  }

  if (a == b) {
    for (int i = 0; i < m / 2; ++i) {
      const auto lo = static_cast<std::size_t>(i);
      const auto hi = static_cast<std::size_t>(m - 1 - i);
      const double node = 0.5 * (t[hi] - t[lo]);
      const double weight = 0.5 * (w[hi] + w[lo]);
      t[lo] = -node;
      t[hi] = node;
      w[lo] = w[hi] = weight;
    }
    if (m % 2 == 1) t[static_cast<std::size_t>(m / 2)] = 0.0;
  }
}

void check_size(int m) {
  if (m < 1 || m > kMaxQuadraturePoints) {
    throw DomainError("quadrature: point count must lie in [1, " +
                      std::to_string(kMaxQuadraturePoints) + "], got " + std::to_string(m));
  }
}

}  // namespace

QuadratureRule gauss_legendre(int m, double lo, double hi) {
  return gauss_jacobi(m, 0.0, 0.0, lo, hi);
}

QuadratureRule gauss_jacobi(int m, double beta_left, double beta_right, double lo, double hi) {
  check_size(m);
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("quadrature: interval must satisfy lo < hi");
  }
  if (!(beta_left > -1.0 && beta_right > -1.0)) {
    throw DomainError("gauss_jacobi: exponents must exceed -1");
  }
  std::vector<double> t;
  std::vector<double> w;
  reference_gauss_jacobi(m, beta_right, beta_left, t, w);

  const double half = 0.5 * (hi - lo);
  const double scale = std::pow(half, beta_left + beta_right + 1.0);
  QuadratureRule rule;
  rule.lo = lo;
  rule.hi = hi;
  rule.weight = {beta_left, beta_right};
  rule.nodes.resize(t.size());
  rule.weights.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    rule.nodes[i] = lo + half * (t[i] + 1.0);
    rule.weights[i] = scale * w[i];
  }
  return rule;
}

QuadratureRule gauss_muntz(int m, double lambda, double hi, double beta_left,
                           double beta_right) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("gauss_muntz: lambda must be positive");
  }
  if (!(hi > 0.0)) {
    throw DomainError("gauss_muntz: interval [0, hi] needs hi > 0");
  }
  if (!(beta_left > -1.0 && beta_right > -1.0)) {
    throw DomainError("gauss_muntz: exponents must exceed -1");
  }
  const double q = 1.0 / lambda;
  const QuadratureRule ref = gauss_jacobi(m, q * (beta_left + 1.0) - 1.0, beta_right, 0.0, 1.0);

  const double scale = std::pow(hi, beta_left + beta_right + 1.0) * q;
  QuadratureRule rule;
  rule.lo = 0.0;
  rule.hi = hi;
  rule.weight = {beta_left, beta_right};
  rule.nodes.resize(ref.size());
  rule.weights.resize(ref.size());
  for (std::size_t k = 0; k < ref.size(); ++k) {
    const double u = ref.nodes[k];
    double g = 1.0;
    if (beta_right != 0.0) {
      // ((1 - u^q) / (1 - u))^beta_right, smooth and positive on [0, 1]
      g = std::pow(-std::expm1(q * std::log(u)) / (1.0 - u), beta_right);
    }
    rule.nodes[k] = hi * std::pow(u, q);
    rule.weights[k] = scale * ref.weights[k] * g;
  }
  return rule;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double v = f(rule.nodes[k]);
    if (!std::isfinite(v)) {
      throw EvaluationError("integrate: integrand is not finite at x = " +
                            std::to_string(rule.nodes[k]));
    }
    sum += rule.weights[k] * v;
  }
  return sum;
}

double frac_moment(double lo, double hi, double s) {
  if (!(s > -1.0)) {
    throw DomainError("frac_moment: exponent must exceed -1");
  }
  if (!(lo >= 0.0 && lo < hi)) {
    throw DomainError("frac_moment: interval must satisfy 0 <= lo < hi");
  }
  const double p = s + 1.0;
  return (std::pow(hi, p) - std::pow(lo, p)) / p;
}

std::optional<double> common_exponent_step(std::span<const double> exponents,
                                           int max_denominator) {
  for (int q = 1; q <= max_denominator; ++q) {
    long long g = 0;
    bool ok = true;
    for (const double e : exponents) {
      const double scaled = e * q;
      const double r = std::round(scaled);
      if (std::fabs(scaled - r) > 1e-9 * std::max(1.0, std::fabs(scaled))) {
        ok = false;
        break;
      }
      g = std::gcd(g, static_cast<long long>(std::llabs(static_cast<long long>(r))));
    }
    if (ok) {
      return g == 0 ? 1.0 / q : static_cast<double>(g) / q;
    }
  }
  return std::nullopt;
}

}  // namespace fracls
