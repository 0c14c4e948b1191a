#include "fracls/orthogonal_basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracls/errors.hpp"

namespace fracls {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double dot(const std::vector<double>& w, const std::vector<double>& f,
           const std::vector<double>& g) {
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * f[k] * g[k];
  return s;
}

void check_interval(const WeightSpec& weight, const QuadratureRule& rule) {
  constexpr double tol = 1e-12;
  if (std::fabs(weight.lo - rule.lo) > tol * std::max(1.0, std::fabs(weight.lo)) ||
      std::fabs(weight.hi - rule.hi) > tol * std::max(1.0, std::fabs(weight.hi))) {
    throw UsageError("continuous measure: rule interval does not match the weight interval");
  }
}

}  // namespace

Measure continuous_measure(const WeightSpec& weight, const QuadratureRule& rule) {
  check_interval(weight, rule);
  Measure m;
  m.mode = BasisMode::continuous;
  m.nodes = rule.nodes;
  m.weights = rule.weights;
  std::visit(
      overloaded{
          [&](const UnitWeight&) {
            if (!rule.weight.is_unit()) {
              throw UsageError("continuous measure: unit weight needs a unit-weight rule");
            }
          },
          [&](const JacobiSingularWeight& jw) {
            if (jw.beta_left != rule.weight.beta_left ||
                jw.beta_right != rule.weight.beta_right) {
              throw UsageError(
                  "continuous measure: Jacobi weight must be built into the quadrature rule");
            }
          },
          [&](const TabulatedWeight&) {
            throw UsageError("continuous measure: tabulated weights need a discrete basis");
          },
          [&](const CallableWeight& cw) {
            if (!rule.weight.is_unit()) {
              throw UsageError("continuous measure: callable weight needs a unit-weight rule");
            }
            for (std::size_t k = 0; k < m.nodes.size(); ++k) {
              const double w = cw.fn(m.nodes[k]);
              if (!(w > 0.0) || !std::isfinite(w)) {
                throw DomainError("continuous measure: weight must be positive at every node");
              }
              m.weights[k] *= w;
            }
          },
      },
      weight.kind);
  return m;
}

Measure discrete_measure(std::span<const double> weight_values, std::span<const double> points) {
  if (weight_values.size() != points.size()) {
    throw UsageError("discrete measure: weight and point counts differ");
  }
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("discrete measure: points must be distinct");
  }
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!(points[k] >= 0.0)) {
      throw DomainError("discrete measure: points must be non-negative");
    }
    if (!(weight_values[k] > 0.0) || !std::isfinite(weight_values[k])) {
      throw DomainError("discrete measure: weights must be strictly positive");
    }
  }
  Measure m;
  m.mode = BasisMode::discrete;
  m.nodes.assign(points.begin(), points.end());
  m.weights.assign(weight_values.begin(), weight_values.end());
  return m;
}

double inner_product(const Measure& measure, const std::function<double(double)>& f,
                     const std::function<double(double)>& g) {
  double s = 0.0;
  for (std::size_t k = 0; k < measure.nodes.size(); ++k) {
    const double x = measure.nodes[k];
    s += measure.weights[k] * f(x) * g(x);
  }
  return s;
}

OrthogonalBasis OrthogonalBasis::from_measure(Measure measure, double lambda, int n) {
  if (n < 0) {
    throw DomainError("orthogonal basis: degree must be non-negative");
  }
  if (measure.nodes.size() <= static_cast<std::size_t>(n)) {
    throw RankDeficiencyError("orthogonal basis: " + std::to_string(measure.nodes.size()) +
                              " support points cannot carry degree " + std::to_string(n));
  }
  OrthogonalBasis basis(lambda, std::move(measure));
  const auto& w = basis.measure_.weights;
  const std::size_t m = w.size();

  std::vector<double> t(m);
  for (std::size_t k = 0; k < m; ++k) t[k] = std::pow(basis.measure_.nodes[k], lambda);

  // Values of L_{i-1} and L_{i-2} at the nodes; the recurrence runs on these
  // (Stieltjes procedure) while the coefficient form is assembled alongside.
  std::vector<double> prev(m, 1.0);
  std::vector<double> prev2;
  std::vector<double> t_pow(m, 1.0);  // x^{i lambda} at the nodes, for the relative threshold

  basis.polys_.emplace_back(lambda, std::vector<double>{1.0});
  const double norm0 = dot(w, prev, prev);
  if (!(norm0 > 0.0)) {
    throw DegeneracyError("orthogonal basis: measure has zero mass", 0);
  }
  basis.sq_norms_.push_back(norm0);

  for (int i = 1; i <= n; ++i) {
    std::vector<double> t_prev(m);
    for (std::size_t k = 0; k < m; ++k) t_prev[k] = t[k] * prev[k];
    const double norm_prev = basis.sq_norms_.back();
    const double bi = dot(w, t_prev, prev) / norm_prev;

    std::vector<double> cur(m);
    for (std::size_t k = 0; k < m; ++k) cur[k] = t_prev[k] - bi * prev[k];

    const FractionalPolynomial& p1 = basis.polys_.back();
    FractionalPolynomial shifted = p1.times_x_lambda();
    FractionalPolynomial next = [&] {
      if (i == 1) {
        const FractionalPolynomial parts[] = {shifted, p1};
        const double ws[] = {1.0, -bi};
        return linear_combine(parts, ws);
      }
      const double ci = dot(w, t_prev, prev2) / basis.sq_norms_[static_cast<std::size_t>(i - 2)];
      basis.c_.push_back(ci);
      for (std::size_t k = 0; k < m; ++k) cur[k] -= ci * prev2[k];
      const FractionalPolynomial parts[] = {shifted, p1,
                                            basis.polys_[static_cast<std::size_t>(i - 2)]};
      const double ws[] = {1.0, -bi, -ci};
      return linear_combine(parts, ws);
    }();
    basis.b_.push_back(bi);

    for (std::size_t k = 0; k < m; ++k) t_pow[k] *= t[k];
    const double scale = dot(w, t_pow, t_pow);
    const double norm = dot(w, cur, cur);
    if (!(norm > kDegeneracyThreshold * scale)) {
      throw DegeneracyError("orthogonal basis: squared norm of L_" + std::to_string(i) +
                                " collapsed (" + std::to_string(norm) + ")",
                            i);
    }
    basis.sq_norms_.push_back(norm);
    basis.polys_.push_back(std::move(next));
    prev2 = std::move(prev);
    prev = std::move(cur);
  }
  return basis;
}

OrthogonalBasis OrthogonalBasis::from_recurrence(double lambda, BasisMode mode,
                                                 std::vector<double> b, std::vector<double> c,
                                                 std::vector<double> sq_norms) {
  const std::size_t n = b.size();
  if (c.size() != (n == 0 ? 0 : n - 1) || sq_norms.size() != n + 1) {
    throw UsageError("orthogonal basis: recurrence arrays have inconsistent lengths");
  }
  Measure measure;
  measure.mode = mode;
  OrthogonalBasis basis(lambda, std::move(measure));
  basis.polys_.emplace_back(lambda, std::vector<double>{1.0});
  for (std::size_t i = 1; i <= n; ++i) {
    const FractionalPolynomial& p1 = basis.polys_.back();
    if (i == 1) {
      const FractionalPolynomial parts[] = {p1.times_x_lambda(), p1};
      const double ws[] = {1.0, -b[0]};
      basis.polys_.push_back(linear_combine(parts, ws));
    } else {
      const FractionalPolynomial parts[] = {p1.times_x_lambda(), p1, basis.polys_[i - 2]};
      const double ws[] = {1.0, -b[i - 1], -c[i - 2]};
      basis.polys_.push_back(linear_combine(parts, ws));
    }
  }
  basis.b_ = std::move(b);
  basis.c_ = std::move(c);
  basis.sq_norms_ = std::move(sq_norms);
  return basis;
}

std::vector<double> OrthogonalBasis::evaluate_all(double x) const {
  if (!(x >= 0.0)) {
    throw DomainError("orthogonal basis: cannot evaluate at negative x");
  }
  const int n = degree();
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  v[0] = 1.0;
  if (n == 0) return v;
  const double t = std::pow(x, lambda_);
  v[1] = t - b_[0];
  for (int i = 2; i <= n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    v[u] = (t - b_[u - 1]) * v[u - 1] - c_[u - 2] * v[u - 2];
  }
  return v;
}

double OrthogonalBasis::evaluate(int i, double x) const {
  if (i < 0 || i > degree()) {
    throw DomainError("orthogonal basis: index out of range");
  }
  return evaluate_all(x)[static_cast<std::size_t>(i)];
}

OrthogonalBasis build_continuous(const WeightSpec& weight, double lambda, int n,
                                 const QuadratureRule& rule) {
  return OrthogonalBasis::from_measure(continuous_measure(weight, rule), lambda, n);
}

OrthogonalBasis build_discrete(std::span<const double> weight_values,
                               std::span<const double> points, double lambda, int n) {
  if (points.size() <= static_cast<std::size_t>(std::max(n, 0))) {
    throw RankDeficiencyError("build_discrete: need more than n = " + std::to_string(n) +
                              " points, got " + std::to_string(points.size()));
  }
  return OrthogonalBasis::from_measure(discrete_measure(weight_values, points), lambda, n);
}

QuadratureRule default_rule(const WeightSpec& weight, double lambda, int points) {
  double bl = 0.0;
  double br = 0.0;
  if (const auto* jw = std::get_if<JacobiSingularWeight>(&weight.kind)) {
    bl = jw->beta_left;
    br = jw->beta_right;
  } else if (std::holds_alternative<TabulatedWeight>(weight.kind)) {
    throw UsageError("default_rule: tabulated weights have no continuous rule");
  }
  if (weight.lo == 0.0) {
    return gauss_muntz(points, lambda, weight.hi, bl, br);
  }
  return gauss_jacobi(points, bl, br, weight.lo, weight.hi);
}

}  // namespace fracls
