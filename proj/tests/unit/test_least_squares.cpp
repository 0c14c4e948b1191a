#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "fracls/errors.hpp"
#include "fracls/least_squares.hpp"

using fracls::BasisKind;
using fracls::DataSet;

namespace {

double target(double x) { return std::pow(x, 0.75) + std::pow(x, 1.5); }

DataSet sample(const std::function<double(double)>& f, double lo, double hi, int m) {
  DataSet d;
  for (int k = 0; k < m; ++k) {
    double x = lo + (hi - lo) * k / (m - 1);
    d.xs.push_back(x);
    d.ys.push_back(f(x));
  }
  return d;
}

DataSet noisy_data(std::uint64_t seed, int m) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DataSet d;
  for (int k = 0; k < m; ++k) {
    d.xs.push_back((k + u(gen)) / m);
    d.ys.push_back(std::sin(3.0 * d.xs.back()) + u(gen));
    d.weights.push_back(0.5 + u(gen));
  }
  return d;
}

double discrete_error(const DataSet& d, const std::function<double(double)>& f) {
  double e = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) e += d.weight(k) * std::pow(d.ys[k] - f(d.xs[k]), 2);
  return e;
}

}  // namespace

TEST_CASE("continuous fit reproduces an exact member of the space") {
  auto rule = fracls::gauss_muntz(32, 0.75, 1.0);
  auto fit = fracls::fit_continuous_normal(target, 0.0, 1.0, 0.75, 2, rule);
  REQUIRE(fit.coeffs.size() == 3);
  CHECK(std::abs(fit.coeffs[0]) < 1e-8);
  CHECK(std::abs(fit.coeffs[1] - 1.0) < 1e-8);
  CHECK(std::abs(fit.coeffs[2] - 1.0) < 1e-8);
  CHECK(fit.error <= 1e-20);
  CHECK(fit.cond >= 1.0);
}

TEST_CASE("continuous fit at lambda 1 and 1.5 matches the published coefficients") {
  auto rule = fracls::gauss_muntz(64, 0.25, 1.0);
  auto f1 = fracls::fit_continuous_normal(target, 0.0, 1.0, 1.0, 2, rule);
  CHECK(std::abs(f1.coeffs[0] - 0.0329) < 5e-4);
  CHECK(std::abs(f1.coeffs[1] - 1.7039) < 5e-4);
  CHECK(std::abs(f1.coeffs[2] - 0.2597) < 5e-4);
  CHECK(std::abs(f1.error / 1.40e-5 - 1.0) < 0.1);

  auto f2 = fracls::fit_continuous_normal(target, 0.0, 1.0, 1.5, 2, rule);
  CHECK(std::abs(f2.coeffs[0] - 0.1388) < 5e-4);
  CHECK(std::abs(f2.coeffs[1] - 2.5269) < 5e-4);
  CHECK(std::abs(f2.coeffs[2] + 0.7126) < 5e-4);
  CHECK(std::abs(f2.error / 8.78e-4 - 1.0) < 0.1);
}

TEST_CASE("Muntz-Legendre basis gives the same continuous fit") {
  auto rule = fracls::gauss_muntz(64, 0.25, 1.0);
  auto mono = fracls::fit_continuous_normal(target, 0.0, 1.0, 1.0, 3, rule);
  auto ml = fracls::fit_continuous_normal(target, 0.0, 1.0, 1.0, 3, rule, BasisKind::muntz_legendre);
  CHECK(ml.basis == BasisKind::muntz_legendre);
  CHECK(ml.error == doctest::Approx(mono.error).epsilon(1e-6));
  for (int i = 0; i <= 3; ++i)
    CHECK(std::abs(ml.expansion.coeff(i) - mono.coeffs[static_cast<std::size_t>(i)]) < 1e-8);
  for (double x : {0.0, 0.3, 1.0}) CHECK(ml.predict(x) == doctest::Approx(mono.predict(x)));
}

TEST_CASE("continuous fit argument checks") {
  auto rule = fracls::gauss_legendre(16, 0.0, 1.0);
  CHECK_THROWS_AS(fracls::fit_continuous_normal(target, 0.0, 1.0, 0.5, 20, rule), fracls::DomainError);
  CHECK_THROWS_AS(fracls::fit_continuous_normal(target, 0.0, 2.0, 0.5, 2, rule), fracls::UsageError);
  CHECK_THROWS_AS(fracls::fit_continuous_normal([](double) { return NAN; }, 0.0, 1.0, 0.5, 2, rule),
                  fracls::EvaluationError);
}

TEST_CASE("discrete fit of x^1.5 on [10, 20]") {
  auto d = sample([](double x) { return std::pow(x, 1.5); }, 10.0, 20.0, 20);
  auto fit = fracls::fit_discrete_normal(d, 1.5, 1);
  CHECK(std::abs(fit.coeffs[0]) < 1e-8);
  CHECK(std::abs(fit.coeffs[1] - 1.0) < 1e-8);
  CHECK(fit.error <= 1e-18);
  for (std::size_t k = 0; k < d.size(); ++k)
    CHECK(fit.predict(d.xs[k]) == doctest::Approx(d.ys[k]).epsilon(1e-12));
}

TEST_CASE("sales data") {
  DataSet d{{1, 2, 3, 4}, {10000, 21000, 50000, 70000}, {}};
  auto fit = fracls::fit_discrete_normal(d, 1.0, 1);
  CHECK(fit.predict(5.0) == doctest::Approx(90000.0).epsilon(1e-12));
  // Years coded from zero, as the published fractional predictions require.
  DataSet z{{0, 1, 2, 3}, d.ys, {}};
  const double lambdas[] = {0.5, 0.75, 1.0, 1.25, 1.5};
  const long want[] = {69692, 80546, 90000, 98307, 105870};
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(std::lround(fracls::fit_discrete_normal(z, lambdas[i], 1).predict(4.0)) - want[i]) <= 1);
}

TEST_CASE("lambda 1 reduces to classical polynomial least squares") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto d = noisy_data(seed, 15);
    for (int n = 1; n <= 5; ++n) {
      // Brute-force integer-power normal equations in extended precision.
      using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
      using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
      MatL a = MatL::Zero(n + 1, n + 1);
      VecL b = VecL::Zero(n + 1);
      for (std::size_t k = 0; k < d.size(); ++k) {
        long double x = d.xs[k], w = d.weight(k);
        for (int i = 0; i <= n; ++i) {
          b(i) += w * std::pow(x, i) * d.ys[k];
          for (int j = 0; j <= n; ++j) a(i, j) += w * std::pow(x, i + j);
        }
      }
      VecL want = a.fullPivLu().solve(b);
      auto fit = fracls::fit_discrete_normal(d, 1.0, n);
      CAPTURE(n);
      // Coefficients are pinned where the monomial system is well conditioned;
      // fitted values are pinned for every degree.
      if (n <= 3)
        for (int i = 0; i <= n; ++i)
          CHECK(std::abs(fit.coeffs[static_cast<std::size_t>(i)] - static_cast<double>(want(i))) <=
                1e-10 * std::max(1.0L, std::abs(want(i))));
      for (double x : d.xs) {
        long double v = 0.0L;
        for (int i = n; i >= 0; --i) v = v * x + want(i);
        CHECK(std::abs(fit.predict(x) - static_cast<double>(v)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("projection equals normal equations on the same span") {
  for (std::uint64_t seed : {11u, 12u}) {
    auto d = noisy_data(seed, 12);
    for (double lam : {0.5, 0.75, 1.39}) {
      auto basis = std::make_shared<const fracls::OrthogonalBasis>(
          fracls::build_discrete(d.weights, d.xs, lam, 4));
      auto proj = fracls::fit_projection(d, basis);
      auto normal = fracls::fit_discrete_normal(d, lam, 4);
      CHECK(proj.cond == 1.0);
      CHECK(proj.basis == BasisKind::orthogonal);
      for (double x : d.xs) CHECK(std::abs(proj.predict(x) - normal.predict(x)) < 1e-8);
      for (int i = 0; i <= 4; ++i)
        CHECK(std::abs(proj.expansion.coeff(i) - normal.coeffs[static_cast<std::size_t>(i)]) < 1e-8);
      CHECK(proj.error == doctest::Approx(normal.error).epsilon(1e-8));
    }
  }
}

TEST_CASE("projection residual is orthogonal to the basis") {
  auto d = noisy_data(5, 20);
  auto basis = std::make_shared<const fracls::OrthogonalBasis>(
      fracls::build_discrete(d.weights, d.xs, 0.75, 5));
  auto fit = fracls::fit_projection(d, basis);
  double ynorm = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) ynorm += d.weight(k) * d.ys[k] * d.ys[k];
  ynorm = std::sqrt(ynorm);
  for (int j = 0; j <= 5; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k)
      s += d.weight(k) * (d.ys[k] - fit.predict(d.xs[k])) * basis->evaluate(j, d.xs[k]);
    CHECK(std::abs(s) <= 1e-9 * ynorm);
  }
}

TEST_CASE("continuous projection: the pi/4 example needs no solve") {
  auto w = fracls::WeightSpec::jacobi(0.0, -0.5);
  auto basis = std::make_shared<const fracls::OrthogonalBasis>(
      fracls::build_continuous(w, 0.5, 1, fracls::default_rule(w, 0.5)));
  auto fit = fracls::fit_projection([](double x) { return std::sqrt(x) - M_PI / 4; }, basis);
  CHECK(std::abs(fit.coeffs[0]) < 1e-9);
  CHECK(std::abs(fit.coeffs[1] - 1.0) < 1e-9);
  CHECK(fit.cond == 1.0);
  CHECK(fit.error < 1e-20);
}

TEST_CASE("projection of a Muntz-Legendre polynomial onto its own basis") {
  auto w = fracls::WeightSpec::unit();
  auto basis = std::make_shared<const fracls::OrthogonalBasis>(
      fracls::build_continuous(w, 0.75, 2, fracls::default_rule(w, 0.75)));
  auto fit = fracls::fit_projection(
      [](double x) { return fracls::muntz_legendre_eval(2, 0.75, x); }, basis);
  auto l2 = fracls::muntz_legendre_coeffs(2, 0.75);
  CHECK(std::abs(fit.coeffs[0]) < 1e-12);
  CHECK(std::abs(fit.coeffs[1]) < 1e-12);
  // The basis is monic, so the coefficient is the leading coefficient of L_2.
  CHECK(fit.coeffs[2] == doctest::Approx(l2.coeff(2)).epsilon(1e-12));
}

TEST_CASE("error is non-increasing in the degree") {
  auto d = noisy_data(9, 25);
  double prev = INFINITY;
  for (int n = 0; n <= 6; ++n) {
    auto fit = fracls::fit_discrete_normal(d, 0.75, n);
    CHECK(fit.error >= 0.0);
    CHECK(fit.error <= prev * (1.0 + 1e-12));
    CHECK(fit.error == doctest::Approx(discrete_error(d, [&](double x) { return fit.predict(x); }))
                           .epsilon(1e-9));
    prev = fit.error;
  }
}

TEST_CASE("conditioning grows tenfold per degree while projection stays optimal") {
  auto d = sample([](double x) { return std::exp(x) * std::cos(2.0 * x); }, 0.0, 1.0, 50);
  double prev_cond = 0.0;
  int checked = 0;
  for (int n = 3; n <= 12; ++n) {
    auto basis = std::make_shared<const fracls::OrthogonalBasis>(
        fracls::build_discrete(std::vector<double>(d.size(), 1.0), d.xs, 0.5, n));
    auto proj = fracls::fit_projection(d, basis);
    try {
      auto normal = fracls::fit_discrete_normal(d, 0.5, n);
      if (n >= 4) {
        CAPTURE(n);
        CHECK(normal.cond >= 10.0 * prev_cond);
        ++checked;
      }
      prev_cond = normal.cond;
      CHECK(std::abs(proj.error - normal.error) <= 1e-8 * std::max(1.0, normal.error));
    } catch (const fracls::ConditioningError& e) {
      CHECK(e.cond() > fracls::kMaxCondition);
      break;
    }
  }
  CHECK(checked >= 4);
}

TEST_CASE("discrete fit errors") {
  DataSet d{{0.0, 0.5}, {1.0, 2.0}, {}};
  CHECK_THROWS_AS(fracls::fit_discrete_normal(d, 1.0, 2), fracls::RankDeficiencyError);
  DataSet bad{{-1.0, 0.5}, {1.0, 2.0}, {}};
  CHECK_THROWS_AS(fracls::fit_discrete_normal(bad, 1.0, 1), fracls::DomainError);
  DataSet empty;
  CHECK_THROWS_AS(empty.validate(), fracls::UsageError);
  DataSet ragged{{0.0, 0.5}, {1.0}, {}};
  CHECK_THROWS_AS(ragged.validate(), fracls::UsageError);
  DataSet neg_w{{0.0, 0.5}, {1.0, 2.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(neg_w.validate(), fracls::DomainError);
  // Repeated abscissae leave the system singular.
  DataSet dup{{0.5, 0.5, 0.5}, {1.0, 2.0, 3.0}, {}};
  CHECK_THROWS_AS(fracls::fit_discrete_normal(dup, 1.0, 1), fracls::NumericalError);
}

TEST_CASE("add_noise") {
  auto d = sample([](double x) { return 1.0 + x; }, 0.0, 1.0, 30);
  auto same = fracls::add_noise(d, 0.0, 42);
  CHECK(same.ys == d.ys);
  auto a = fracls::add_noise(d, 5.0, 42);
  auto b = fracls::add_noise(d, 5.0, 42);
  auto c = fracls::add_noise(d, 5.0, 43);
  CHECK(a.ys == b.ys);
  CHECK(a.ys != c.ys);
  CHECK(a.xs == d.xs);
  // Relative model: deviations scale with |y|; absolute model: they do not.
  double rel = 0.0, abs = 0.0;
  auto e = fracls::add_noise(d, 5.0, 42, fracls::NoiseModel::absolute);
  for (std::size_t k = 0; k < d.size(); ++k) {
    rel += std::pow((a.ys[k] - d.ys[k]) / d.ys[k], 2);
    abs += std::pow(e.ys[k] - d.ys[k], 2);
  }
  CHECK(std::sqrt(rel / 30) == doctest::Approx(0.05).epsilon(0.5));
  CHECK(std::sqrt(abs / 30) == doctest::Approx(0.05).epsilon(0.5));
  CHECK_THROWS_AS(fracls::add_noise(d, -1.0, 1), fracls::DomainError);
}
