#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "fracls/errors.hpp"
#include "fracls/orthogonal_basis.hpp"

using fracls::FractionalPolynomial;
using fracls::OrthogonalBasis;

namespace {

double ip(const fracls::Measure& m, const FractionalPolynomial& p, const FractionalPolynomial& q) {
  return fracls::inner_product(m, [&](double x) { return p(x); }, [&](double x) { return q(x); });
}

// Classical Gram-Schmidt on 1, x^lambda, ..., x^{n lambda}, kept monic.
std::vector<FractionalPolynomial> gram_schmidt(const fracls::Measure& m, double lambda, int n) {
  std::vector<FractionalPolynomial> out;
  for (int i = 0; i <= n; ++i) {
    std::vector<double> e(static_cast<std::size_t>(i) + 1, 0.0);
    e.back() = 1.0;
    FractionalPolynomial mono(lambda, e);
    std::vector<FractionalPolynomial> parts{mono};
    std::vector<double> ws{1.0};
    for (const auto& q : out) {
      parts.push_back(q);
      ws.push_back(-ip(m, mono, q) / ip(m, q, q));
    }
    out.push_back(fracls::linear_combine(parts, ws));
  }
  return out;
}

// Inner products use the recurrence values; the expanded coefficients of high-degree
// members cancel to ~1e-16 absolute, which is above 1e-10 of their tiny norms.
void check_orthogonal(const OrthogonalBasis& basis) {
  const auto& m = basis.measure();
  auto polys = basis.polys();
  auto norms = basis.sq_norms();
  for (int i = 0; i <= basis.degree(); ++i) {
    CHECK(norms[static_cast<std::size_t>(i)] > 0.0);
    CHECK(polys[static_cast<std::size_t>(i)].coeff(i) == 1.0);
    for (int j = 0; j < i; ++j) {
      double v = fracls::inner_product(
          m, [&](double x) { return basis.evaluate(i, x); },
          [&](double x) { return basis.evaluate(j, x); });
      CAPTURE(i);
      CAPTURE(j);
      CHECK(std::abs(v) <=
            1e-10 * std::sqrt(norms[static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(j)]));
    }
  }
}

std::vector<double> linspace(double lo, double hi, int m) {
  std::vector<double> xs;
  for (int k = 0; k < m; ++k) xs.push_back(lo + (hi - lo) * k / (m - 1));
  return xs;
}

}  // namespace

TEST_CASE("Jacobi weight (1-x)^{-1/2}, lambda 0.5: B_1 = pi/4") {
  auto w = fracls::WeightSpec::jacobi(0.0, -0.5);
  auto basis = fracls::build_continuous(w, 0.5, 1, fracls::default_rule(w, 0.5));
  CHECK(std::abs(basis.b()[0] - M_PI / 4) < 1e-12);
  CHECK(basis.polys()[1].coeff(0) == doctest::Approx(-M_PI / 4).epsilon(1e-13));
  CHECK(basis.sq_norms()[1] > 0.0);
}

TEST_CASE("unit weight: L_1 = x^lambda - 1/(lambda+1)") {
  for (double lam : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0}) {
    auto w = fracls::WeightSpec::unit();
    auto basis = fracls::build_continuous(w, lam, 2, fracls::default_rule(w, lam));
    CHECK(basis.b()[0] == doctest::Approx(1.0 / (lam + 1.0)).epsilon(1e-13));
  }
}

TEST_CASE("unit weight, lambda 1: monic shifted Legendre polynomials") {
  auto w = fracls::WeightSpec::unit();
  auto basis = fracls::build_continuous(w, 1.0, 8, fracls::default_rule(w, 1.0));
  CHECK(basis.b()[0] == doctest::Approx(0.5).epsilon(1e-14));
  for (int n = 0; n <= 8; ++n) {
    // Leading coefficient of the shifted Legendre polynomial of degree n is C(2n, n).
    double lead = std::tgamma(2.0 * n + 1) / std::pow(std::tgamma(n + 1.0), 2);
    auto ref = fracls::muntz_legendre_coeffs(n, 1.0);
    for (int i = 0; i <= n; ++i)
      CHECK(std::abs(basis.polys()[static_cast<std::size_t>(n)].coeff(i) - ref.coeff(i) / lead) <
            1e-10);
  }
}

TEST_CASE("continuous bases are orthogonal for several weights") {
  std::vector<fracls::WeightSpec> weights{
      fracls::WeightSpec::unit(), fracls::WeightSpec::jacobi(0.0, -0.5),
      fracls::WeightSpec::jacobi(0.0, 1.0), fracls::WeightSpec::jacobi(0.0, -0.75),
      fracls::WeightSpec::callable([](double x) { return 1.0 + x; })};
  for (const auto& w : weights)
    for (double lam : {0.5, 0.75, 1.0, 1.5}) {
      CAPTURE(lam);
      check_orthogonal(fracls::build_continuous(w, lam, 10, fracls::default_rule(w, lam)));
    }
}

TEST_CASE("discrete basis on two points") {
  std::vector<double> pts{0.0, 1.0}, w{1.0, 1.0};
  auto basis = fracls::build_discrete(w, pts, 1.0, 1);
  CHECK(basis.b()[0] == doctest::Approx(0.5));
  CHECK(basis.polys()[1].coeff(0) == doctest::Approx(-0.5));
  CHECK(basis.mode() == fracls::BasisMode::discrete);
}

TEST_CASE("discrete orthogonality on five points") {
  std::vector<double> pts{0.0, 0.25, 0.5, 0.75, 1.0}, w(5, 1.0);
  auto basis = fracls::build_discrete(w, pts, 1.0, 2);
  double sum = 0.0;
  for (double x : pts) sum += basis.polys()[1](x) * basis.polys()[2](x);
  CHECK(std::abs(sum) < 1e-14);
}

TEST_CASE("discrete bases are orthogonal, including the eleven-point grid") {
  auto pts = linspace(0.0, 1.0, 11);
  std::vector<double> w(pts.size(), 1.0);
  for (double lam : {0.5, 1.0, 1.39, 1.5}) check_orthogonal(fracls::build_discrete(w, pts, lam, 6));
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (double& v : w) v = u(gen);
  check_orthogonal(fracls::build_discrete(w, pts, 0.75, 6));
}

TEST_CASE("discrete B_1 is the weighted mean of x^lambda") {
  std::vector<double> pts{0.1, 0.4, 0.9, 1.3}, w{1.0, 2.0, 0.5, 3.0};
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    num += w[k] * std::pow(pts[k], 0.6);
    den += w[k];
  }
  auto basis = fracls::build_discrete(w, pts, 0.6, 2);
  CHECK(basis.b()[0] == doctest::Approx(num / den).epsilon(1e-14));
  CHECK(std::abs(basis.inner_product([](double) { return 1.0; },
                                     [&](double x) { return basis.evaluate(1, x); })) < 1e-10);
}

TEST_CASE("recurrence basis equals Gram-Schmidt") {
  auto wc = fracls::WeightSpec::jacobi(0.0, -0.5);
  for (double lam : {0.5, 0.75, 1.25}) {
    auto basis = fracls::build_continuous(wc, lam, 5, fracls::default_rule(wc, lam));
    auto gs = gram_schmidt(basis.measure(), lam, 5);
    for (int i = 0; i <= 5; ++i)
      for (int j = 0; j <= i; ++j)
        CHECK(std::abs(basis.polys()[static_cast<std::size_t>(i)].coeff(j) -
                       gs[static_cast<std::size_t>(i)].coeff(j)) < 1e-8);
  }
  auto pts = linspace(0.0, 1.0, 11);
  std::vector<double> w(pts.size(), 1.0);
  auto basis = fracls::build_discrete(w, pts, 1.39, 5);
  auto gs = gram_schmidt(basis.measure(), 1.39, 5);
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; j <= i; ++j)
      CHECK(std::abs(basis.polys()[static_cast<std::size_t>(i)].coeff(j) -
                     gs[static_cast<std::size_t>(i)].coeff(j)) < 1e-8);
}

TEST_CASE("C_i equals the ratio of consecutive squared norms") {
  auto w = fracls::WeightSpec::unit();
  auto basis = fracls::build_continuous(w, 0.75, 6, fracls::default_rule(w, 0.75));
  for (int i = 2; i <= 6; ++i)
    CHECK(basis.c()[static_cast<std::size_t>(i - 2)] ==
          doctest::Approx(basis.sq_norms()[static_cast<std::size_t>(i - 1)] /
                          basis.sq_norms()[static_cast<std::size_t>(i - 2)])
              .epsilon(1e-10));
}

TEST_CASE("evaluate_all agrees with the coefficient form") {
  auto w = fracls::WeightSpec::jacobi(0.0, -0.5);
  auto basis = fracls::build_continuous(w, 0.5, 6, fracls::default_rule(w, 0.5));
  for (double x : {0.0, 0.2, 0.6, 1.0}) {
    auto vals = basis.evaluate_all(x);
    for (int i = 0; i <= 6; ++i)
      CHECK(vals[static_cast<std::size_t>(i)] ==
            doctest::Approx(basis.polys()[static_cast<std::size_t>(i)](x)).epsilon(1e-11));
  }
}

TEST_CASE("from_recurrence rebuilds the same polynomials") {
  auto w = fracls::WeightSpec::unit();
  auto basis = fracls::build_continuous(w, 0.5, 4, fracls::default_rule(w, 0.5));
  auto copy = OrthogonalBasis::from_recurrence(
      0.5, basis.mode(), {basis.b().begin(), basis.b().end()},
      {basis.c().begin(), basis.c().end()}, {basis.sq_norms().begin(), basis.sq_norms().end()});
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= i; ++j)
      CHECK(copy.polys()[static_cast<std::size_t>(i)].coeff(j) ==
            basis.polys()[static_cast<std::size_t>(i)].coeff(j));
}

TEST_CASE("builder errors") {
  std::vector<double> pts{0.0, 0.5, 1.0}, w(3, 1.0);
  CHECK_THROWS_AS(fracls::build_discrete(w, pts, 1.0, 3), fracls::RankDeficiencyError);
  std::vector<double> dup{0.0, 0.5, 0.5}, bad{1.0, -1.0, 1.0};
  CHECK_THROWS_AS(fracls::build_discrete(w, dup, 1.0, 1), fracls::DomainError);
  CHECK_THROWS_AS(fracls::build_discrete(bad, pts, 1.0, 1), fracls::DomainError);
  // A rule whose weight does not match the requested Jacobi weight.
  auto unit_rule = fracls::gauss_legendre(16, 0.0, 1.0);
  CHECK_THROWS_AS(fracls::build_continuous(fracls::WeightSpec::jacobi(0.0, -0.5), 0.5, 2, unit_rule),
                  fracls::UsageError);
  // Four points cannot carry a degree-6 basis; the collapse is reported with its index.
  std::vector<double> few{0.0, 0.3, 0.6, 0.9}, fw(4, 1.0);
  auto m = fracls::discrete_measure(fw, few);
  CHECK_THROWS_AS(OrthogonalBasis::from_measure(m, 1.0, 6), fracls::NumericalError);
}

TEST_CASE("inner products") {
  auto w = fracls::WeightSpec::unit();
  auto m = fracls::continuous_measure(w, fracls::gauss_legendre(8, 0.0, 1.0));
  CHECK(fracls::inner_product(m, [](double) { return 1.0; }, [](double) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-15));
  auto wj = fracls::WeightSpec::jacobi(0.0, -0.5);
  auto mj = fracls::continuous_measure(wj, fracls::default_rule(wj, 0.5));
  FractionalPolynomial l1(0.5, {-M_PI / 4, 1.0});
  CHECK(ip(mj, l1, l1) > 0.0);
}
