#include <doctest.h>

#include <cmath>
#include <limits>

#include "fracls/errors.hpp"
#include "fracls/special_functions.hpp"


using fracls::mittag_leffler;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("gamma at integers and half-integers") {
  CHECK(fracls::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fracls::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(rel_err(fracls::gamma(1.5), 0.88622692545275801365) < 1e-14);
  CHECK(rel_err(fracls::gamma(0.5), std::sqrt(M_PI)) < 1e-14);
}

TEST_CASE("gamma against high-precision oracle values") {
  CHECK(rel_err(fracls::gamma(0.1), 9.5135076986687318363) < 1e-13);
  CHECK(rel_err(fracls::gamma(170.0), 4.2690680090047052749e304) < 1e-12);
  CHECK(rel_err(static_cast<double>(fracls::gamma(1.5L)), 0.88622692545275801365) < 1e-15);
}

TEST_CASE("gamma rejects non-positive and non-finite arguments") {
  CHECK_THROWS_AS(fracls::gamma(0.0), fracls::DomainError);
  CHECK_THROWS_AS(fracls::gamma(-1.5), fracls::DomainError);
  CHECK_THROWS_AS(fracls::gamma(std::numeric_limits<double>::quiet_NaN()), fracls::DomainError);
  CHECK_THROWS_AS(fracls::gamma(std::numeric_limits<double>::infinity()), fracls::DomainError);
}

TEST_CASE("gamma satisfies the functional equation on (0, 100]") {
  for (double x = 0.05; x <= 100.0; x += 0.37) {
    CAPTURE(x);
    CHECK(rel_err(fracls::gamma(x + 1.0), x * fracls::gamma(x)) < 1e-12);
  }
}

TEST_CASE("Mittag-Leffler special values") {
  CHECK(rel_err(mittag_leffler(1.0, 1.0), std::exp(1.0)) < 1e-14);
  CHECK(mittag_leffler(0.5, 0.0) == 1.0);
  CHECK(rel_err(mittag_leffler(1.39, 0.0135), 1.0109788338849972829) < 1e-14);
  CHECK(rel_err(mittag_leffler(2.0, -4.0), std::cos(2.0)) < 1e-12);
}

TEST_CASE("Mittag-Leffler against oracle values") {
  CHECK(rel_err(mittag_leffler(0.5, -1.0), 0.42758357615580700441) < 1e-12);
  CHECK(rel_err(mittag_leffler(0.5, 2.0), 108.94090438997797241) < 1e-12);
  CHECK(rel_err(mittag_leffler(0.8, 30.0), 3.8806797869623885792e30) < 1e-10);
}

TEST_CASE("Mittag-Leffler with alpha = 1 is the exponential") {
  for (double z = -5.0; z <= 5.0; z += 0.25) {
    CAPTURE(z);
    CHECK(rel_err(mittag_leffler(1.0, z), std::exp(z)) < 1e-12);
  }
}

TEST_CASE("Mittag-Leffler at zero is one for every alpha") {
  for (double a : {0.1, 0.5, 0.75, 1.0, 1.39, 2.0, 3.5}) CHECK(mittag_leffler(a, 0.0) == 1.0);
}

TEST_CASE("Mittag-Leffler rejects non-positive alpha") {
  CHECK_THROWS_AS(mittag_leffler(0.0, 1.0), fracls::DomainError);
  CHECK_THROWS_AS(mittag_leffler(-1.0, 1.0), fracls::DomainError);
}
