#include <doctest.h>

#include <cmath>

#include "fracls/errors.hpp"
#include "fracls/option_pricing.hpp"

using fracls::GbmConfig;
using fracls::LsmcJob;

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double black_scholes_put(double s, double k, double r, double sigma, double t) {
  double d1 = (std::log(s / k) + (r + 0.5 * sigma * sigma) * t) / (sigma * std::sqrt(t));
  double d2 = d1 - sigma * std::sqrt(t);
  return k * std::exp(-r * t) * norm_cdf(-d2) - s * norm_cdf(-d1);
}

}  // namespace

TEST_CASE("zero volatility gives deterministic growth") {
  GbmConfig cfg;
  cfg.sigma = 0.0;
  cfg.paths = 5;
  auto paths = fracls::simulate_paths(cfg);
  for (int p = 0; p < cfg.paths; ++p)
    for (int t = 0; t <= cfg.steps; ++t)
      CHECK(paths(p, t) == doctest::Approx(cfg.s0 * std::exp(cfg.r * t * cfg.dt())).epsilon(1e-13));
}

TEST_CASE("every path starts at s0") {
  GbmConfig cfg;
  cfg.paths = 200;
  auto paths = fracls::simulate_paths(cfg);
  for (int p = 0; p < cfg.paths; ++p) CHECK(paths(p, 0) == cfg.s0);
}

TEST_CASE("discounted terminal price is a martingale") {
  GbmConfig cfg;
  cfg.steps = 10;
  cfg.paths = 100000;
  auto paths = fracls::simulate_paths(cfg, 4);
  double sum = 0.0, sq = 0.0;
  for (int p = 0; p < cfg.paths; ++p) {
    double s = paths(p, cfg.steps);
    sum += s;
    sq += s * s;
  }
  double mean = sum / cfg.paths;
  double se = std::sqrt((sq / cfg.paths - mean * mean) / (cfg.paths - 1));
  CHECK(std::abs(mean - cfg.s0 * std::exp(cfg.r * cfg.horizon)) < 3.0 * se);
}

TEST_CASE("paths do not depend on the worker count") {
  GbmConfig cfg;
  cfg.paths = 1001;
  cfg.seed = 77;
  auto a = fracls::simulate_paths(cfg, 1);
  auto b = fracls::simulate_paths(cfg, 3);
  auto c = fracls::simulate_paths(cfg, 8);
  CHECK(a == b);
  CHECK(a == c);
  cfg.seed = 78;
  CHECK_FALSE(a == fracls::simulate_paths(cfg, 1));
}

TEST_CASE("pricing is deterministic for a fixed seed") {
  LsmcJob job;
  job.gbm.paths = 2000;
  job.lambda = 0.75;
  auto a = fracls::price_american_put(job, 1);
  auto b = fracls::price_american_put(job, 4);
  CHECK(a.price == b.price);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("zero volatility: immediate exercise is optimal") {
  LsmcJob job;
  job.gbm.sigma = 0.0;
  job.gbm.paths = 50;
  auto res = fracls::price_american_put(job, 1);
  CHECK(res.exercise_at_start);
  CHECK(res.price == doctest::Approx(job.strike - job.gbm.s0).epsilon(1e-12));
}

TEST_CASE("European estimate agrees with Black-Scholes") {
  LsmcJob job;
  auto res = fracls::price_american_put(job, 4);
  double bs = black_scholes_put(job.gbm.s0, job.strike, job.gbm.r, job.gbm.sigma, job.gbm.horizon);
  CHECK(std::abs(res.european_price - bs) < 3.0 * res.european_std_error);
}

TEST_CASE("American price bounds on shared paths") {
  for (double lam : {0.25, 0.5, 0.75, 1.0}) {
    LsmcJob job;
    job.lambda = lam;
    job.gbm.seed = 20240501;
    auto res = fracls::price_american_put(job, 4);
    CAPTURE(lam);
    CHECK(res.std_error > 0.0);
    CHECK(res.price >= job.strike - job.gbm.s0 - 3.0 * res.std_error);
    CHECK(res.price - res.european_price >= -3.0 * res.premium_std_error);
  }
}

TEST_CASE("too few in-the-money paths skip the regression") {
  LsmcJob job;
  job.gbm.paths = 2;
  auto res = fracls::price_american_put(job, 1);
  CHECK(static_cast<int>(res.skipped_dates.size()) == job.gbm.steps - 1);
  CHECK(std::isfinite(res.price));
}

TEST_CASE("configuration checks") {
  LsmcJob job;
  job.strike = 0.0;
  CHECK_THROWS_AS(fracls::price_american_put(job, 1), fracls::DomainError);
  job = LsmcJob{};
  job.lambda = 2.5;
  CHECK_THROWS_AS(job.validate(), fracls::DomainError);
  GbmConfig cfg;
  cfg.paths = 1000000;
  CHECK_THROWS_AS(cfg.validate(), fracls::DomainError);
  cfg = GbmConfig{};
  cfg.s0 = -1.0;
  CHECK_THROWS_AS(fracls::simulate_paths(cfg), fracls::DomainError);
  job = LsmcJob{};
  fracls::PathMatrix wrong(3, 3);
  CHECK_THROWS_AS(fracls::price_american_put(job, wrong), fracls::UsageError);
}
