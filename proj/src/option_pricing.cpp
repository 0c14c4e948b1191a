#include "fracls/option_pricing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "fracls/errors.hpp"
#include "fracls/least_squares.hpp"

namespace fracls {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void simulate_rows(const GbmConfig& cfg, PathMatrix& out, int begin, int end) {
  const double dt = cfg.dt();
  const double drift = (cfg.r - 0.5 * cfg.sigma * cfg.sigma) * dt;
  const double vol = cfg.sigma * std::sqrt(dt);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int p = begin; p < end; ++p) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(p))));
    normal.reset();
    double s = cfg.s0;
    out(p, 0) = s;
    for (int t = 1; t <= cfg.steps; ++t) {
      s *= std::exp(drift + vol * normal(rng));
      out(p, t) = s;
    }
  }
}

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(n)};
}

}  // namespace

void GbmConfig::validate() const {
  if (!(s0 > 0.0)) throw DomainError("gbm: s0 must be positive");
  if (!std::isfinite(r)) throw DomainError("gbm: rate must be finite");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("gbm: sigma must be non-negative");
  if (!(horizon > 0.0)) throw DomainError("gbm: horizon must be positive");
  if (steps < 1) throw DomainError("gbm: steps must be at least 1");
  if (paths < 1) throw DomainError("gbm: paths must be at least 1");
  if (static_cast<double>(steps) * static_cast<double>(paths) > budget) {
    throw DomainError("gbm: steps * paths exceeds the path-step budget");
  }
}

void LsmcJob::validate() const {
  gbm.validate();
  if (!(strike > 0.0)) throw DomainError("lsmc: strike must be positive");
  if (!(lambda > 0.0 && lambda <= 2.0)) throw DomainError("lsmc: lambda must lie in (0, 2]");
  if (basis_degree < 0) throw DomainError("lsmc: basis degree must be non-negative");
}

PathMatrix simulate_paths(const GbmConfig& cfg, int workers) {
  cfg.validate();
  PathMatrix out(cfg.paths, cfg.steps + 1);
  workers = std::clamp(workers, 1, cfg.paths);
  if (workers == 1) {
    simulate_rows(cfg, out, 0, cfg.paths);
    return out;
  }
  std::vector<std::thread> pool;
  const int chunk = (cfg.paths + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(cfg.paths, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(simulate_rows, std::cref(cfg), std::ref(out), begin, end);
  }
  for (auto& th : pool) th.join();
  return out;
}

LsmcResult price_american_put(const LsmcJob& job, const PathMatrix& paths) {
  job.validate();
  const GbmConfig& g = job.gbm;
  if (paths.rows() != g.paths || paths.cols() != g.steps + 1) {
    throw UsageError("lsmc: path matrix shape does not match the configuration");
  }
  const double k = job.strike;
  const double disc = std::exp(-g.r * g.dt());
  const int n_paths = g.paths;

  // value[p]: cashflow of path p discounted to the current date.
  std::vector<double> value(static_cast<std::size_t>(n_paths));
  for (int p = 0; p < n_paths; ++p) {
    value[static_cast<std::size_t>(p)] = std::max(k - paths(p, g.steps), 0.0);
  }
  LsmcResult res;
  std::vector<double> euro(value);
  {
    const double df = std::exp(-g.r * g.horizon);
    for (double& v : euro) v *= df;
    const MeanSe e = mean_se(euro);
    res.european_price = e.mean;
    res.european_std_error = e.se;
  }

  std::vector<int> itm;
  for (int t = g.steps - 1; t >= 1; --t) {
    for (double& v : value) v *= disc;
    itm.clear();
    DataSet data;
    for (int p = 0; p < n_paths; ++p) {
      const double s = paths(p, t);
      if (k - s > 0.0) {
        itm.push_back(p);
        data.xs.push_back(s / k);
        data.ys.push_back(value[static_cast<std::size_t>(p)]);
      }
    }
    if (itm.size() < static_cast<std::size_t>(job.basis_degree) + 1) {
      if (!itm.empty()) res.skipped_dates.push_back(t);
      continue;
    }
    FitResult fit;
    try {
      fit = fit_discrete_normal(data, job.lambda, job.basis_degree);
    } catch (const NumericalError&) {
      res.skipped_dates.push_back(t);
      continue;
    }
    for (std::size_t j = 0; j < itm.size(); ++j) {
      const double payoff = k - paths(itm[j], t);
      if (payoff > fit.expansion.evaluate(data.xs[j])) {
        value[static_cast<std::size_t>(itm[j])] = payoff;
      }
    }
  }
  for (double& v : value) v *= disc;
  const MeanSe am = mean_se(value);
  std::vector<double> premium(value.size());
  for (std::size_t p = 0; p < value.size(); ++p) premium[p] = value[p] - euro[p];
  res.premium_std_error = mean_se(premium).se;
  const double immediate = std::max(k - g.s0, 0.0);
  if (immediate > am.mean) {
    res.price = immediate;
    res.std_error = 0.0;
    res.exercise_at_start = true;
  } else {
    res.price = am.mean;
    res.std_error = am.se;
  }
  return res;
}

LsmcResult price_american_put(const LsmcJob& job, int workers) {
  job.validate();
  return price_american_put(job, simulate_paths(job.gbm, workers));
}

}  // namespace fracls
