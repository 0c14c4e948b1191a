#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace fracls {

struct GbmConfig {
  double s0 = 38.0;
  double r = 0.05;
  double sigma = 0.71;
  double horizon = 1.0 / 6.0;  // years
  int steps = 60;
  int paths = 10000;
  std::uint64_t seed = 1;
  double budget = 1e7;  // max steps * paths

  void validate() const;
  double dt() const noexcept { return horizon / steps; }
};

struct LsmcJob {
  GbmConfig gbm;
  double strike = 48.0;
  double lambda = 1.0;
  int basis_degree = 2;

  void validate() const;
};

/// paths x (steps + 1), row-major so each path is contiguous.
using PathMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Exact log-normal stepping S_{t+1} = S_t exp((r - sigma^2/2) dt + sigma sqrt(dt) Z).
/// Each path draws from its own generator seeded from (seed, path index), so the
/// result does not depend on the number of workers.
PathMatrix simulate_paths(const GbmConfig& cfg, int workers = 1);

struct LsmcResult {
  double price = 0.0;
  double std_error = 0.0;
  /// Terminal payoff only, on the same paths.
  double european_price = 0.0;
  double european_std_error = 0.0;
  /// Standard error of the paired per-path difference American - European.
  double premium_std_error = 0.0;
  /// Exercise dates where the regression was skipped (too few in-the-money
  /// paths or an ill-conditioned fit); no early exercise happens there.
  std::vector<int> skipped_dates;
  bool exercise_at_start = false;
};

/// Longstaff-Schwartz backward induction for an American put. Continuation
/// values are regressed over in-the-money paths on {1, s^lambda, ..., s^{d lambda}}
/// with s = S/K.
LsmcResult price_american_put(const LsmcJob& job, const PathMatrix& paths);
LsmcResult price_american_put(const LsmcJob& job, int workers = 1);

}  // namespace fracls
