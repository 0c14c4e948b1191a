#include "fracls/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fracls/errors.hpp"
#include "fracls/fractional_calculus.hpp"
#include "fracls/least_squares.hpp"
#include "fracls/option_pricing.hpp"
#include "fracls/orthogonal_basis.hpp"
#include "fracls/special_functions.hpp"

namespace fracls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

std::string general(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::fixed << v;
  return os.str();
}

CheckStatus status_of(bool ok) { return ok ? CheckStatus::pass : CheckStatus::fail; }

Comparison within_abs(std::string label, double reference, double computed, double tol) {
  return {std::move(label), reference, computed, "abs " + sci(tol),
          status_of(std::fabs(computed - reference) <= tol)};
}

Comparison within_rel(std::string label, double reference, double computed, double rel) {
  return {std::move(label), reference, computed, "rel " + fixed(100.0 * rel, 0) + "%",
          status_of(std::fabs(computed - reference) <= rel * std::fabs(reference))};
}

Comparison at_most(std::string label, double reference, double computed, double bound) {
  return {std::move(label), reference, computed, "<= " + sci(bound), status_of(computed <= bound)};
}

Comparison same_magnitude(std::string label, double reference, double computed) {
  const bool ok = reference > 0.0 && computed > 0.0 && std::fabs(std::log10(computed / reference)) <= 1.0;
  return {std::move(label), reference, computed, "within 10x", status_of(ok)};
}

Comparison info(std::string label, double reference, double computed, std::string why = "info") {
  return {std::move(label), reference, computed, std::move(why), CheckStatus::info};
}

std::string lam(double l) { return "lambda=" + fixed(l, 2); }

DataSet sample(const std::vector<double>& xs, const std::function<double(double)>& f) {
  DataSet d;
  d.xs = xs;
  for (double x : xs) d.ys.push_back(f(x));
  return d;
}

std::vector<double> linspace(double lo, double hi, int m) {
  std::vector<double> v(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (m - 1);
  return v;
}

TableReport table1() {
  TableReport r{"T1", "continuous fit of x^0.75 + x^1.5 on [0, 1], n = 2", {}, {}};
  const auto y = [](double x) { return std::pow(x, 0.75) + std::pow(x, 1.5); };
  const QuadratureRule rule = gauss_muntz(48, 0.25, 1.0);
  struct Row {
    double lambda;
    double a[3];
    double error;
  };
  const Row rows[] = {{0.75, {0.0, 1.0, 1.0}, 2.70e-24},
                      {1.0, {0.0329, 1.7039, 0.2597}, 1.40e-5},
                      {1.5, {0.1388, 2.5269, -0.7126}, 8.78e-4}};
  for (const auto& row : rows) {
    const FitResult fit = fit_continuous_normal(y, 0.0, 1.0, row.lambda, 2, rule);
    const bool exact = row.lambda == 0.75;
    for (int i = 0; i < 3; ++i) {
      r.rows.push_back(within_abs(lam(row.lambda) + " a" + std::to_string(i), row.a[i],
                                  fit.coeffs[static_cast<std::size_t>(i)], exact ? 1e-8 : 5e-4));
    }
    r.rows.push_back(exact ? at_most(lam(row.lambda) + " E^C", row.error, fit.error, 1e-18)
                           : within_rel(lam(row.lambda) + " E^C", row.error, fit.error, 0.10));
  }
  return r;
}

TableReport table2(const ReproduceOptions& opts) {
  TableReport r{"T2", "discrete fit of x^1.5 on [10, 20], n = 1", {}, {}};
  const auto y = [](double x) { return std::pow(x, 1.5); };
  std::vector<double> integers;
  for (int x = 10; x <= 20; ++x) integers.push_back(x);
  const DataSet data = sample(integers, y);
  const DataSet data20 = sample(linspace(10.0, 20.0, 20), y);

  for (const DataSet* d : {&data, &data20}) {
    const std::string tag = d == &data ? " (11 pts)" : " (20 pts)";
    const FitResult fit = fit_discrete_normal(*d, 1.5, 1);
    r.rows.push_back(within_abs("lambda=1.50 a0" + tag, 0.0, fit.coeffs[0], 1e-8));
    r.rows.push_back(within_abs("lambda=1.50 a1" + tag, 1.0, fit.coeffs[1], 1e-8));
    r.rows.push_back(at_most("lambda=1.50 E^D" + tag, 8.20e-28, fit.error, 1e-18));
  }
  {
    const FitResult fit = fit_discrete_normal(data, 1.25, 1);
    r.rows.push_back(within_abs("lambda=1.25 a0", -11.1149, fit.coeffs[0], 5e-4));
    r.rows.push_back(within_abs("lambda=1.25 a1", 2.3609, fit.coeffs[1], 5e-4));
    r.rows.push_back(within_rel("lambda=1.25 E^D", 2.02, fit.error, 0.10));
  }
  {
    const FitResult fit = fit_discrete_normal(data, 1.0, 1);
    r.rows.push_back(within_abs("lambda=1.00 a0", -27.7817, fit.coeffs[0], 5e-4));
    r.rows.push_back(info("lambda=1.00 a1", 8.1671, fit.coeffs[1], "published slope repeats E^D"));
    r.rows.push_back(within_rel("lambda=1.00 E^D", 8.17, fit.error, 0.10));
  }
  r.notes.push_back("published figures correspond to the 11 integer abscissae 10..20");
  if (opts.qualitative) {
    const double reference[2][3] = {{2.20e-2, 2.05, 8.19}, {8.80e-2, 2.10, 8.26}};
    const double lambdas[3] = {1.5, 1.25, 1.0};
    const double levels[2] = {5.0, 10.0};
    for (int lv = 0; lv < 2; ++lv) {
      const DataSet noisy = add_noise(data, levels[lv], opts.seed + static_cast<std::uint64_t>(lv),
                                      NoiseModel::absolute);
      for (int j = 0; j < 3; ++j) {
        const FitResult fit = fit_discrete_normal(noisy, lambdas[j], 1);
        r.rows.push_back(same_magnitude(fixed(levels[lv], 0) + "% noise " + lam(lambdas[j]) + " E^D",
                                        reference[lv][j], fit.error));
      }
    }
    r.notes.push_back("noise: additive Gaussian, sd = percent/100, seed " + std::to_string(opts.seed) +
                      " (+1 for 10%)");
  }
  return r;
}

FdeProblem single_term_problem() {
  FdeProblem p;
  p.terms = {{0.5, 1.0}};
  p.rhs = FracFunction::monomial(1.0L / gamma(1.5L), 0.5L);
  return p;
}

FdeProblem two_term_problem() {
  FdeProblem p;
  p.terms = {{0.5, 1.0}, {0.25, 1.0}};
  p.reaction = 1.0;
  const FracFunction exact = FracFunction::monomial(1.0L, 3.5L) + FracFunction::monomial(1.0L, 4.0L);
  p.rhs = apply_operator(p, exact);
  return p;
}

TableReport table4() {
  TableReport r{"T4", "single-term Caputo equation, alpha = 0.5, n = 2", {}, {}};
  const FdeProblem prob = single_term_problem();
  {
    const FdeSolution s = solve_fde(prob, 0.5, 2);
    r.rows.push_back(at_most("lambda=0.50 E^C", 0.0, s.fit.error, 1e-18));
    double worst = 0.0;
    for (double x : linspace(0.0, 1.0, 101)) {
      worst = std::max(worst, fde_abs_error(s, [](double t) { return t; }, x));
    }
    r.rows.push_back(at_most("lambda=0.50 max|y - x| on [0,1]", 0.0, worst, 1e-8));
  }
  const double lambdas[] = {0.75, 1.0, 1.25, 1.5};
  const double reference[] = {6.11e-4, 5.19e-4, 2.70e-3, 8.60e-3};
  for (int j = 0; j < 4; ++j) {
    const FdeSolution s = solve_fde(prob, lambdas[j], 2);
    r.rows.push_back(within_rel(lam(lambdas[j]) + " E^C", reference[j], s.fit.error, 0.15));
  }
  r.notes.push_back("the exact solution x lies in M_2^1, so the lambda=1 minimum is 0");
  return r;
}

TableReport table6() {
  TableReport r{"T6", "sales fit on 2014..2017, prediction for 2018", {}, {}};
  DataSet d;
  d.xs = {0.0, 1.0, 2.0, 3.0};
  d.ys = {10000.0, 21000.0, 50000.0, 70000.0};
  const double lambdas[] = {0.5, 0.75, 1.0, 1.25, 1.5};
  const double reference[] = {69692, 80546, 90000, 98307, 105870};
  for (int j = 0; j < 5; ++j) {
    const FitResult fit = fit_discrete_normal(d, lambdas[j], 1);
    const double pred = std::round(fit.predict(4.0));
    r.rows.push_back(within_abs(lam(lambdas[j]) + " sales 2018", reference[j], pred, 1.0));
  }
  r.notes.push_back("years coded as year - 2014");
  return r;
}

TableReport table7() {
  TableReport r{"T7", "discrete fit of the tabulated five-point data, n = 1", {}, {}};
  DataSet clean;
  clean.xs = {0.0, 0.25, 0.5, 0.75, 1.0};
  clean.ys = {0.0, 0.1340, 0.3660, 0.6589, 0.6589};
  DataSet noisy = clean;
  noisy.ys = {-0.0062, 0.0745, 0.0705, 0.0709, 0.0336};
  const double lambdas[] = {1.5, 1.0, 0.5};
  const double clean_err[] = {1.3042e-4, 1.6400e-2, 1.2320e-1};
  const double noisy_err[] = {4.7e-3, 4.3e-3, 3.1e-3};
  const double noisy_a[3][2] = {{0.0420, 0.0157}, {0.0335, 0.0304}, {0.0159, 0.0533}};
  const double loud_err[] = {3.5e-2, 2.54e-2, 1.113e-2};
  for (int j = 0; j < 3; ++j) {
    const FitResult c = fit_discrete_normal(clean, lambdas[j], 1);
    r.rows.push_back(same_magnitude("no noise " + lam(lambdas[j]) + " E^D", clean_err[j], c.error));
    const FitResult n = fit_discrete_normal(noisy, lambdas[j], 1);
    r.rows.push_back(within_abs("5% noise " + lam(lambdas[j]) + " a0", noisy_a[j][0], n.coeffs[0], 5e-4));
    r.rows.push_back(within_abs("5% noise " + lam(lambdas[j]) + " a1", noisy_a[j][1], n.coeffs[1], 5e-4));
    r.rows.push_back(within_rel("5% noise " + lam(lambdas[j]) + " E^D", noisy_err[j], n.error, 0.05));
    r.rows.push_back(info("10% noise " + lam(lambdas[j]) + " E^D", loud_err[j], kNaN,
                          "data not published"));
  }
  r.notes.push_back("the published no-noise row repeats 0.6589; the 10% row repeats the 5% data");
  return r;
}

TableReport table8() {
  TableReport r{"T8", "two-term Caputo equation, exact solution x^3.5 + x^4", {}, {}};
  const FdeProblem prob = two_term_problem();
  const auto exact = [](double x) { return std::pow(x, 3.5) + std::pow(x, 4.0); };
  const double lambdas[] = {0.5, 0.75, 1.0, 1.25};
  const int degrees[] = {2, 4, 6, 8, 10};
  const double ec[5][4] = {{5.96e-1, 3.19e-1, 1.29e-1, 4.31e-2},
                           {7.93e-3, 2.33e-4, 5.10e-7, 1.85e-9},
                           {4.59e-6, 2.57e-11, 9.79e-10, 3.05e-10},
                           {3.08e-45, 6.61e-14, 1.53e-11, 2.16e-11},
                           {2.69e-47, 2.27e-15, 6.45e-13, 2.35e-12}};
  const double ae[5][4] = {{2.22, 2.08e-1, 3.28e-2, 2.67e-4},
                           {2.09, 2.19e-2, 4.27e-4, 3.45e-5},
                           {1.72e-1, 8.81e-6, 3.27e-5, 1.18e-5},
                           {4.40e-16, 1.34e-6, 5.79e-6, 3.98e-6},
                           {4.40e-16, 3.12e-7, 1.53e-6, 1.59e-6}};
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j) {
      const FdeSolution s = solve_fde(prob, lambdas[j], degrees[i]);
      const std::string tag = lam(lambdas[j]) + " n=" + std::to_string(degrees[i]);
      const double a = fde_abs_error(s, exact, 1.0);
      if (ec[i][j] < 1e-30) {
        r.rows.push_back(at_most(tag + " E^C", ec[i][j], s.fit.error, 1e-30));
        r.rows.push_back(at_most(tag + " A.E.", ae[i][j], a, 1e-12));
      } else {
        r.rows.push_back(within_rel(tag + " E^C", ec[i][j], s.fit.error, 0.10));
        r.rows.push_back(within_rel(tag + " A.E.", ae[i][j], a, 0.10));
      }
    }
  }
  return r;
}

TableReport table9(const ReproduceOptions& opts) {
  TableReport r{"T9", "American put by least-squares Monte Carlo", {}, {}};
  LsmcJob job;
  job.gbm.seed = opts.seed;
  const PathMatrix paths = simulate_paths(job.gbm, opts.workers);
  const double lambdas[] = {0.25, 0.5, 0.75, 1.0};
  const double reference[] = {10.743, 10.730, 10.790, 10.714};
  for (int j = 0; j < 4; ++j) {
    job.lambda = lambdas[j];
    const LsmcResult res = price_american_put(job, paths);
    const double tol = 3.0 * res.std_error;
    r.rows.push_back({lam(lambdas[j]) + " price", reference[j], res.price, "3 se = " + fixed(tol, 4),
                      status_of(std::fabs(res.price - reference[j]) <= tol)});
    r.rows.push_back(at_most(lam(lambdas[j]) + " K - S0 - price", kNaN,
                             job.strike - job.gbm.s0 - res.price, 3.0 * res.std_error));
    r.rows.push_back(at_most(lam(lambdas[j]) + " european - american", kNaN,
                             res.european_price - res.price, 3.0 * res.premium_std_error));
    if (j == 0) {
      r.rows.push_back(info("european price", kNaN, res.european_price));
    }
  }
  r.notes.push_back("seed " + std::to_string(opts.seed) + ", " + std::to_string(job.gbm.paths) +
                    " paths, " + std::to_string(job.gbm.steps) + " dates");
  r.notes.push_back("the Black-Scholes European put for these inputs is 11.135, above every published price");
  return r;
}

TableReport table10() {
  TableReport r{"T10", "population curve E_1.39(0.013502 x^1.39), error at x = 0.55", {}, {}};
  const double alpha = 1.39;
  const double rate = 0.013502;
  const auto y = [&](double x) { return mittag_leffler(alpha, rate * std::pow(x, alpha)); };
  const DataSet data = sample(linspace(0.0, 1.0, 11), y);
  const double target = y(0.55);
  const double lambdas[] = {0.5, 1.0, 1.5, 1.39};
  const double reference[2][5][4] = {{{1.96e-4, 4.16e-5, 4.78e-7, 6.68e-10},
                                  {8.79e-7, 1.61e-5, 1.50e-5, 6.86e-13},
                                  {4.19e-7, 7.01e-6, 1.62e-6, 5.10e-15},
                                  {2.64e-8, 2.00e-6, 4.79e-6, 5.11e-15},
                                  {3.61e-9, 1.35e-6, 8.31e-7, 2.21e-13}},
                                 {{4.61e-4, 2.01e-3, 1.08e-4, 8.36e-9},
                                  {1.05e-5, 9.55e-5, 8.68e-5, 4.76e-12},
                                  {1.98e-6, 6.29e-5, 1.00e-4, 3.18e-15},
                                  {2.63e-7, 4.93e-5, 1.54e-4, 4.83e-15},
                                  {5.57e-8, 4.24e-5, 3.12e-4, 2.09e-16}}};
  const std::vector<double> ones(data.size(), 1.0);
  for (int path = 0; path < 2; ++path) {
    const std::string kind = path == 0 ? "normal" : "orthogonal";
    for (int n = 2; n <= 6; ++n) {
      double err[4];
      for (int j = 0; j < 4; ++j) {
        FitResult fit;
        if (path == 0) {
          fit = fit_discrete_normal(data, lambdas[j], n);
        } else {
          auto basis = std::make_shared<const OrthogonalBasis>(
              build_discrete(ones, data.xs, lambdas[j], n));
          fit = fit_projection(data, basis);
        }
        err[j] = std::fabs(target - fit.predict(0.55));
        r.rows.push_back(info(kind + " n=" + std::to_string(n) + " " + lam(lambdas[j]) + " A.E.",
                              reference[path][n - 2][j], err[j]));
      }
      const double others = std::min({err[0], err[1], err[2]});
      const double ratio = err[3] > 0.0 ? others / err[3] : std::numeric_limits<double>::infinity();
      r.rows.push_back({kind + " n=" + std::to_string(n) + " min A.E.(other) / A.E.(1.39)", kNaN, ratio,
                        ">= 1e3", status_of(ratio >= 1e3)});
    }
  }
  r.notes.push_back("y0 = 1 (not stated in the source); individual A.E. values are informational");
  return r;
}

}  // namespace

bool TableReport::passed() const {
  return std::none_of(rows.begin(), rows.end(),
                      [](const Comparison& c) { return c.status == CheckStatus::fail; });
}

std::vector<std::string> reproducible_tables() {
  return {"T1", "T2", "T4", "T6", "T7", "T8", "T9", "T10"};
}

bool is_qualitative_only(const std::string& id) { return id == "T7"; }

TableReport reproduce_table(const std::string& id, const ReproduceOptions& opts) {
  if (id == "T1") return table1();
  if (id == "T2") return table2(opts);
  if (id == "T4") return table4();
  if (id == "T6") return table6();
  if (id == "T7") {
    if (!opts.qualitative) throw UsageError("T7 is only available with --qualitative");
    return table7();
  }
  if (id == "T8") return table8();
  if (id == "T9") return table9(opts);
  if (id == "T10") return table10();
  throw UsageError("unknown table id '" + id + "'");
}

void print_report(const TableReport& report, std::ostream& os) {
  os << report.id << ": " << report.title << '\n';
  for (const auto& c : report.rows) {
    const char* tag = c.status == CheckStatus::pass ? "PASS" : c.status == CheckStatus::fail ? "FAIL" : "INFO";
    os << "  " << std::left << std::setw(5) << tag << std::setw(52) << c.label << " ref "
       << std::setw(12) << (std::isnan(c.reference) ? std::string("-") : general(c.reference)) << " computed "
       << std::setw(12) << (std::isnan(c.computed) ? std::string("-") : general(c.computed)) << ' '
       << c.tolerance << '\n';
  }
  for (const auto& n : report.notes) os << "  note: " << n << '\n';
  os << report.id << (report.passed() ? " PASS" : " FAIL") << '\n';
}

}  // namespace fracls
