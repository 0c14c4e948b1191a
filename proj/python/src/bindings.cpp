#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fracls/errors.hpp"
#include "fracls/fractional_calculus.hpp"
#include "fracls/fractional_poly.hpp"
#include "fracls/least_squares.hpp"
#include "fracls/option_pricing.hpp"
#include "fracls/orthogonal_basis.hpp"
#include "fracls/quadrature.hpp"
#include "fracls/reproduce.hpp"
#include "fracls/special_functions.hpp"

namespace py = pybind11;
using namespace fracls;

namespace {

WeightSpec make_weight(const std::string& kind, double beta_left, double beta_right, double lo,
                       double hi) {
  if (kind == "unit") return WeightSpec::unit(lo, hi);
  if (kind == "jacobi") return WeightSpec::jacobi(beta_left, beta_right, lo, hi);
  throw UsageError("weight must be 'unit' or 'jacobi'");
}

BasisKind basis_kind(const std::string& name) {
  if (name == "monomial") return BasisKind::monomial;
  if (name == "muntz_legendre" || name == "muntz-legendre") return BasisKind::muntz_legendre;
  throw UsageError("basis must be 'monomial' or 'muntz_legendre'");
}

DataSet make_data(std::vector<double> xs, std::vector<double> ys, std::vector<double> weights) {
  DataSet d{std::move(xs), std::move(ys), std::move(weights)};
  d.validate();
  return d;
}

FracFunction power_sum(const std::vector<std::pair<double, double>>& terms) {
  std::vector<PowerTerm> out;
  for (auto [c, e] : terms) out.push_back({c, e});
  return FracFunction(std::move(out));
}

std::vector<std::pair<double, double>> to_pairs(const FracFunction& f) {
  std::vector<std::pair<double, double>> out;
  for (const auto& t : f.terms())
    out.emplace_back(static_cast<double>(t.coeff), static_cast<double>(t.exponent));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Modified least squares in Muntz spaces";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<InvariantError>(m, "InvariantError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<EvaluationError>(m, "EvaluationError", base.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<DegeneracyError>(m, "DegeneracyError", numerical.ptr());
  py::register_exception<RankDeficiencyError>(m, "RankDeficiencyError", numerical.ptr());
  py::register_exception<ConditioningError>(m, "ConditioningError", numerical.ptr());

  m.def("gamma", py::overload_cast<double>(&fracls::gamma), py::arg("x"));
  m.def("mittag_leffler", &mittag_leffler, py::arg("alpha"), py::arg("z"));

  py::class_<FractionalPolynomial>(m, "FractionalPolynomial")
      .def(py::init<double, std::vector<double>>(), py::arg("lam"), py::arg("coeffs"))
      .def_property_readonly("lam", &FractionalPolynomial::lambda)
      .def_property_readonly("coeffs", [](const FractionalPolynomial& p) {
        return std::vector<double>(p.coeffs().begin(), p.coeffs().end());
      })
      .def_property_readonly("degree", &FractionalPolynomial::degree)
      .def("__call__", &FractionalPolynomial::evaluate, py::arg("x"))
      .def("times_x_lambda", &FractionalPolynomial::times_x_lambda)
      .def("__repr__", [](const FractionalPolynomial& p) {
        std::ostringstream os;
        os << "FractionalPolynomial(lam=" << p.lambda() << ", degree=" << p.degree() << ")";
        return os.str();
      });

  m.def("jacobi_eval", [](double a, double b, int n, double x) { return jacobi_eval({a, b}, n, x); },
        py::arg("a"), py::arg("b"), py::arg("n"), py::arg("x"));
  m.def("muntz_legendre_coeffs", &muntz_legendre_coeffs, py::arg("n"), py::arg("lam"));
  m.def("muntz_legendre_eval", &muntz_legendre_eval, py::arg("n"), py::arg("lam"), py::arg("x"));

  py::class_<QuadratureRule>(m, "QuadratureRule")
      .def_readonly("nodes", &QuadratureRule::nodes)
      .def_readonly("weights", &QuadratureRule::weights)
      .def_readonly("lo", &QuadratureRule::lo)
      .def_readonly("hi", &QuadratureRule::hi)
      .def("__len__", &QuadratureRule::size)
      .def("integrate", [](const QuadratureRule& r, const std::function<double(double)>& f) {
        return integrate(r, f);
      });
  m.def("gauss_legendre", &gauss_legendre, py::arg("m"), py::arg("lo") = 0.0, py::arg("hi") = 1.0);
  m.def("gauss_jacobi", &gauss_jacobi, py::arg("m"), py::arg("beta_left"), py::arg("beta_right"),
        py::arg("lo") = 0.0, py::arg("hi") = 1.0);
  m.def("gauss_muntz", &gauss_muntz, py::arg("m"), py::arg("lam"), py::arg("hi") = 1.0,
        py::arg("beta_left") = 0.0, py::arg("beta_right") = 0.0);
  m.def("frac_moment", &frac_moment, py::arg("lo"), py::arg("hi"), py::arg("s"));

  py::class_<OrthogonalBasis, std::shared_ptr<OrthogonalBasis>>(m, "OrthogonalBasis")
      .def_property_readonly("lam", &OrthogonalBasis::lambda)
      .def_property_readonly("degree", &OrthogonalBasis::degree)
      .def_property_readonly("b", [](const OrthogonalBasis& o) {
        return std::vector<double>(o.b().begin(), o.b().end());
      })
      .def_property_readonly("c", [](const OrthogonalBasis& o) {
        return std::vector<double>(o.c().begin(), o.c().end());
      })
      .def_property_readonly("sq_norms", [](const OrthogonalBasis& o) {
        return std::vector<double>(o.sq_norms().begin(), o.sq_norms().end());
      })
      .def_property_readonly("polys", [](const OrthogonalBasis& o) {
        return std::vector<FractionalPolynomial>(o.polys().begin(), o.polys().end());
      })
      .def("evaluate", &OrthogonalBasis::evaluate, py::arg("i"), py::arg("x"))
      .def("evaluate_all", &OrthogonalBasis::evaluate_all, py::arg("x"));

  m.def(
      "build_continuous",
      [](double lam, int n, const std::string& weight, double beta_left, double beta_right,
         double lo, double hi, int points) {
        const WeightSpec w = make_weight(weight, beta_left, beta_right, lo, hi);
        return std::make_shared<OrthogonalBasis>(
            build_continuous(w, lam, n, default_rule(w, lam, points)));
      },
      py::arg("lam"), py::arg("n"), py::arg("weight") = "unit", py::arg("beta_left") = 0.0,
      py::arg("beta_right") = 0.0, py::arg("lo") = 0.0, py::arg("hi") = 1.0,
      py::arg("points") = 64);
  m.def(
      "build_discrete",
      [](std::vector<double> points, double lam, int n, std::vector<double> weights) {
        if (weights.empty()) weights.assign(points.size(), 1.0);
        return std::make_shared<OrthogonalBasis>(build_discrete(weights, points, lam, n));
      },
      py::arg("points"), py::arg("lam"), py::arg("n"), py::arg("weights") = std::vector<double>{});

  py::class_<FitResult>(m, "FitResult")
      .def_property_readonly("basis", [](const FitResult& f) { return to_string(f.basis); })
      .def_readonly("lam", &FitResult::lambda)
      .def_readonly("coeffs", &FitResult::coeffs)
      .def_readonly("error", &FitResult::error)
      .def_readonly("cond", &FitResult::cond)
      .def_readonly("expansion", &FitResult::expansion)
      .def("predict", &FitResult::predict, py::arg("x"))
      .def("__call__", &FitResult::predict, py::arg("x"));

  m.def(
      "fit_continuous",
      [](const std::function<double(double)>& y, double lam, int n, double lo, double hi,
         int points, const std::string& basis) {
        const QuadratureRule rule = lo == 0.0 ? gauss_muntz(points, lam, hi)
                                              : gauss_legendre(points, lo, hi);
        return fit_continuous_normal(y, lo, hi, lam, n, rule, basis_kind(basis));
      },
      py::arg("y"), py::arg("lam"), py::arg("n"), py::arg("lo") = 0.0, py::arg("hi") = 1.0,
      py::arg("points") = 64, py::arg("basis") = "monomial");
  m.def(
      "fit_discrete",
      [](std::vector<double> xs, std::vector<double> ys, double lam, int n,
         std::vector<double> weights, const std::string& basis) {
        return fit_discrete_normal(make_data(std::move(xs), std::move(ys), std::move(weights)), lam,
                                   n, basis_kind(basis));
      },
      py::arg("xs"), py::arg("ys"), py::arg("lam"), py::arg("n"),
      py::arg("weights") = std::vector<double>{}, py::arg("basis") = "monomial");
  m.def(
      "fit_projection",
      [](const std::function<double(double)>& y, std::shared_ptr<OrthogonalBasis> basis) {
        return fit_projection(y, std::move(basis));
      },
      py::arg("y"), py::arg("basis"));
  m.def(
      "fit_projection_discrete",
      [](std::vector<double> xs, std::vector<double> ys, std::shared_ptr<OrthogonalBasis> basis,
         std::vector<double> weights) {
        return fit_projection(make_data(std::move(xs), std::move(ys), std::move(weights)),
                              std::move(basis));
      },
      py::arg("xs"), py::arg("ys"), py::arg("basis"), py::arg("weights") = std::vector<double>{});
  m.def(
      "add_noise",
      [](std::vector<double> xs, std::vector<double> ys, double percent, std::uint64_t seed,
         const std::string& model) {
        if (model != "relative" && model != "absolute")
          throw UsageError("model must be 'relative' or 'absolute'");
        return add_noise(make_data(std::move(xs), std::move(ys), {}), percent, seed,
                         model == "relative" ? NoiseModel::relative : NoiseModel::absolute)
            .ys;
      },
      py::arg("xs"), py::arg("ys"), py::arg("percent"), py::arg("seed"),
      py::arg("model") = "relative");

  m.def(
      "caputo_derivative",
      [](const std::vector<std::pair<double, double>>& terms, double alpha) {
        return to_pairs(caputo_derivative(power_sum(terms), alpha));
      },
      py::arg("terms"), py::arg("alpha"),
      "Caputo derivative of sum c x^e given as [(c, e), ...]; returns the same form.");

  py::class_<FdeSolution>(m, "FdeSolution")
      .def_readonly("fit", &FdeSolution::fit)
      .def_readonly("quadrature", &FdeSolution::quadrature)
      .def_readonly("rank", &FdeSolution::rank)
      .def_property_readonly("error", [](const FdeSolution& s) { return s.fit.error; })
      .def_property_readonly("coeffs", [](const FdeSolution& s) { return s.fit.coeffs; })
      .def_property_readonly("solution_terms", [](const FdeSolution& s) { return to_pairs(s.solution); })
      .def("__call__", [](const FdeSolution& s, double x) { return s.solution(x); }, py::arg("x"));

  m.def(
      "solve_fde",
      [](std::vector<double> alphas, std::vector<double> coeffs, double reaction,
         py::object rhs, double y0, double lam, int n, const std::string& basis,
         double interval_end) {
        FdeProblem p;
        if (coeffs.empty()) coeffs.assign(alphas.size(), 1.0);
        if (coeffs.size() != alphas.size()) throw UsageError("coeffs and alphas differ in length");
        for (std::size_t i = 0; i < alphas.size(); ++i) p.terms.push_back({alphas[i], coeffs[i]});
        p.reaction = reaction;
        p.initial_value = y0;
        p.interval_end = interval_end;
        if (PyCallable_Check(rhs.ptr())) {
          p.rhs = rhs.cast<std::function<double(double)>>();
        } else {
          p.rhs = power_sum(rhs.cast<std::vector<std::pair<double, double>>>());
        }
        return solve_fde(p, lam, n, basis_kind(basis));
      },
      py::arg("alphas"), py::arg("coeffs") = std::vector<double>{}, py::arg("reaction") = 0.0,
      py::arg("rhs"), py::arg("y0") = 0.0, py::arg("lam"), py::arg("n"),
      py::arg("basis") = "monomial", py::arg("interval_end") = 1.0,
      "rhs is either [(c, e), ...] for sum c x^e or a callable f(x).");

  py::class_<LsmcResult>(m, "LsmcResult")
      .def_readonly("price", &LsmcResult::price)
      .def_readonly("std_error", &LsmcResult::std_error)
      .def_readonly("european_price", &LsmcResult::european_price)
      .def_readonly("european_std_error", &LsmcResult::european_std_error)
      .def_readonly("premium_std_error", &LsmcResult::premium_std_error)
      .def_readonly("skipped_dates", &LsmcResult::skipped_dates)
      .def_readonly("exercise_at_start", &LsmcResult::exercise_at_start);

  m.def(
      "price_american_put",
      [](double s0, double rate, double sigma, double horizon, int steps, int paths,
         std::uint64_t seed, double strike, double lam, int basis_degree, int workers) {
        LsmcJob job;
        job.gbm = {s0, rate, sigma, horizon, steps, paths, seed, GbmConfig{}.budget};
        job.strike = strike;
        job.lambda = lam;
        job.basis_degree = basis_degree;
        py::gil_scoped_release release;
        return price_american_put(job, workers);
      },
      py::arg("s0") = 38.0, py::arg("rate") = 0.05, py::arg("sigma") = 0.71,
      py::arg("horizon") = 1.0 / 6.0, py::arg("steps") = 60, py::arg("paths") = 10000,
      py::arg("seed") = 1, py::arg("strike") = 48.0, py::arg("lam") = 1.0,
      py::arg("basis_degree") = 2, py::arg("workers") = 1);

  m.def("reproducible_tables", &reproducible_tables);
  m.def(
      "reproduce",
      [](const std::string& id, bool qualitative, std::uint64_t seed) {
        ReproduceOptions opts;
        opts.qualitative = qualitative;
        opts.seed = seed;
        const TableReport rep = reproduce_table(id, opts);
        std::ostringstream os;
        print_report(rep, os);
        return py::make_tuple(rep.passed(), os.str());
      },
      py::arg("table"), py::arg("qualitative") = false, py::arg("seed") = 20240501,
      "Returns (passed, report text).");
}
