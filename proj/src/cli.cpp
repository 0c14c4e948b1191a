#include "fracls/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include "fracls/errors.hpp"
#include "fracls/option_pricing.hpp"
#include "fracls/quadrature.hpp"
#include "fracls/reproduce.hpp"
#include "fracls/special_functions.hpp"

namespace fracls::cli {

using json = Json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

DataSet read_csv(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(trim(line), ',');
      break;
    }
  }
  if (header.empty()) {
    throw UsageError(source + ": empty file, expected header x,y[,w]");
  }
  const bool weighted = header.size() == 3 && header[2] == "w";
  if (header.size() < 2 || header[0] != "x" || header[1] != "y" || (header.size() == 3 && !weighted) ||
      header.size() > 3) {
    throw UsageError(source + ":" + std::to_string(line_no) + ": header must be x,y or x,y,w");
  }
  DataSet data;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto cells = split(t, ',');
    if (cells.size() != header.size()) {
      throw UsageError(source + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " columns, found " +
                       std::to_string(cells.size()));
    }
    double v[3] = {0.0, 0.0, 1.0};
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto parsed = to_double(cells[c]);
      if (!parsed || !std::isfinite(*parsed)) {
        throw UsageError(source + ":" + std::to_string(line_no) + ": column " +
                         std::to_string(c + 1) + " ('" + header[c] + "'): '" + cells[c] +
                         "' is not a finite number");
      }
      v[c] = *parsed;
    }
    if (v[0] < 0.0) {
      throw UsageError(source + ":" + std::to_string(line_no) + ": column 1 ('x'): x must be >= 0");
    }
    if (weighted && !(v[2] > 0.0)) {
      throw UsageError(source + ":" + std::to_string(line_no) + ": column 3 ('w'): weights must be > 0");
    }
    data.xs.push_back(v[0]);
    data.ys.push_back(v[1]);
    if (weighted) data.weights.push_back(v[2]);
  }
  if (data.xs.empty()) {
    throw UsageError(source + ": no data rows");
  }
  return data;
}

DataSet read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(path + ": cannot open file");
  return read_csv(in, path);
}

void write_csv(std::ostream& os, const DataSet& data) {
  os << (data.weights.empty() ? "x,y\n" : "x,y,w\n");
  for (std::size_t k = 0; k < data.size(); ++k) {
    os << fmt17(data.xs[k]) << ',' << fmt17(data.ys[k]);
    if (!data.weights.empty()) os << ',' << fmt17(data.weights[k]);
    os << '\n';
  }
}

std::vector<double> read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(path + ": cannot open file");
  std::vector<double> pts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto v = to_double(t);
    if (!v || !std::isfinite(*v) || *v < 0.0) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": '" + t +
                       "' is not a non-negative number");
    }
    pts.push_back(*v);
  }
  if (pts.empty()) throw UsageError(path + ": no points");
  return pts;
}

FracFunction parse_frac_function(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw UsageError("empty expression");
  const auto fail = [&](std::size_t pos) {
    throw UsageError("cannot parse expression '" + std::string(text) + "' near position " +
                     std::to_string(pos));
  };
  // strtod stops at the first character it cannot use, which is what a term scanner needs.
  const auto number = [&](std::size_t& pos) -> long double {
    const char* begin = s.c_str() + pos;
    char* end = nullptr;
    const long double v = std::strtold(begin, &end);
    if (end == begin) fail(pos);
    pos += static_cast<std::size_t>(end - begin);
    return v;
  };
  std::vector<PowerTerm> terms;
  std::size_t pos = 0;
  while (pos < s.size()) {
    long double sign = 1.0L;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1.0L : 1.0L;
      ++pos;
    } else if (!terms.empty()) {
      fail(pos);
    }
    if (pos >= s.size()) fail(pos);
    long double coeff = 1.0L;
    long double exponent = 0.0L;
    if (s[pos] != 'x') {
      coeff = number(pos);
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        if (pos >= s.size() || s[pos] != 'x') fail(pos);
      }
    }
    if (pos < s.size() && s[pos] == 'x') {
      ++pos;
      exponent = 1.0L;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        exponent = number(pos);
      }
    }
    terms.push_back({sign * coeff, exponent});
  }
  return FracFunction(std::move(terms));
}

namespace {

struct Builtin {
  std::string description;
  std::function<double(double)> fn;
};

const std::map<std::string, Builtin>& builtins() {
  static const std::map<std::string, Builtin> table = {
      {"x^0.75+x^1.5", {"x^0.75 + x^1.5", [](double x) { return std::pow(x, 0.75) + std::pow(x, 1.5); }}},
      {"x^1.5", {"x^1.5", [](double x) { return std::pow(x, 1.5); }}},
      {"x^0.5-pi/4", {"x^0.5 - pi/4", [](double x) { return std::sqrt(x) - std::numbers::pi / 4.0; }}},
      {"x^3.5+x^4", {"x^3.5 + x^4", [](double x) { return std::pow(x, 3.5) + std::pow(x, 4.0); }}},
      {"population",
       {"E_1.39(0.013502 x^1.39), y0 = 1",
        [](double x) { return mittag_leffler(1.39, 0.013502 * std::pow(x, 1.39)); }}},
  };
  return table;
}

}  // namespace

std::function<double(double)> named_function(const std::string& name) {
  const auto& table = builtins();
  if (const auto it = table.find(name); it != table.end()) return it->second.fn;
  const FracFunction f = parse_frac_function(name);
  return [f](double x) { return f(x); };
}

std::vector<std::string> builtin_function_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : builtins()) names.push_back(k);
  return names;
}

std::pair<double, double> parse_interval(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError("interval must look like lo:hi, got '" + text + "'");
  const auto lo = to_double(parts[0]);
  const auto hi = to_double(parts[1]);
  if (!lo || !hi || !(*lo < *hi) || *lo < 0.0) {
    throw UsageError("interval must satisfy 0 <= lo < hi, got '" + text + "'");
  }
  return {*lo, *hi};
}

WeightSpec parse_weight(const std::string& text, double lo, double hi) {
  if (text == "unit") return WeightSpec::unit(lo, hi);
  const auto parts = split(text, ':');
  if (parts.size() == 3 && parts[0] == "jacobi") {
    const auto bl = to_double(parts[1]);
    const auto br = to_double(parts[2]);
    if (bl && br) return WeightSpec::jacobi(*bl, *br, lo, hi);
  }
  throw UsageError("weight must be 'unit' or 'jacobi:bl:br', got '" + text + "'");
}

json fit_to_json(const FitResult& fit) {
  json doc;
  doc["coeffs"] = fit.coeffs;
  doc["error"] = fit.error;
  doc["cond"] = fit.cond;
  doc["predictions"] = json::array();
  json diag;
  diag["basis"] = to_string(fit.basis);
  diag["lambda"] = fit.lambda;
  diag["interval"] = {fit.lo, fit.hi};
  diag["expansion"] = std::vector<double>(fit.expansion.coeffs().begin(), fit.expansion.coeffs().end());
  if (fit.orthogonal) {
    const auto& b = *fit.orthogonal;
    diag["recurrence"] = {
        {"mode", b.mode() == BasisMode::continuous ? "continuous" : "discrete"},
        {"B", std::vector<double>(b.b().begin(), b.b().end())},
        {"C", std::vector<double>(b.c().begin(), b.c().end())},
        {"sq_norms", std::vector<double>(b.sq_norms().begin(), b.sq_norms().end())},
    };
  }
  doc["diagnostics"] = std::move(diag);
  return doc;
}

FitResult fit_from_json(const json& doc) {
  try {
    const json& diag = doc.at("diagnostics");
    FitResult fit;
    const std::string basis = diag.at("basis").get<std::string>();
    if (basis == "monomial") {
      fit.basis = BasisKind::monomial;
    } else if (basis == "muntz_legendre") {
      fit.basis = BasisKind::muntz_legendre;
    } else if (basis == "orthogonal") {
      fit.basis = BasisKind::orthogonal;
    } else {
      throw UsageError("model: unknown basis '" + basis + "'");
    }
    fit.lambda = diag.at("lambda").get<double>();
    fit.coeffs = doc.at("coeffs").get<std::vector<double>>();
    fit.error = doc.at("error").get<double>();
    fit.cond = doc.at("cond").get<double>();
    const auto interval = diag.at("interval").get<std::vector<double>>();
    if (interval.size() != 2) throw UsageError("model: interval needs two entries");
    fit.lo = interval[0];
    fit.hi = interval[1];
    fit.expansion = FractionalPolynomial(fit.lambda, diag.at("expansion").get<std::vector<double>>());
    if (fit.basis == BasisKind::orthogonal) {
      const json& rec = diag.at("recurrence");
      const BasisMode mode =
          rec.at("mode").get<std::string>() == "continuous" ? BasisMode::continuous : BasisMode::discrete;
      fit.orthogonal = std::make_shared<const OrthogonalBasis>(OrthogonalBasis::from_recurrence(
          fit.lambda, mode, rec.at("B").get<std::vector<double>>(), rec.at("C").get<std::vector<double>>(),
          rec.at("sq_norms").get<std::vector<double>>()));
      if (fit.orthogonal->degree() + 1 != static_cast<int>(fit.coeffs.size())) {
        throw UsageError("model: recurrence and coefficients disagree in length");
      }
    }
    return fit;
  } catch (const json::exception& e) {
    throw UsageError(std::string("model: malformed document (") + e.what() + ")");
  }
}

namespace {

// Shared state for one invocation.
struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string out_path;

  void emit(const json& doc) const {
    if (out_path.empty()) {
      out << doc.dump(2) << '\n';
      return;
    }
    std::ofstream f(out_path);
    if (!f) throw UsageError(out_path + ": cannot write");
    f << doc.dump(2) << '\n';
  }
};

void write_curve(const std::string& path, const std::function<double(double)>& f, double lo,
                 double hi, int points) {
  std::ofstream os(path);
  if (!os) throw UsageError(path + ": cannot write");
  os << "x,y_fit\n";
  for (int k = 0; k < points; ++k) {
    const double x = points == 1 ? lo : lo + (hi - lo) * k / (points - 1);
    os << fmt17(x) << ',' << fmt17(f(x)) << '\n';
  }
}

json predictions(const FitResult& fit, const std::vector<double>& xs) {
  json arr = json::array();
  for (double x : xs) {
    if (x < 0.0) throw UsageError("prediction abscissae must be >= 0");
    arr.push_back({{"x", x}, {"y", fit.predict(x)}});
  }
  return arr;
}

BasisKind parse_basis(const std::string& s) {
  if (s == "monomial") return BasisKind::monomial;
  if (s == "muntz-legendre" || s == "muntz_legendre") return BasisKind::muntz_legendre;
  throw UsageError("basis must be monomial or muntz-legendre, got '" + s + "'");
}

QuadratureRule rule_for(const WeightSpec& weight, double lambda, int points) {
  if (points < 1 || points > kMaxQuadraturePoints) {
    throw UsageError("--quad-points must lie in [1, " + std::to_string(kMaxQuadraturePoints) + "]");
  }
  return default_rule(weight, lambda, points);
}

struct FitArgs {
  std::string data;
  std::string function;
  std::string interval = "0:1";
  std::vector<double> lambdas;
  int degree = 1;
  std::string method = "normal";
  std::string basis = "monomial";
  std::string weight = "unit";
  int quad_points = 64;
  std::vector<double> predict;
  std::string curve_out;
  int curve_points = 201;
};

int cmd_fit(const FitArgs& a, const Context& ctx) {
  if (a.data.empty() == a.function.empty()) {
    throw UsageError("fit: give exactly one of --data or --function");
  }
  if (a.method != "normal" && a.method != "projection") {
    throw UsageError("fit: --method must be normal or projection");
  }
  const bool discrete = !a.data.empty();
  DataSet data;
  std::function<double(double)> fn;
  auto [lo, hi] = parse_interval(a.interval);
  if (discrete) {
    data = read_csv_file(a.data);
    lo = *std::min_element(data.xs.begin(), data.xs.end());
    hi = *std::max_element(data.xs.begin(), data.xs.end());
  } else {
    fn = named_function(a.function);
  }
  const WeightSpec weight = parse_weight(a.weight, lo, hi);

  json results = json::array();
  for (double lambda : a.lambdas) {
    FitResult fit;
    if (a.method == "normal") {
      const BasisKind basis = parse_basis(a.basis);
      if (discrete) {
        fit = fit_discrete_normal(data, lambda, a.degree, basis);
      } else {
        fit = fit_continuous_normal(fn, lo, hi, lambda, a.degree, rule_for(weight, lambda, a.quad_points),
                                    basis);
      }
    } else if (discrete) {
      const std::vector<double> w = data.weights.empty() ? std::vector<double>(data.size(), 1.0) : data.weights;
      auto basis = std::make_shared<const OrthogonalBasis>(build_discrete(w, data.xs, lambda, a.degree));
      fit = fit_projection(data, basis);
    } else {
      auto basis = std::make_shared<const OrthogonalBasis>(
          build_continuous(weight, lambda, a.degree, rule_for(weight, lambda, a.quad_points)));
      fit = fit_projection(fn, basis);
    }
    json doc = fit_to_json(fit);
    doc["predictions"] = predictions(fit, a.predict);
    results.push_back(std::move(doc));
    if (!a.curve_out.empty()) {
      std::string path = a.curve_out;
      if (a.lambdas.size() > 1) path += ".lambda" + fmt17(lambda) + ".csv";
      write_curve(path, [&](double x) { return fit.predict(x); }, lo, hi, a.curve_points);
    }
  }
  json params = {{"lambda", a.lambdas},
                 {"degree", a.degree},
                 {"method", a.method},
                 {"basis", a.method == "normal" ? a.basis : "orthogonal"},
                 {"source", discrete ? a.data : a.function},
                 {"interval", {lo, hi}},
                 {"weight", a.weight}};
  if (!discrete) params["quad_points"] = a.quad_points;
  json doc;
  doc["job"] = "fit";
  doc["params"] = params;
  if (results.size() == 1) {
    for (auto& [k, v] : results[0].items()) doc[k] = v;
  } else {
    doc["coeffs"] = nullptr;
    doc["error"] = nullptr;
    doc["cond"] = nullptr;
    doc["predictions"] = nullptr;
    doc["diagnostics"] = {{"sweep", results}};
  }
  ctx.emit(doc);
  return kExitOk;
}

struct OrthArgs {
  double lambda = 1.0;
  int degree = 1;
  std::string weight = "unit";
  std::string interval = "0:1";
  std::string points;
  int quad_points = 64;
};

int cmd_orthpoly(const OrthArgs& a, const Context& ctx) {
  const auto [lo, hi] = parse_interval(a.interval);
  const WeightSpec weight = parse_weight(a.weight, lo, hi);
  std::optional<OrthogonalBasis> basis;
  if (a.points.empty()) {
    basis = build_continuous(weight, a.lambda, a.degree, rule_for(weight, a.lambda, a.quad_points));
  } else {
    const auto pts = read_points_file(a.points);
    std::vector<double> w(pts.size(), 1.0);
    if (const auto* jw = std::get_if<JacobiSingularWeight>(&weight.kind)) {
      for (std::size_t k = 0; k < pts.size(); ++k) {
        w[k] = std::pow(pts[k] - lo, jw->beta_left) * std::pow(hi - pts[k], jw->beta_right);
        if (!(w[k] > 0.0) || !std::isfinite(w[k])) {
          throw UsageError("orthpoly: weight is not positive and finite at x = " + fmt17(pts[k]));
        }
      }
    }
    basis = build_discrete(w, pts, a.lambda, a.degree);
  }
  json coeffs = json::array();
  for (const auto& p : basis->polys()) {
    coeffs.push_back(std::vector<double>(p.coeffs().begin(), p.coeffs().end()));
  }
  json doc = {
      {"job", "orthpoly"},
      {"params",
       {{"lambda", a.lambda},
        {"degree", a.degree},
        {"weight", a.weight},
        {"interval", {lo, hi}},
        {"mode", a.points.empty() ? "continuous" : "discrete"}}},
      {"coeffs", coeffs},
      {"error", nullptr},
      {"cond", 1.0},
      {"predictions", json::array()},
      {"diagnostics",
       {{"B", std::vector<double>(basis->b().begin(), basis->b().end())},
        {"C", std::vector<double>(basis->c().begin(), basis->c().end())},
        {"sq_norms", std::vector<double>(basis->sq_norms().begin(), basis->sq_norms().end())}}},
  };
  if (!a.points.empty()) doc["params"]["points"] = a.points;
  ctx.emit(doc);
  return kExitOk;
}

struct FdeArgs {
  std::vector<double> alpha;
  std::vector<double> coeff;
  double reaction = 0.0;
  std::string rhs;
  std::string rhs_function;
  std::string exact;
  double y0 = 0.0;
  double interval_end = 1.0;
  std::vector<double> lambdas;
  int degree = 2;
  std::string basis = "monomial";
  int quad_points = 0;
  std::vector<double> predict;
  double eval_at = 1.0;
  std::string curve_out;
  int curve_points = 201;
};

int cmd_solve_fde(const FdeArgs& a, const Context& ctx) {
  FdeProblem prob;
  if (a.alpha.empty()) throw UsageError("solve-fde: --alpha is required");
  if (!a.coeff.empty() && a.coeff.size() != a.alpha.size()) {
    throw UsageError("solve-fde: --coeff needs one value per --alpha");
  }
  for (std::size_t m = 0; m < a.alpha.size(); ++m) {
    prob.terms.push_back({a.alpha[m], a.coeff.empty() ? 1.0 : a.coeff[m]});
  }
  prob.reaction = a.reaction;
  prob.initial_value = a.y0;
  prob.interval_end = a.interval_end;
  const int given = static_cast<int>(!a.rhs.empty()) + static_cast<int>(!a.rhs_function.empty());
  if (given > 1 || (given == 0 && a.exact.empty())) {
    throw UsageError("solve-fde: give one of --rhs or --rhs-function, or derive f from --exact");
  }
  std::optional<FracFunction> exact;
  if (!a.exact.empty()) exact = parse_frac_function(a.exact);
  if (!a.rhs.empty()) {
    prob.rhs = parse_frac_function(a.rhs);
  } else if (!a.rhs_function.empty()) {
    prob.rhs = named_function(a.rhs_function);
  } else {
    prob.rhs = apply_operator(prob, *exact);
    prob.initial_value = static_cast<double>(exact->evaluate(0.0L));
  }
  std::optional<QuadratureRule> rule;
  if (a.quad_points > 0) {
    if (a.quad_points > kMaxQuadraturePoints) throw UsageError("solve-fde: too many --quad-points");
    rule = gauss_legendre(a.quad_points, 0.0, a.interval_end);
  }
  const BasisKind basis = parse_basis(a.basis);

  json results = json::array();
  for (double lambda : a.lambdas) {
    const FdeSolution sol = solve_fde(prob, lambda, a.degree, basis, rule);
    json doc = fit_to_json(sol.fit);
    doc["predictions"] = predictions(sol.fit, a.predict);
    json terms = json::array();
    for (const auto& t : sol.solution.terms()) {
      terms.push_back({static_cast<double>(t.coeff), static_cast<double>(t.exponent)});
    }
    doc["diagnostics"]["solution_terms"] = terms;
    doc["diagnostics"]["quadrature"] = sol.quadrature;
    doc["diagnostics"]["rank"] = sol.rank;
    if (exact) {
      const FracFunction ex = *exact;
      doc["diagnostics"]["abs_error"] = {
          {"x", a.eval_at}, {"value", fde_abs_error(sol, [ex](double x) { return ex(x); }, a.eval_at)}};
    }
    results.push_back(std::move(doc));
    if (!a.curve_out.empty()) {
      std::string path = a.curve_out;
      if (a.lambdas.size() > 1) path += ".lambda" + fmt17(lambda) + ".csv";
      write_curve(path, [&](double x) { return static_cast<double>(sol.solution.evaluate(x)); }, 0.0,
                  a.interval_end, a.curve_points);
    }
  }
  json doc;
  doc["job"] = "solve-fde";
  doc["params"] = {{"alpha", a.alpha},       {"coeff", a.coeff.empty() ? std::vector<double>(a.alpha.size(), 1.0) : a.coeff},
                   {"reaction", a.reaction}, {"y0", prob.initial_value},
                   {"interval", {0.0, a.interval_end}},
                   {"lambda", a.lambdas},    {"degree", a.degree},
                   {"basis", a.basis}};
  if (results.size() == 1) {
    for (auto& [k, v] : results[0].items()) doc[k] = v;
  } else {
    doc["coeffs"] = nullptr;
    doc["error"] = nullptr;
    doc["cond"] = nullptr;
    doc["predictions"] = nullptr;
    doc["diagnostics"] = {{"sweep", results}};
  }
  ctx.emit(doc);
  return kExitOk;
}

struct PriceArgs {
  LsmcJob job;
  std::vector<double> lambdas{1.0};
  int workers = 1;
};

int cmd_price(const PriceArgs& a, const Context& ctx) {
  a.job.gbm.validate();
  const PathMatrix paths = simulate_paths(a.job.gbm, a.workers);
  json rows = json::array();
  for (double lambda : a.lambdas) {
    LsmcJob job = a.job;
    job.lambda = lambda;
    const LsmcResult r = price_american_put(job, paths);
    rows.push_back({{"lambda", lambda},
                    {"price", r.price},
                    {"std_error", r.std_error},
                    {"european_price", r.european_price},
                    {"european_std_error", r.european_std_error},
                    {"premium_std_error", r.premium_std_error},
                    {"exercise_at_start", r.exercise_at_start},
                    {"skipped_dates", r.skipped_dates}});
  }
  const auto& g = a.job.gbm;
  json doc = {{"job", "price"},
              {"params",
               {{"s0", g.s0},
                {"rate", g.r},
                {"sigma", g.sigma},
                {"horizon", g.horizon},
                {"steps", g.steps},
                {"paths", g.paths},
                {"seed", g.seed},
                {"strike", a.job.strike},
                {"lambda", a.lambdas},
                {"basis_degree", a.job.basis_degree}}},
              {"coeffs", nullptr},
              {"error", nullptr},
              {"cond", nullptr},
              {"predictions", rows},
              {"diagnostics", {{"workers", a.workers}}}};
  ctx.emit(doc);
  return kExitOk;
}

struct ReproduceArgs {
  std::vector<std::string> ids;
  bool qualitative = false;
  std::uint64_t seed = ReproduceOptions{}.seed;
  int workers = 1;
};

int cmd_reproduce(const ReproduceArgs& a, const Context& ctx) {
  const auto known = reproducible_tables();
  std::vector<std::string> ids = a.ids;
  if (ids.size() == 1 && ids[0] == "all") {
    ids.clear();
    for (const auto& id : known) {
      if (!is_qualitative_only(id) || a.qualitative) ids.push_back(id);
    }
  }
  for (const auto& id : ids) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw UsageError("reproduce: unsupported table '" + id + "'");
    }
    if (is_qualitative_only(id) && !a.qualitative) {
      throw UsageError("reproduce: " + id + " is only available with --qualitative");
    }
  }
  ReproduceOptions opts;
  opts.qualitative = a.qualitative;
  opts.seed = a.seed;
  opts.workers = a.workers;
  bool all = true;
  json tables = json::array();
  for (const auto& id : ids) {
    const TableReport rep = reproduce_table(id, opts);
    print_report(rep, ctx.out);
    all = all && rep.passed();
    json rows = json::array();
    for (const auto& c : rep.rows) {
      rows.push_back({{"label", c.label},
                      {"reference", std::isnan(c.reference) ? json(nullptr) : json(c.reference)},
                      {"computed", std::isfinite(c.computed) ? json(c.computed) : json(nullptr)},
                      {"tolerance", c.tolerance},
                      {"status", c.status == CheckStatus::pass   ? "PASS"
                                 : c.status == CheckStatus::fail ? "FAIL"
                                                                 : "INFO"}});
    }
    tables.push_back({{"id", rep.id}, {"title", rep.title}, {"passed", rep.passed()}, {"rows", rows},
                      {"notes", rep.notes}});
  }
  if (!ctx.out_path.empty()) {
    json doc = {{"job", "reproduce"},
                {"params", {{"tables", ids}, {"qualitative", a.qualitative}, {"seed", a.seed}}},
                {"coeffs", nullptr},
                {"error", nullptr},
                {"cond", nullptr},
                {"predictions", nullptr},
                {"diagnostics", {{"tables", tables}, {"all_passed", all}}}};
    ctx.emit(doc);
  }
  return all ? kExitOk : kExitMismatch;
}

struct NoiseArgs {
  std::string data;
  double percent = 5.0;
  std::uint64_t seed = 1;
  std::string model = "relative";
};

int cmd_noise(const NoiseArgs& a, const Context& ctx) {
  const DataSet data = read_csv_file(a.data);
  NoiseModel model = NoiseModel::relative;
  if (a.model == "absolute") {
    model = NoiseModel::absolute;
  } else if (a.model != "relative") {
    throw UsageError("noise: --model must be relative or absolute");
  }
  const DataSet noisy = add_noise(data, a.percent, a.seed, model);
  if (ctx.out_path.empty()) {
    write_csv(ctx.out, noisy);
  } else {
    std::ofstream f(ctx.out_path);
    if (!f) throw UsageError(ctx.out_path + ": cannot write");
    write_csv(f, noisy);
  }
  return kExitOk;
}

struct PredictArgs {
  std::string model;
  std::vector<double> xs;
  int index = 0;
};

int cmd_predict(const PredictArgs& a, const Context& ctx) {
  std::ifstream in(a.model);
  if (!in) throw UsageError(a.model + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(a.model + ": invalid JSON (" + e.what() + ")");
  }
  const json* model = &doc;
  if (doc.contains("diagnostics") && doc["diagnostics"].contains("sweep")) {
    const json& sweep = doc["diagnostics"]["sweep"];
    if (a.index < 0 || a.index >= static_cast<int>(sweep.size())) {
      throw UsageError("predict: --index out of range");
    }
    model = &sweep[static_cast<std::size_t>(a.index)];
  }
  const FitResult fit = fit_from_json(*model);
  json out = {{"job", "predict"},
              {"params", {{"model", a.model}, {"index", a.index}}},
              {"coeffs", fit.coeffs},
              {"error", fit.error},
              {"cond", fit.cond},
              {"predictions", predictions(fit, a.xs)},
              {"diagnostics", json::object()}};
  ctx.emit(out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fracls: least squares in Muntz spaces of fractional monomials"};
  app.require_subcommand(1);
  std::string out_path;

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit data (CSV x,y[,w]) or a named function");
  fit_cmd->add_option("--data", fit.data, "CSV file with header x,y[,w]");
  fit_cmd->add_option("--function", fit.function, "built-in function name or power-sum expression");
  fit_cmd->add_option("--interval", fit.interval, "lo:hi for function fits")->capture_default_str();
  fit_cmd->add_option("--lambda", fit.lambdas, "step lambda, comma list for a sweep")->delimiter(',')->required();
  fit_cmd->add_option("--degree", fit.degree, "n, the space is M_n^lambda")->capture_default_str();
  fit_cmd->add_option("--method", fit.method, "normal | projection")->capture_default_str();
  fit_cmd->add_option("--basis", fit.basis, "monomial | muntz-legendre (normal method)")->capture_default_str();
  fit_cmd->add_option("--weight", fit.weight, "unit | jacobi:bl:br")->capture_default_str();
  fit_cmd->add_option("--quad-points", fit.quad_points, "quadrature size for function fits")->capture_default_str();
  fit_cmd->add_option("--predict", fit.predict, "abscissae to evaluate the fit at")->delimiter(',');
  fit_cmd->add_option("--out", out_path, "write the JSON document here instead of stdout");
  fit_cmd->add_option("--curve-out", fit.curve_out, "CSV of x,y_fit samples");
  fit_cmd->add_option("--curve-points", fit.curve_points)->capture_default_str();

  OrthArgs orth;
  auto* orth_cmd = app.add_subcommand("orthpoly", "build a weight-orthogonal fractional basis");
  orth_cmd->add_option("--lambda", orth.lambda)->required();
  orth_cmd->add_option("--degree", orth.degree)->capture_default_str();
  orth_cmd->add_option("--weight", orth.weight, "unit | jacobi:bl:br")->capture_default_str();
  orth_cmd->add_option("--interval", orth.interval)->capture_default_str();
  orth_cmd->add_option("--points", orth.points, "points file: discrete basis over these abscissae");
  orth_cmd->add_option("--quad-points", orth.quad_points)->capture_default_str();
  orth_cmd->add_option("--out", out_path);

  FdeArgs fde;
  auto* fde_cmd = app.add_subcommand("solve-fde", "solve sum_m c_m D^alpha_m y + r y = f, y(0) = y0");
  fde_cmd->add_option("--alpha", fde.alpha, "Caputo orders in (0,1)")->delimiter(',')->required();
  fde_cmd->add_option("--coeff", fde.coeff, "coefficients of the derivative terms (default 1)")->delimiter(',');
  fde_cmd->add_option("--reaction", fde.reaction)->capture_default_str();
  fde_cmd->add_option("--rhs", fde.rhs, "right-hand side as a power sum, e.g. '1.128*x^0.5'");
  fde_cmd->add_option("--rhs-function", fde.rhs_function, "right-hand side by built-in name");
  fde_cmd->add_option("--exact", fde.exact, "exact solution power sum; derives f and y0");
  fde_cmd->add_option("--y0", fde.y0)->capture_default_str();
  fde_cmd->add_option("--interval-end", fde.interval_end)->capture_default_str();
  fde_cmd->add_option("--lambda", fde.lambdas)->delimiter(',')->required();
  fde_cmd->add_option("--degree", fde.degree)->capture_default_str();
  fde_cmd->add_option("--basis", fde.basis, "monomial | muntz-legendre")->capture_default_str();
  fde_cmd->add_option("--quad-points", fde.quad_points, "Gauss-Legendre size (default: exact rule)");
  fde_cmd->add_option("--predict", fde.predict)->delimiter(',');
  fde_cmd->add_option("--eval-at", fde.eval_at, "abscissa for the absolute error with --exact")
      ->capture_default_str();
  fde_cmd->add_option("--out", out_path);
  fde_cmd->add_option("--curve-out", fde.curve_out);
  fde_cmd->add_option("--curve-points", fde.curve_points)->capture_default_str();

  PriceArgs price;
  auto* price_cmd = app.add_subcommand("price", "American put by least-squares Monte Carlo");
  price_cmd->add_option("--s0", price.job.gbm.s0)->capture_default_str();
  price_cmd->add_option("--rate", price.job.gbm.r)->capture_default_str();
  price_cmd->add_option("--sigma", price.job.gbm.sigma)->capture_default_str();
  price_cmd->add_option("--horizon", price.job.gbm.horizon, "years")->capture_default_str();
  price_cmd->add_option("--steps", price.job.gbm.steps)->capture_default_str();
  price_cmd->add_option("--paths", price.job.gbm.paths)->capture_default_str();
  price_cmd->add_option("--seed", price.job.gbm.seed)->capture_default_str();
  price_cmd->add_option("--strike", price.job.strike)->capture_default_str();
  price_cmd->add_option("--lambda", price.lambdas)->delimiter(',')->capture_default_str();
  price_cmd->add_option("--basis-degree", price.job.basis_degree)->capture_default_str();
  price_cmd->add_option("--workers", price.workers)->capture_default_str();
  price_cmd->add_option("--out", out_path);

  ReproduceArgs rep;
  auto* rep_cmd = app.add_subcommand("reproduce", "recompute the published tables (T1 T2 T4 T6 T7 T8 T9 T10 | all)");
  rep_cmd->add_option("tables", rep.ids)->required();
  rep_cmd->add_flag("--qualitative", rep.qualitative, "include seeded-noise rows and T7");
  rep_cmd->add_option("--seed", rep.seed)->capture_default_str();
  rep_cmd->add_option("--workers", rep.workers)->capture_default_str();
  rep_cmd->add_option("--out", out_path, "also write a JSON report");

  NoiseArgs noise;
  auto* noise_cmd = app.add_subcommand("noise", "add seeded Gaussian noise to a CSV data set");
  noise_cmd->add_option("--data", noise.data)->required();
  noise_cmd->add_option("--percent", noise.percent)->capture_default_str();
  noise_cmd->add_option("--seed", noise.seed)->capture_default_str();
  noise_cmd->add_option("--model", noise.model, "relative | absolute")->capture_default_str();
  noise_cmd->add_option("--out", out_path);

  PredictArgs pred;
  auto* pred_cmd = app.add_subcommand("predict", "evaluate a saved fit document");
  pred_cmd->add_option("--model", pred.model)->required();
  pred_cmd->add_option("--x", pred.xs)->delimiter(',')->required();
  pred_cmd->add_option("--index", pred.index, "entry of a lambda sweep")->capture_default_str();
  pred_cmd->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const Context ctx{out, err, out_path};
  try {
    if (*fit_cmd) return cmd_fit(fit, ctx);
    if (*orth_cmd) return cmd_orthpoly(orth, ctx);
    if (*fde_cmd) return cmd_solve_fde(fde, ctx);
    if (*price_cmd) return cmd_price(price, ctx);
    if (*rep_cmd) return cmd_reproduce(rep, ctx);
    if (*noise_cmd) return cmd_noise(noise, ctx);
    if (*pred_cmd) return cmd_predict(pred, ctx);
  } catch (const NumericalError& e) {
    err << "fracls: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConvergenceError& e) {
    err << "fracls: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const EvaluationError& e) {
    err << "fracls: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "fracls: input error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace fracls::cli
