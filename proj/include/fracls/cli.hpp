#pragma once

#include <functional>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fracls/fractional_calculus.hpp"
#include "fracls/least_squares.hpp"
#include "fracls/orthogonal_basis.hpp"

namespace fracls::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the fracls tool. Result documents go to `out`, messages to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// CSV with header `x,y` or `x,y,w`. Errors name the source, line and column.
DataSet read_csv(std::istream& in, const std::string& source);
DataSet read_csv_file(const std::string& path);
void write_csv(std::ostream& os, const DataSet& data);

/// One abscissa per line; blank lines and lines starting with '#' are skipped.
std::vector<double> read_points_file(const std::string& path);

/// Parses "2.5*x^0.5 - x + 3" style sums of power terms.
FracFunction parse_frac_function(std::string_view text);

/// Built-in test functions by name, or any expression accepted by parse_frac_function.
std::function<double(double)> named_function(const std::string& name);
std::vector<std::string> builtin_function_names();

/// "lo:hi"
std::pair<double, double> parse_interval(const std::string& text);
/// "unit" or "jacobi:beta_left:beta_right"
WeightSpec parse_weight(const std::string& text, double lo, double hi);

/// Insertion-ordered so documents read job, params, coeffs, error, cond, predictions, diagnostics.
using Json = nlohmann::ordered_json;

Json fit_to_json(const FitResult& fit);
FitResult fit_from_json(const Json& doc);

}  // namespace fracls::cli
