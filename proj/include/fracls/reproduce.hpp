#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fracls {

enum class CheckStatus { pass, fail, info };

/// One published figure against its recomputed value.
struct Comparison {
  std::string label;
  double reference;  // NaN when no figure is published for this row
  double computed;
  std::string tolerance;
  CheckStatus status;
};

struct TableReport {
  std::string id;
  std::string title;
  std::vector<Comparison> rows;
  std::vector<std::string> notes;

  bool passed() const;
};

struct ReproduceOptions {
  bool qualitative = false;
  std::uint64_t seed = 20240501;
  int workers = 1;
};

/// Table ids accepted by reproduce_table.
std::vector<std::string> reproducible_tables();
bool is_qualitative_only(const std::string& id);

/// Recomputes one of the published tables. Throws UsageError for unknown ids and for
/// qualitative-only tables requested without opts.qualitative.
TableReport reproduce_table(const std::string& id, const ReproduceOptions& opts = {});

void print_report(const TableReport& report, std::ostream& os);

}  // namespace fracls
