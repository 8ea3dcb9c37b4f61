#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace eqbk {

enum class TheoremId {
  L1,
  UNIFORM,
  DECAY,
  MORSE,
  OFFDIAG,
  EXPANSION,
  EQMEASURE,
  LELONG,
  DIVISOR_RADIUS,
  REGULARITY,
};

std::string_view to_string(TheoremId id);

struct ReportRow {
  int k;
  double error;
  std::vector<double> aux;  // aligned with ConvergenceReport::aux_names
};

/// Per-k verification rows for one asymptotic statement, plus the verdict
/// and the human-readable criterion it was judged by.
struct ConvergenceReport {
  TheoremId id;
  std::string criterion;
  std::vector<std::string> aux_names;
  std::vector<ReportRow> rows;
  bool pass = false;

  /// Columns: k, error, then the aux columns in declared order.
  /// 17 significant digits, '.' decimal, ',' separator.
  void write_csv(std::ostream& out) const;
  std::string csv() const;

  nlohmann::json to_json() const;  // {"schema":1, theorem_id, criterion, rows, verdict}
};

/// Locale-independent shortest-faithful formatting used by all CSV output.
std::string format_double(double x);

}  // namespace eqbk
