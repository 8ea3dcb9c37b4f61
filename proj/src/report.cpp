#include "eqbk/report.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace eqbk {

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::L1: return "L1";
    case TheoremId::UNIFORM: return "UNIFORM";
    case TheoremId::DECAY: return "DECAY";
    case TheoremId::MORSE: return "MORSE";
    case TheoremId::OFFDIAG: return "OFFDIAG";
    case TheoremId::EXPANSION: return "EXPANSION";
    case TheoremId::EQMEASURE: return "EQMEASURE";
    case TheoremId::LELONG: return "LELONG";
    case TheoremId::DIVISOR_RADIUS: return "DIVISOR_RADIUS";
    case TheoremId::REGULARITY: return "REGULARITY";
  }
  return "UNKNOWN";
}

std::string format_double(double x) {
  // 17 significant digits round-trip doubles exactly; to_chars ignores the
  // locale so the decimal separator is always '.'.
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void ConvergenceReport::write_csv(std::ostream& out) const {
  out << "k,error";
  for (const auto& name : aux_names) out << ',' << name;
  out << '\n';
  for (const auto& row : rows) {
    out << row.k << ',' << format_double(row.error);
    for (double a : row.aux) out << ',' << format_double(a);
    out << '\n';
  }
}

std::string ConvergenceReport::csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

nlohmann::json ConvergenceReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json aux = nlohmann::json::object();
    for (size_t i = 0; i < aux_names.size() && i < row.aux.size(); ++i)
      aux[aux_names[i]] = row.aux[i];
    rows_json.push_back({{"k", row.k}, {"error", row.error}, {"aux", aux}});
  }
  return nlohmann::json{{"schema", 1},
                        {"theorem_id", std::string(to_string(id))},
                        {"criterion", criterion},
                        {"rows", rows_json},
                        {"verdict", pass ? "pass" : "fail"}};
}

}  // namespace eqbk
