#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gem {

struct RunMetrics {
  std::string id;
  std::size_t princ = 0;
  std::size_t tab = 0;
  std::size_t clauses = 0;
  std::size_t req = 0;
  std::size_t loops = 0;
  std::size_t resp = 0;
  std::size_t resp_with_answers = 0;
  std::size_t ans = 0;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

enum class ReportFormat { table, csv };

// Columns: ID, Princ, Tab, Clauses, Req, Loops, Resp(Resp&Ans), Ans. The csv
// form splits the combined column into Resp and Resp&Ans.
std::string emit_report(const std::vector<RunMetrics>& rows, ReportFormat format);

// Quotes a csv field when needed. Fields that a spreadsheet would evaluate
// as a formula get a leading apostrophe.
std::string csv_field(const std::string& value);

}  // namespace gem
