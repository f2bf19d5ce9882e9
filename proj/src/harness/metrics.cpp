#include "gem/harness/metrics.hpp"

#include <algorithm>
#include <array>

namespace gem {

std::string csv_field(const std::string& value) {
  std::string v = value;
  if (!v.empty() && (v[0] == '=' || v[0] == '+' || v[0] == '-' || v[0] == '@')) v = "'" + v;
  if (v.find_first_of(",\"\r\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string emit_report(const std::vector<RunMetrics>& rows, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out = "ID,Princ,Tab,Clauses,Req,Loops,Resp,Resp&Ans,Ans\n";
    for (const auto& r : rows) {
      out += csv_field(r.id);
      for (std::size_t v : {r.princ, r.tab, r.clauses, r.req, r.loops, r.resp,
                            r.resp_with_answers, r.ans}) {
        out += "," + std::to_string(v);
      }
      out += "\n";
    }
    return out;
  }

  using Row = std::array<std::string, 8>;
  std::vector<Row> cells;
  cells.push_back({"ID", "Princ", "Tab", "Clauses", "Req", "Loops", "Resp(Resp&Ans)", "Ans"});
  for (const auto& r : rows) {
    cells.push_back({r.id, std::to_string(r.princ), std::to_string(r.tab),
                     std::to_string(r.clauses), std::to_string(r.req), std::to_string(r.loops),
                     std::to_string(r.resp) + " (" + std::to_string(r.resp_with_answers) + ")",
                     std::to_string(r.ans)});
  }
  std::array<std::size_t, 8> width{};
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) line += "  ";
      // ID left-aligned, numbers right-aligned.
      std::string pad(width[i] - row[i].size(), ' ');
      line += i == 0 ? row[i] + pad : pad + row[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

}  // namespace gem
