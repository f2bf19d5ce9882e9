#include "gem/harness/scenario.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gem/policy/parser.hpp"

namespace gem {

ScenarioError::ScenarioError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

const PrincipalSpec* Scenario::find(const std::string& name) const {
  for (const auto& p : principals) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::size_t Scenario::clause_count() const {
  std::size_t n = 0;
  for (const auto& p : principals) n += p.policy.clauses.size();
  return n;
}

std::vector<Policy> Scenario::policies() const {
  std::vector<Policy> out;
  for (const auto& p : principals) out.push_back(p.policy);
  return out;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\'' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '%' && !quoted) return line.substr(0, i);
  }
  return line;
}

// key = value items, separated by newlines or commas outside parentheses.
std::vector<std::pair<std::string, std::size_t>> split_items(const std::string& line,
                                                             std::size_t line_no) {
  std::vector<std::pair<std::string, std::size_t>> items;
  std::string cur;
  int depth = 0;
  bool quoted = false;
  for (char c : line) {
    if (c == '\'') quoted = !quoted;
    if (!quoted && c == '(') ++depth;
    if (!quoted && c == ')') --depth;
    if (!quoted && depth == 0 && c == ',') {
      items.emplace_back(trim(cur), line_no);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) items.emplace_back(trim(cur), line_no);
  return items;
}

std::uint64_t parse_number(const std::string& value, std::size_t line) {
  try {
    std::size_t used = 0;
    auto n = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return n;
  } catch (const std::exception&) {
    throw ScenarioError(line, "expected a number, found '" + value + "'");
  }
}

void apply_config(Scenario& s, const std::string& key, const std::string& value, std::size_t line,
                  std::map<std::string, std::pair<TcpEndpoint, std::size_t>>& addresses) {
  if (key == "ids") {
    if (value == "traceable") {
      s.ids.traceability = Traceability::traceable;
    } else if (value == "untraceable") {
      s.ids.traceability = Traceability::untraceable;
    } else {
      throw ScenarioError(line, "ids must be traceable or untraceable");
    }
  } else if (key == "length") {
    if (value == "fixed") {
      s.ids.length = SegmentLength::fixed;
    } else if (value == "variable") {
      s.ids.length = SegmentLength::variable;
    } else {
      throw ScenarioError(line, "length must be fixed or variable");
    }
  } else if (key == "segment_length") {
    s.ids.fixed_length = parse_number(value, line);
    if (s.ids.fixed_length == 0) throw ScenarioError(line, "segment_length must be positive");
  } else if (key == "scheduler") {
    if (value == "fifo") {
      s.scheduler = Scheduler::fifo;
    } else if (value == "random") {
      s.scheduler = Scheduler::random;
    } else {
      throw ScenarioError(line, "scheduler must be fifo or random");
    }
  } else if (key == "seed") {
    s.seed = parse_number(value, line);
  } else if (key.rfind("address ", 0) == 0) {
    std::string who = trim(key.substr(8));
    try {
      addresses[who] = {parse_endpoint(value), line};
    } catch (const std::exception& e) {
      throw ScenarioError(line, e.what());
    }
  } else {
    throw ScenarioError(line, "unknown config key '" + key + "'");
  }
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string name) {
  Scenario s;
  s.name = std::move(name);
  enum class Section { none, config, principal, request } section = Section::none;
  std::string policy_text;
  std::size_t policy_line = 0;
  std::string current_principal;
  std::map<std::string, std::pair<TcpEndpoint, std::size_t>> addresses;
  std::optional<std::pair<std::string, std::size_t>> goal_text;
  std::size_t request_line = 0;
  bool have_request = false;

  auto flush_policy = [&] {
    if (section != Section::principal) return;
    try {
      Policy p = parse_policy(policy_text, current_principal, policy_line);
      s.principals.push_back({current_principal, std::move(p), std::nullopt});
    } catch (const ParseError& e) {
      throw ScenarioError(e.line(), "in principal " + current_principal + ": " + e.what());
    }
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (!line.empty() && line.front() == '[') {
      if (line.back() != ']') throw ScenarioError(line_no, "unterminated section header");
      flush_policy();
      std::string header = trim(line.substr(1, line.size() - 2));
      if (header == "config") {
        section = Section::config;
      } else if (header == "request") {
        if (have_request) throw ScenarioError(line_no, "duplicate [request] section");
        have_request = true;
        request_line = line_no;
        section = Section::request;
      } else if (header.rfind("principal", 0) == 0 && header.size() > 9 &&
                 std::isspace(static_cast<unsigned char>(header[9]))) {
        current_principal = trim(header.substr(9));
        if (current_principal.empty()) throw ScenarioError(line_no, "principal without a name");
        if (s.find(current_principal)) {
          throw ScenarioError(line_no, "principal " + current_principal + " declared twice");
        }
        policy_text.clear();
        policy_line = line_no + 1;
        section = Section::principal;
      } else {
        throw ScenarioError(line_no, "unknown section [" + header + "]");
      }
      continue;
    }
    switch (section) {
      case Section::principal:
        // Keep comments out but preserve line structure for error positions.
        policy_text += strip_comment(raw);
        policy_text += '\n';
        break;
      case Section::none:
        if (!line.empty()) throw ScenarioError(line_no, "text outside any section");
        break;
      case Section::config:
      case Section::request:
        for (const auto& [item, at] : split_items(line, line_no)) {
          auto eq = item.find('=');
          if (eq == std::string::npos) throw ScenarioError(at, "expected key = value");
          std::string key = trim(item.substr(0, eq));
          std::string value = trim(item.substr(eq + 1));
          if (section == Section::config) {
            apply_config(s, key, value, at, addresses);
          } else if (key == "requester") {
            s.requester = value;
          } else if (key == "goal") {
            goal_text = {value, at};
          } else {
            throw ScenarioError(at, "unknown request key '" + key + "'");
          }
        }
        break;
    }
  }
  flush_policy();

  if (!have_request) throw ScenarioError(0, "missing [request] section");
  if (s.requester.empty()) throw ScenarioError(request_line, "request lacks a requester");
  if (!goal_text) throw ScenarioError(request_line, "request lacks a goal");
  try {
    s.goal = parse_atom(goal_text->first);
  } catch (const ParseError& e) {
    throw ScenarioError(goal_text->second, std::string("bad goal: ") + e.what());
  }
  for (auto& [who, entry] : addresses) {
    bool found = false;
    for (auto& p : s.principals) {
      if (p.name == who) {
        p.address = entry.first;
        found = true;
      }
    }
    if (!found) throw ScenarioError(entry.second, "address for undeclared principal " + who);
  }
  validate(s);
  return s;
}

void validate(Scenario& s) {
  std::set<std::string> names;
  for (const auto& p : s.principals) {
    if (!names.insert(p.name).second) throw ScenarioError(0, "principal " + p.name + " declared twice");
    if (p.policy.owner != p.name) {
      throw ScenarioError(0, "policy of " + p.name + " is owned by " + p.policy.owner);
    }
  }
  if (!names.contains(s.requester)) {
    throw ScenarioError(0, "requester " + s.requester + " is not a declared principal");
  }
  const Term& loc = s.goal.location();
  if (loc.is_variable()) throw ScenarioError(0, "goal location must be a constant");
  if (!names.contains(loc.name())) {
    throw ScenarioError(0, "goal location " + loc.name() + " is not a declared principal");
  }
  s.warnings.clear();
  for (const auto& p : s.principals) {
    for (const auto& c : p.policy.clauses) {
      if (c.head.location().is_variable() || c.head.location().name() != p.name) {
        throw ScenarioError(0, "clause " + to_string(c) + " is not owned by " + p.name);
      }
      if (c.is_fact() && !c.head.is_ground()) {
        s.warnings.push_back("non-ground fact " + to_string(c) + " at " + p.name);
      }
      for (const auto& lit : c.body) {
        const Term& at = lit.atom.location();
        if (at.is_constant() && !names.contains(at.name())) {
          throw ScenarioError(0, "clause " + to_string(c) + " at " + p.name +
                                     " refers to undeclared principal " + at.name());
        }
      }
    }
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(0, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str(), path.stem().string());
  } catch (const ScenarioError& e) {
    throw ScenarioError(e.line(), path.string() + ": " + e.what());
  }
}

std::string write_scenario(const Scenario& s) {
  std::string out = "% " + s.name + "\n[config]\n";
  out += "ids = ";
  out += s.ids.traceability == Traceability::traceable ? "traceable" : "untraceable";
  out += "\nlength = ";
  out += s.ids.length == SegmentLength::fixed ? "fixed" : "variable";
  out += "\n";
  if (s.ids.length == SegmentLength::fixed) {
    out += "segment_length = " + std::to_string(s.ids.fixed_length) + "\n";
  }
  out += "scheduler = ";
  out += s.scheduler == Scheduler::fifo ? "fifo" : "random";
  out += "\nseed = " + std::to_string(s.seed) + "\n";
  for (const auto& p : s.principals) {
    if (p.address) {
      out += "address " + p.name + " = " + p.address->host + ":" +
             std::to_string(p.address->port) + "\n";
    }
  }
  for (const auto& p : s.principals) {
    out += "\n[principal " + p.name + "]\n";
    out += pretty_print(p.policy);
  }
  out += "\n[request]\nrequester = " + s.requester + "\ngoal = " + to_string(s.goal) + "\n";
  return out;
}

}  // namespace gem
