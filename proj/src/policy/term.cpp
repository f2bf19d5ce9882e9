#include "gem/policy/term.hpp"

#include <cctype>
#include <stdexcept>

namespace gem {

namespace {

bool is_bare_symbol(std::string_view s) {
  if (s.empty()) return false;
  unsigned char first = static_cast<unsigned char>(s.front());
  if (!std::islower(first) && !std::isdigit(first)) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

std::string quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

std::string symbol_text(std::string_view s) {
  return is_bare_symbol(s) ? std::string(s) : quote(s);
}

}  // namespace

Term Term::variable(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  return Term(Kind::variable, std::move(name));
}

Term Term::constant(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty constant name");
  return Term(Kind::constant, std::move(name));
}

bool Atom::is_ground() const {
  for (const auto& t : args) {
    if (t.is_variable()) return false;
  }
  return true;
}

void collect_variables(const Atom& atom, std::set<std::string>& out) {
  for (const auto& t : atom.args) {
    if (t.is_variable()) out.insert(t.name());
  }
}

void collect_variables(const Clause& clause, std::set<std::string>& out) {
  collect_variables(clause.head, out);
  for (const auto& lit : clause.body) collect_variables(lit.atom, out);
}

std::set<std::string> variables_of(const Clause& clause) {
  std::set<std::string> out;
  collect_variables(clause, out);
  return out;
}

std::string to_string(const Term& term) {
  if (term.is_variable()) return term.name();
  return symbol_text(term.name());
}

std::string to_string(const Atom& atom) {
  std::string out = symbol_text(atom.predicate);
  out += '(';
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i > 0) out += ',';
    out += to_string(atom.args[i]);
  }
  out += ')';
  return out;
}

std::string to_string(const Literal& literal) {
  if (literal.negated) return "not(" + to_string(literal.atom) + ")";
  return to_string(literal.atom);
}

std::string to_string(const Clause& clause) {
  std::string out = to_string(clause.head);
  for (std::size_t i = 0; i < clause.body.size(); ++i) {
    out += i == 0 ? " :- " : ", ";
    out += to_string(clause.body[i]);
  }
  out += '.';
  return out;
}

std::string pretty_print(const Policy& policy) {
  std::string out;
  for (const auto& c : policy.clauses) {
    out += to_string(c);
    out += '\n';
  }
  return out;
}

}  // namespace gem

std::size_t std::hash<gem::Atom>::operator()(const gem::Atom& atom) const noexcept {
  std::size_t h = std::hash<std::string>{}(atom.predicate);
  for (const auto& t : atom.args) {
    std::size_t th = std::hash<std::string>{}(t.name()) ^ (t.is_variable() ? 0x9e3779b97f4a7c15ULL : 0);
    h ^= th + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}
