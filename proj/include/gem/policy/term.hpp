#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gem {

class Term {
 public:
  enum class Kind : unsigned char { variable, constant };

  static Term variable(std::string name);
  static Term constant(std::string name);

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::variable; }
  bool is_constant() const { return kind_ == Kind::constant; }
  const std::string& name() const { return name_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
};

// args[0] is the location of the atom.
struct Atom {
  std::string predicate;
  std::vector<Term> args;

  const Term& location() const { return args.front(); }
  std::size_t arity() const { return args.size(); }
  bool is_ground() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Literal {
  Atom atom;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

struct Clause {
  Atom head;
  std::vector<Literal> body;

  bool is_fact() const { return body.empty(); }

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct Policy {
  std::string owner;
  std::vector<Clause> clauses;

  friend bool operator==(const Policy&, const Policy&) = default;
};

void collect_variables(const Atom& atom, std::set<std::string>& out);
void collect_variables(const Clause& clause, std::set<std::string>& out);
std::set<std::string> variables_of(const Clause& clause);

// Surface syntax, parseable by the policy parser.
std::string to_string(const Term& term);
std::string to_string(const Atom& atom);
std::string to_string(const Literal& literal);
std::string to_string(const Clause& clause);
std::string pretty_print(const Policy& policy);

}  // namespace gem

template <>
struct std::hash<gem::Atom> {
  std::size_t operator()(const gem::Atom& atom) const noexcept;
};
