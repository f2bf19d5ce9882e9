#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "gem/policy/term.hpp"

namespace gem {

// Kept in idempotent form: no bound variable occurs in any binding's value.
class Substitution {
 public:
  const Term* lookup(const std::string& var) const;
  // Returns false if var is already bound to something different.
  bool bind(const std::string& var, const Term& value);

  Term apply(const Term& term) const;
  Atom apply(const Atom& atom) const;
  Literal apply(const Literal& literal) const;
  Clause apply(const Clause& clause) const;

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::string, Term>& bindings() const { return bindings_; }

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<std::string, Term> bindings_;
};

// Variable-variable pairs bind b's variable to a's term.
std::optional<Substitution> unify(const Atom& a, const Atom& b);

// True iff general·σ = specific for some σ over general's variables.
bool subsumes(const Atom& general, const Atom& specific);
bool is_variant(const Atom& a, const Atom& b);

// Canonical text shared by all variants of an atom.
std::string variant_key(const Atom& atom);

// Renames the variables of a clause that collide with `avoid`. A clashing
// variable X becomes X<n> for the next counter value n that yields an unused
// name; the counter only moves forward.
class VariableRenamer {
 public:
  Clause rename_apart(const Clause& clause, const std::set<std::string>& avoid);
  Atom rename_apart(const Atom& atom, const std::set<std::string>& avoid);

 private:
  std::string fresh(const std::string& base, const std::set<std::string>& taken);

  std::uint64_t counter_ = 0;
};

}  // namespace gem
