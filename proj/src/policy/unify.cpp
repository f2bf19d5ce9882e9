#include "gem/policy/unify.hpp"

#include <unordered_map>

namespace gem {

const Term* Substitution::lookup(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

bool Substitution::bind(const std::string& var, const Term& value) {
  Term resolved = apply(value);
  if (const Term* existing = lookup(var)) return *existing == resolved;
  if (resolved.is_variable() && resolved.name() == var) return true;
  for (auto& [name, term] : bindings_) {
    if (term.is_variable() && term.name() == var) term = resolved;
  }
  bindings_.emplace(var, resolved);
  return true;
}

Term Substitution::apply(const Term& term) const {
  if (!term.is_variable()) return term;
  const Term* bound = lookup(term.name());
  return bound ? *bound : term;
}

Atom Substitution::apply(const Atom& atom) const {
  Atom out{atom.predicate, {}};
  out.args.reserve(atom.args.size());
  for (const auto& t : atom.args) out.args.push_back(apply(t));
  return out;
}

Literal Substitution::apply(const Literal& literal) const {
  return Literal{apply(literal.atom), literal.negated};
}

Clause Substitution::apply(const Clause& clause) const {
  Clause out{apply(clause.head), {}};
  out.body.reserve(clause.body.size());
  for (const auto& lit : clause.body) out.body.push_back(apply(lit));
  return out;
}

std::optional<Substitution> unify(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate || a.arity() != b.arity()) return std::nullopt;
  Substitution s;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    Term x = s.apply(a.args[i]);
    Term y = s.apply(b.args[i]);
    if (x == y) continue;
    if (y.is_variable()) {
      s.bind(y.name(), x);
    } else if (x.is_variable()) {
      s.bind(x.name(), y);
    } else {
      return std::nullopt;
    }
  }
  return s;
}

bool subsumes(const Atom& general, const Atom& specific) {
  if (general.predicate != specific.predicate || general.arity() != specific.arity()) {
    return false;
  }
  std::unordered_map<std::string, const Term*> bindings;
  for (std::size_t i = 0; i < general.arity(); ++i) {
    const Term& g = general.args[i];
    const Term& t = specific.args[i];
    if (g.is_variable()) {
      auto [it, inserted] = bindings.emplace(g.name(), &t);
      if (!inserted && *it->second != t) return false;
    } else if (g != t) {
      return false;
    }
  }
  return true;
}

bool is_variant(const Atom& a, const Atom& b) {
  return subsumes(a, b) && subsumes(b, a);
}

std::string variant_key(const Atom& atom) {
  std::string out = atom.predicate;
  out += '/';
  out += std::to_string(atom.arity());
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& t : atom.args) {
    out += '|';
    if (t.is_variable()) {
      auto [it, inserted] = seen.emplace(t.name(), seen.size());
      out += '?';
      out += std::to_string(it->second);
    } else {
      out += '=';
      out += t.name();
    }
  }
  return out;
}

std::string VariableRenamer::fresh(const std::string& base, const std::set<std::string>& taken) {
  std::string name;
  do {
    name = base + std::to_string(++counter_);
  } while (taken.contains(name));
  return name;
}

Clause VariableRenamer::rename_apart(const Clause& clause, const std::set<std::string>& avoid) {
  std::set<std::string> vars = variables_of(clause);
  std::set<std::string> taken = avoid;
  taken.insert(vars.begin(), vars.end());
  Substitution s;
  for (const auto& v : vars) {
    if (!avoid.contains(v)) continue;
    std::string name = fresh(v, taken);
    taken.insert(name);
    s.bind(v, Term::variable(name));
  }
  return s.empty() ? clause : s.apply(clause);
}

Atom VariableRenamer::rename_apart(const Atom& atom, const std::set<std::string>& avoid) {
  return rename_apart(Clause{atom, {}}, avoid).head;
}

}  // namespace gem
