#include "gem/oracle/bottom_up.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "gem/policy/unify.hpp"

namespace gem {

std::string predicate_key(const Atom& atom) {
  return atom.predicate + "/" + std::to_string(atom.arity());
}

GlobalPolicy::GlobalPolicy(std::vector<Policy> policies) : policies_(std::move(policies)) {
  for (const auto& p : policies_) {
    for (const auto& c : p.clauses) {
      clauses_.push_back(c);
      auto& edges = deps_[predicate_key(c.head)];
      for (const auto& lit : c.body) edges.insert({predicate_key(lit.atom), lit.negated});
    }
  }
}

std::vector<std::set<std::string>> GlobalPolicy::stratify(const std::string& root) const {
  // Tarjan's algorithm; components come out dependencies first.
  std::map<std::string, std::size_t> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::set<std::string>> components;
  std::size_t counter = 0;
  static const std::set<DependencyEdge> kNone;

  auto edges_of = [&](const std::string& p) -> const std::set<DependencyEdge>& {
    auto it = deps_.find(p);
    return it == deps_.end() ? kNone : it->second;
  };

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& e : edges_of(v)) {
      if (!index.contains(e.to)) {
        visit(e.to);
        low[v] = std::min(low[v], low[e.to]);
      } else if (on_stack.contains(e.to)) {
        low[v] = std::min(low[v], index[e.to]);
      }
    }
    if (low[v] == index[v]) {
      std::set<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.insert(w);
      } while (w != v);
      components.push_back(std::move(comp));
    }
  };
  visit(root);

  for (const auto& comp : components) {
    for (const auto& p : comp) {
      for (const auto& e : edges_of(p)) {
        if (e.negative && comp.contains(e.to)) {
          throw NegationCycleError("negation cycle through " + p + " and " + e.to);
        }
      }
    }
  }
  return components;
}

namespace {

class Relation {
 public:
  bool insert(const Atom& atom) {
    if (atom.is_ground()) {
      std::string key = to_string(atom);
      if (ground_.contains(key)) return false;
      for (std::size_t i : general_) {
        if (subsumes(facts_[i], atom)) return false;
      }
      ground_.insert(std::move(key));
    } else {
      for (const auto& f : facts_) {
        if (subsumes(f, atom)) return false;
      }
      general_.push_back(facts_.size());
    }
    facts_.push_back(atom);
    return true;
  }

  const std::vector<Atom>& facts() const { return facts_; }

 private:
  std::vector<Atom> facts_;
  std::unordered_set<std::string> ground_;
  std::vector<std::size_t> general_;
};

using Model = std::map<std::string, Relation>;

class Evaluator {
 public:
  explicit Evaluator(Model& model) : model_(model) {}

  // Derives head instances of `clause`. If delta_pos is set, the positive
  // literal at that body position ranges over `delta` only.
  void fire(const Clause& clause, std::optional<std::size_t> delta_pos,
            const std::vector<Atom>* delta, std::vector<Atom>& out) {
    std::vector<std::size_t> positives, negatives;
    for (std::size_t i = 0; i < clause.body.size(); ++i) {
      (clause.body[i].negated ? negatives : positives).push_back(i);
    }
    Substitution theta;
    join(clause, positives, negatives, 0, delta_pos, delta, theta, out);
  }

 private:
  Atom fresh_copy(const Atom& fact) {
    if (fact.is_ground()) return fact;
    Substitution s;
    for (const auto& t : fact.args) {
      if (t.is_variable() && !s.lookup(t.name())) {
        s.bind(t.name(), Term::variable("_#" + std::to_string(++fresh_)));
      }
    }
    return s.apply(fact);
  }

  void join(const Clause& clause, const std::vector<std::size_t>& positives,
            const std::vector<std::size_t>& negatives, std::size_t k,
            std::optional<std::size_t> delta_pos, const std::vector<Atom>* delta,
            const Substitution& theta, std::vector<Atom>& out) {
    if (k == positives.size()) {
      for (std::size_t i : negatives) {
        Atom b = theta.apply(clause.body[i].atom);
        if (!b.is_ground()) {
          throw UnsafeNegationError("negated literal " + to_string(b) + " is not ground");
        }
        auto it = model_.find(predicate_key(b));
        if (it == model_.end()) continue;
        for (const auto& f : it->second.facts()) {
          if (subsumes(f, b)) return;
        }
      }
      out.push_back(theta.apply(clause.head));
      return;
    }
    std::size_t pos = positives[k];
    Atom lit = theta.apply(clause.body[pos].atom);
    const std::vector<Atom>* source = nullptr;
    if (delta_pos && *delta_pos == pos) {
      source = delta;
    } else {
      auto it = model_.find(predicate_key(lit));
      if (it == model_.end()) return;
      source = &it->second.facts();
    }
    // Index-based: the vector is not modified during a firing.
    for (std::size_t i = 0; i < source->size(); ++i) {
      Atom fact = fresh_copy((*source)[i]);
      auto sigma = unify(lit, fact);
      if (!sigma) continue;
      Substitution next = theta;
      for (const auto& [var, term] : sigma->bindings()) next.bind(var, term);
      join(clause, positives, negatives, k + 1, delta_pos, delta, next, out);
    }
  }

  Model& model_;
  std::uint64_t fresh_ = 0;
};

}  // namespace

std::map<std::string, std::vector<Atom>> bottom_up_model(const GlobalPolicy& gp, const Atom& goal,
                                                         Strategy strategy) {
  Model model;
  Evaluator eval(model);
  for (const auto& stratum : gp.stratify(predicate_key(goal))) {
    std::vector<const Clause*> rules;
    for (const auto& c : gp.clauses()) {
      if (stratum.contains(predicate_key(c.head))) rules.push_back(&c);
    }
    auto add_all = [&](const std::vector<Atom>& derived, std::map<std::string, std::vector<Atom>>* delta) {
      bool changed = false;
      for (const auto& a : derived) {
        std::string key = predicate_key(a);
        if (model[key].insert(a)) {
          changed = true;
          if (delta) (*delta)[key].push_back(a);
        }
      }
      return changed;
    };

    if (strategy == Strategy::naive) {
      bool changed = true;
      while (changed) {
        std::vector<Atom> derived;
        for (const Clause* c : rules) eval.fire(*c, std::nullopt, nullptr, derived);
        changed = add_all(derived, nullptr);
      }
      continue;
    }

    std::map<std::string, std::vector<Atom>> delta;
    {
      std::vector<Atom> derived;
      for (const Clause* c : rules) eval.fire(*c, std::nullopt, nullptr, derived);
      add_all(derived, &delta);
    }
    while (!delta.empty()) {
      std::vector<Atom> derived;
      for (const Clause* c : rules) {
        for (std::size_t i = 0; i < c->body.size(); ++i) {
          const Literal& lit = c->body[i];
          if (lit.negated) continue;
          auto d = delta.find(predicate_key(lit.atom));
          if (d == delta.end()) continue;
          eval.fire(*c, i, &d->second, derived);
        }
      }
      std::map<std::string, std::vector<Atom>> next;
      add_all(derived, &next);
      delta = std::move(next);
    }
  }
  std::map<std::string, std::vector<Atom>> out;
  for (const auto& [key, rel] : model) out[key] = maximal_atoms(rel.facts());
  return out;
}

std::vector<Atom> bottom_up_answers(const GlobalPolicy& gp, const Atom& goal, Strategy strategy) {
  auto model = bottom_up_model(gp, goal, strategy);
  std::vector<Atom> answers;
  auto it = model.find(predicate_key(goal));
  if (it == model.end()) return answers;
  std::set<std::string> goal_vars;
  collect_variables(goal, goal_vars);
  VariableRenamer renamer;
  for (const auto& fact : it->second) {
    Atom renamed = renamer.rename_apart(fact, goal_vars);
    if (auto theta = unify(goal, renamed)) answers.push_back(theta->apply(goal));
  }
  return maximal_atoms(answers);
}

std::vector<Atom> maximal_atoms(const std::vector<Atom>& atoms) {
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    bool dominated = false;
    for (const auto& b : atoms) {
      if (&a != &b && subsumes(b, a) && !subsumes(a, b)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    if (std::none_of(out.begin(), out.end(), [&](const Atom& o) { return is_variant(o, a); })) {
      out.push_back(a);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Atom& x, const Atom& y) { return to_string(x) < to_string(y); });
  return out;
}

EquivalenceReport check_equivalence(const std::vector<Atom>& gem_answers,
                                    const std::vector<Atom>& oracle_answers) {
  EquivalenceReport report;
  auto lhs = maximal_atoms(gem_answers);
  auto rhs = maximal_atoms(oracle_answers);
  auto contains = [](const std::vector<Atom>& set, const Atom& a) {
    return std::any_of(set.begin(), set.end(), [&](const Atom& b) { return is_variant(a, b); });
  };
  for (const auto& a : rhs) {
    if (!contains(lhs, a)) report.missing.push_back(a);
  }
  for (const auto& a : lhs) {
    if (!contains(rhs, a)) report.unexpected.push_back(a);
  }
  report.equal = report.missing.empty() && report.unexpected.empty();
  return report;
}

std::string EquivalenceReport::describe() const {
  if (equal) return "equal";
  std::string out;
  for (const auto& a : missing) out += "missing " + to_string(a) + "\n";
  for (const auto& a : unexpected) out += "unexpected " + to_string(a) + "\n";
  return out;
}

}  // namespace gem
