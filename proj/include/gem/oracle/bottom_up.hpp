#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gem/policy/term.hpp"

namespace gem {

class NegationCycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsafeNegationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Predicates are keyed as "name/arity".
struct DependencyEdge {
  std::string to;
  bool negative = false;

  friend auto operator<=>(const DependencyEdge&, const DependencyEdge&) = default;
};

class GlobalPolicy {
 public:
  explicit GlobalPolicy(std::vector<Policy> policies);

  const std::vector<Policy>& policies() const { return policies_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  // head predicate -> body predicates
  const std::map<std::string, std::set<DependencyEdge>>& dependencies() const { return deps_; }

  // Strata (lowest first) over the predicates reachable from `root`.
  // Throws NegationCycleError if a negative edge lies on a cycle.
  std::vector<std::set<std::string>> stratify(const std::string& root) const;

 private:
  std::vector<Policy> policies_;
  std::vector<Clause> clauses_;
  std::map<std::string, std::set<DependencyEdge>> deps_;
};

std::string predicate_key(const Atom& atom);

enum class Strategy { semi_naive, naive };

// Least model restricted to the predicates the goal depends on, as a set of
// subsumption-maximal atoms keyed by predicate.
std::map<std::string, std::vector<Atom>> bottom_up_model(const GlobalPolicy& gp, const Atom& goal,
                                                         Strategy strategy = Strategy::semi_naive);

std::vector<Atom> bottom_up_answers(const GlobalPolicy& gp, const Atom& goal,
                                    Strategy strategy = Strategy::semi_naive);

struct EquivalenceReport {
  bool equal = true;
  std::vector<Atom> missing;     // derivable but not returned
  std::vector<Atom> unexpected;  // returned but not derivable

  std::string describe() const;
};

// Compares the subsumption-maximal parts of both sets up to variance.
EquivalenceReport check_equivalence(const std::vector<Atom>& gem_answers,
                                    const std::vector<Atom>& oracle_answers);

std::vector<Atom> maximal_atoms(const std::vector<Atom>& atoms);

}  // namespace gem
