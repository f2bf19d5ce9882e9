#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gem/harness/scenario.hpp"
#include "gem/policy/parser.hpp"

namespace gem::testing {

struct RandomPolicyLimits {
  int max_principals = 6;
  int max_clauses = 15;
  int max_body = 3;
  int max_constants = 4;
};

// Seeded random positive global policy. Every body atom has a ground
// location when selected: either a principal constant, or a variable bound
// by an earlier link/2 atom whose facts only name principals. Rules are
// range restricted so answers are ground.
inline Scenario random_positive_scenario(std::uint64_t seed, RandomPolicyLimits limits = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  int n_principals = pick(2, limits.max_principals);
  int n_constants = pick(1, limits.max_constants);
  std::vector<std::string> principals;
  for (int i = 0; i < n_principals; ++i) principals.push_back("p" + std::to_string(i));
  std::vector<std::string> constants;
  for (int i = 0; i < n_constants; ++i) constants.push_back(std::string(1, static_cast<char>('a' + i)));
  // Predicates r/2 and s/3 carry data; link/2 names principals.
  struct Pred {
    std::string name;
    int arity;
  };
  const std::vector<Pred> preds{{"r", 2}, {"s", 3}};
  const std::vector<std::string> vars{"X", "Y", "Z"};

  std::vector<std::vector<std::string>> clauses(principals.size());
  int n_clauses = pick(1, limits.max_clauses);
  for (int c = 0; c < n_clauses; ++c) {
    std::size_t owner = static_cast<std::size_t>(pick(0, n_principals - 1));
    const std::string& me = principals[owner];
    int kind = pick(0, 19);
    if (kind < 3) {
      clauses[owner].push_back("link(" + me + "," +
                               principals[static_cast<std::size_t>(pick(0, n_principals - 1))] + ").");
      continue;
    }
    const Pred& head = preds[static_cast<std::size_t>(pick(0, 1))];
    int body_len = kind < 10 ? 0 : pick(1, limits.max_body);
    if (body_len == 0) {
      std::string fact = head.name + "(" + me;
      for (int i = 1; i < head.arity; ++i) {
        fact += "," + constants[static_cast<std::size_t>(pick(0, n_constants - 1))];
      }
      clauses[owner].push_back(fact + ").");
      continue;
    }
    std::vector<std::string> body;
    std::set<std::string> bound;
    std::set<std::string> locations;  // variables bound to principal names
    for (int b = 0; b < body_len; ++b) {
      bool use_link = pick(0, 4) == 0 && b + 1 < body_len;
      std::string loc;
      if (!locations.empty() && pick(0, 1) == 0) {
        loc = *locations.begin();
      } else {
        loc = principals[static_cast<std::size_t>(pick(0, n_principals - 1))];
      }
      if (use_link) {
        std::string v = "L" + std::to_string(b);
        body.push_back("link(" + loc + "," + v + ")");
        locations.insert(v);
        continue;
      }
      const Pred& p = preds[static_cast<std::size_t>(pick(0, 1))];
      std::string atom = p.name + "(" + loc;
      for (int i = 1; i < p.arity; ++i) {
        if (pick(0, 5) == 0) {
          atom += "," + constants[static_cast<std::size_t>(pick(0, n_constants - 1))];
        } else {
          std::string v = vars[static_cast<std::size_t>(pick(0, 2))];
          bound.insert(v);
          atom += "," + v;
        }
      }
      body.push_back(atom + ")");
    }
    std::string text = head.name + "(" + me;
    for (int i = 1; i < head.arity; ++i) {
      if (!bound.empty() && pick(0, 9) != 0) {
        auto it = bound.begin();
        std::advance(it, pick(0, static_cast<int>(bound.size()) - 1));
        text += "," + *it;
      } else {
        text += "," + constants[static_cast<std::size_t>(pick(0, n_constants - 1))];
      }
    }
    text += ") :- ";
    for (std::size_t i = 0; i < body.size(); ++i) text += (i ? ", " : "") + body[i];
    clauses[owner].push_back(text + ".");
  }

  std::string scenario = "[principal h]\n";
  for (std::size_t i = 0; i < principals.size(); ++i) {
    scenario += "[principal " + principals[i] + "]\n";
    for (const auto& c : clauses[i]) scenario += c + "\n";
  }
  // Ask for a predicate some principal defines, when there is one.
  std::vector<std::pair<std::size_t, std::size_t>> defined;
  for (std::size_t i = 0; i < principals.size(); ++i) {
    for (std::size_t k = 0; k < preds.size(); ++k) {
      for (const auto& c : clauses[i]) {
        if (c.rfind(preds[k].name + "(", 0) == 0) {
          defined.emplace_back(i, k);
          break;
        }
      }
    }
  }
  std::size_t goal_owner = static_cast<std::size_t>(pick(0, n_principals - 1));
  std::size_t goal_pred = static_cast<std::size_t>(pick(0, 1));
  if (!defined.empty()) {
    std::tie(goal_owner, goal_pred) = defined[static_cast<std::size_t>(
        pick(0, static_cast<int>(defined.size()) - 1))];
  }
  const Pred& goal = preds[goal_pred];
  std::string goal_text = goal.name + "(" + principals[goal_owner];
  for (int i = 1; i < goal.arity; ++i) {
    goal_text += pick(0, 4) == 0 ? "," + constants[0] : std::string(i == 1 ? ",X" : ",Y");
  }
  scenario += "[request]\nrequester = h\ngoal = " + goal_text + ")\n";
  return parse_scenario(scenario, "random_" + std::to_string(seed));
}

}  // namespace gem::testing
