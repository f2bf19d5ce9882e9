#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "gem/engine/messages.hpp"
#include "gem/policy/term.hpp"

namespace gem {

enum class NodeStatus { fresh, active, loop, answer, disposed };

const char* to_string(NodeStatus status);

struct TreeNode {
  static constexpr std::size_t kRoot = static_cast<std::size_t>(-1);

  RequestId id;
  Clause clause;
  NodeStatus status = NodeStatus::fresh;
  std::set<RequestId> loop_ids;  // meaningful for loop status only
  std::size_t parent = kRoot;
  bool negation = false;  // waiting on the request for a not(B) literal
};

struct AnswerEntry {
  Atom atom;
  std::set<RequestId> recipients;
};

struct GoalTable {
  Atom goal;
  std::string key;
  std::optional<Request> hr;
  std::vector<Request> lr;
  std::map<RequestId, std::int64_t> active_goals;
  std::vector<AnswerEntry> ans_set;
  TreeNode root;
  std::vector<TreeNode> nodes;  // non-root nodes in creation order
  bool floundered = false;

  bool disposed() const { return root.status == NodeStatus::disposed; }
  bool completed() const { return disposed() && !floundered; }
  std::size_t tagged(const RequestId& loop) const;

  // Scan hints; nodes are only appended and never return to fresh.
  std::size_t first_fresh = 0;
  bool goal_answered = false;
  std::unordered_set<std::string> ground_answers;
  std::vector<std::size_t> general_answers;
};

std::string render(const GoalTable& table);

}  // namespace gem
