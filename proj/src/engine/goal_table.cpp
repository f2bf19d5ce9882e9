#include "gem/engine/goal_table.hpp"

namespace gem {

const char* to_string(NodeStatus status) {
  switch (status) {
    case NodeStatus::fresh: return "new";
    case NodeStatus::active: return "active";
    case NodeStatus::loop: return "loop";
    case NodeStatus::answer: return "answer";
    case NodeStatus::disposed: return "disposed";
  }
  return "?";
}

std::size_t GoalTable::tagged(const RequestId& loop) const {
  std::size_t n = 0;
  for (const auto& node : nodes) {
    if (node.status == NodeStatus::loop && node.loop_ids.contains(loop)) ++n;
  }
  return n;
}

namespace {

std::string render_node(const TreeNode& node) {
  std::string status = to_string(node.status);
  if (node.status == NodeStatus::loop) status += to_string(node.loop_ids);
  std::string clause = to_string(node.clause);
  clause.pop_back();
  return "(" + node.id.to_string() + "," + clause + "," + status + ")";
}

}  // namespace

std::string render(const GoalTable& table) {
  std::string out = "HR ";
  out += table.hr ? to_string(*table.hr) : "null";
  out += "\nLR {";
  for (std::size_t i = 0; i < table.lr.size(); ++i) {
    if (i > 0) out += ",";
    out += to_string(table.lr[i]);
  }
  out += "}\nActiveGoals {";
  bool first = true;
  for (const auto& [id, count] : table.active_goals) {
    if (!first) out += ",";
    first = false;
    out += "(" + id.to_string() + "," + std::to_string(count) + ")";
  }
  out += "}\nAnsSet {";
  for (std::size_t i = 0; i < table.ans_set.size(); ++i) {
    if (i > 0) out += ",";
    out += "(" + to_string(table.ans_set[i].atom) + "," + to_string(table.ans_set[i].recipients) +
           ")";
  }
  out += "}\nTree " + render_node(table.root) + "\n";
  for (const auto& node : table.nodes) out += "     " + render_node(node) + "\n";
  return out;
}

}  // namespace gem
