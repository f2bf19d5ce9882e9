#include "gem/engine/principal_engine.hpp"

#include <algorithm>

namespace gem {

namespace {

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string render_answers(const std::vector<Atom>& answers) {
  std::string out = "{";
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (i > 0) out += ",";
    out += to_string(answers[i]);
  }
  return out + "}";
}

}  // namespace

PrincipalEngine::PrincipalEngine(Policy policy, EngineOptions options)
    : policy_(std::move(policy)),
      options_(options),
      ids_(policy_.owner, options.ids, options.seed) {}

std::vector<Message> PrincipalEngine::handle(const Payload& payload) {
  if (const auto* r = std::get_if<Request>(&payload)) return process_request(*r);
  return process_response(std::get<Response>(payload));
}

Message PrincipalEngine::issue_query(const Atom& goal) {
  RequestId id = ids_.fresh_root();
  emitted_.push_back(id);
  queries_[id] = QueryOutcome{goal, {}, false, false, {}};
  return Message{goal.location().name(), Request{id, principal(), goal}};
}

std::vector<Message> PrincipalEngine::process_request(const Request& request) {
  Out out;
  log(Procedure::process_request, request.goal, paren(to_string(request)));
  const Term& loc = request.goal.location();
  if (loc.is_variable() || loc.name() != principal()) {
    throw std::invalid_argument("request " + to_string(request) + " delivered to " + principal());
  }

  std::string key = variant_key(request.goal);
  auto it = by_key_.find(key);
  if (it != by_key_.end()) {
    const KeyIndex& index = it->second;
    if (!index.completed.empty()) {
      std::size_t ti = *index.completed.begin();
      ++stats_.cached_replies;
      Request to{request.id, request.requester, tables_[ti].goal};
      send_response(ti, to, ResponseStatus::disposed(), {}, out);
      return out;
    }
    if (!index.floundered.empty()) {
      std::size_t ti = *index.floundered.begin();
      ++stats_.cached_replies;
      Request to{request.id, request.requester, tables_[ti].goal};
      send_response(ti, to, ResponseStatus::floundered("goal " + to_string(tables_[ti].goal) +
                                                       " floundered"),
                    {}, out);
      return out;
    }
    // Nested loops can leave several live variant tables on one branch; the
    // nearest one (longest higher-request id) owns the loop.
    std::optional<std::size_t> owner;
    if (!index.live.empty()) {
      std::vector<std::size_t> prefixes = prefix_hashes(request.id);
      for (std::size_t d = prefixes.size() - 1; d-- > 0 && !owner;) {
        auto [lo, hi] = index.live.equal_range(prefixes[d]);
        for (auto jt = lo; jt != hi; ++jt) {
          const auto& t = tables_[jt->second];
          if (t.hr->id.depth() == d + 1 && is_lower(request.id, t.hr->id)) {
            owner = jt->second;
            break;
          }
        }
      }
    }
    if (owner) {
      GoalTable& t = tables_[*owner];
      Request lower{request.id, request.requester, t.goal};
      t.lr.push_back(lower);
      ++stats_.loops_detected;
      send_response(*owner, lower, ResponseStatus::active(), {t.hr->id}, out);
      return out;
    }
  }
  create_table(request, out);
  return out;
}

void PrincipalEngine::create_table(const Request& request, Out& out) {
  log(Procedure::create_table, request.goal, paren(to_string(request)));
  std::size_t ti = tables_.size();
  tables_.emplace_back();
  ++stats_.tables_created;
  GoalTable& t = tables_.back();
  t.goal = request.goal;
  t.key = variant_key(request.goal);
  t.hr = request;
  t.root.id = request.id;
  t.root.clause = Clause{request.goal, {Literal{request.goal, false}}};
  by_key_[t.key].live.emplace(std::hash<RequestId>{}(request.id), ti);

  std::set<std::string> goal_vars;
  collect_variables(request.goal, goal_vars);
  for (const auto& clause : policy_.clauses) {
    if (clause.head.predicate != request.goal.predicate ||
        clause.head.arity() != request.goal.arity()) {
      continue;
    }
    Clause renamed = renamer_.rename_apart(clause, goal_vars);
    auto theta = unify(request.goal, renamed.head);
    if (!theta) continue;
    add_node(ti, TreeNode::kRoot, theta->apply(renamed));
  }
  activate_node(ti, out);
}

std::size_t PrincipalEngine::add_node(std::size_t ti, std::size_t parent, Clause clause) {
  GoalTable& t = tables_[ti];
  TreeNode node;
  node.id = new_id(t.root.id);
  check(is_lower(node.id, t.root.id), "child id " + node.id.to_string() + " not below root");
  node.clause = std::move(clause);
  node.parent = parent;
  std::size_t ni = t.nodes.size();
  node_index_.emplace(node.id, std::make_pair(ti, ni));
  t.nodes.push_back(std::move(node));
  return ni;
}

void PrincipalEngine::add_answer(GoalTable& t, const Atom& answer) {
  bool ground = answer.is_ground();
  std::string text = ground ? to_string(answer) : std::string();
  if (ground && t.ground_answers.contains(text)) return;
  for (std::size_t ai : t.general_answers) {
    if (subsumes(t.ans_set[ai].atom, answer)) return;
  }
  if (ground) {
    t.ground_answers.insert(std::move(text));
  } else {
    t.general_answers.push_back(t.ans_set.size());
  }
  t.ans_set.push_back(AnswerEntry{answer, {}});
  if (is_variant(answer, t.goal)) t.goal_answered = true;
}

bool PrincipalEngine::outstanding_request(const GoalTable& t) const {
  return std::any_of(t.nodes.begin(), t.nodes.end(),
                     [](const TreeNode& n) { return n.status == NodeStatus::active; });
}

void PrincipalEngine::activate_node(std::size_t ti, Out& out) {
  while (true) {
    GoalTable& t = tables_[ti];
    log(Procedure::activate_node, t.goal, paren(to_string(t.goal)));
    if (t.disposed()) return;
    while (t.first_fresh < t.nodes.size() && t.nodes[t.first_fresh].status != NodeStatus::fresh) {
      ++t.first_fresh;
    }
    if (t.first_fresh == t.nodes.size() || t.goal_answered) {
      if (!t.goal_answered && outstanding_request(t)) {
        ++stats_.deferred_responses;
        return;
      }
      generate_response(ti, out);
      return;
    }
    if (t.root.status == NodeStatus::fresh) t.root.status = NodeStatus::active;
    TreeNode& n = t.nodes[t.first_fresh];
    if (n.clause.body.empty()) {
      n.status = NodeStatus::answer;
      add_answer(t, n.clause.head);
      continue;
    }
    const Literal& selected = n.clause.body.front();
    if (selected.atom.location().is_variable()) {
      flounder(ti, "non-ground location in " + to_string(selected), out);
      return;
    }
    if (selected.negated) {
      if (!selected.atom.is_ground()) {
        flounder(ti, "non-ground negated literal " + to_string(selected), out);
        return;
      }
      n.negation = true;
    }
    n.status = NodeStatus::active;
    out.push_back(Message{selected.atom.location().name(),
                          Request{n.id, principal(), selected.atom}});
    return;
  }
}

bool PrincipalEngine::unsent_to_lower(const GoalTable& t) const {
  for (const auto& entry : t.ans_set) {
    for (const auto& r : t.lr) {
      if (!entry.recipients.contains(r.id)) return true;
    }
  }
  return false;
}

void PrincipalEngine::generate_response(std::size_t ti, Out& out) {
  GoalTable& t = tables_[ti];
  log(Procedure::generate_response, t.goal, paren(to_string(t.goal)));
  bool looping = std::any_of(t.nodes.begin(), t.nodes.end(),
                             [](const TreeNode& n) { return n.status == NodeStatus::loop; });
  if (!looping) {
    terminate(ti, out);
    return;
  }
  const RequestId id1 = t.root.id;
  if (!t.lr.empty() && unsent_to_lower(t)) {
    // New iteration of the loop this goal coordinates.
    t.active_goals[id1] = static_cast<std::int64_t>(t.tagged(id1));
    if (t.root.status != NodeStatus::loop) t.root.loop_ids.clear();
    t.root.status = NodeStatus::loop;
    t.root.loop_ids.insert(id1);
    // Snapshot: requests that join LR while responding wait for the next
    // iteration.
    const std::vector<Request> lower = t.lr;
    for (const auto& r : lower) send_response(ti, r, ResponseStatus::loop(id1), {}, out);
    return;
  }
  bool leader = !t.active_goals.empty() &&
                std::all_of(t.active_goals.begin(), t.active_goals.end(),
                            [&](const auto& kv) { return kv.first == id1; });
  if (leader) {
    terminate(ti, out);
    return;
  }
  std::set<RequestId> loops;
  for (auto& [id3, counter] : t.active_goals) {
    if (!is_lower(id1, id3)) continue;
    loops.insert(id3);
    counter = static_cast<std::int64_t>(t.tagged(id3));
    check(counter > 0, "goal " + to_string(t.goal) + " reports loop " + id3.to_string() +
                           " without a node in it");
  }
  std::optional<RequestId> id4;
  if (t.root.status == NodeStatus::loop) {
    // Prefer the innermost loop being processed.
    for (const auto& id : t.root.loop_ids) {
      if (is_lower(id1, id) && (!id4 || id4->depth() < id.depth())) id4 = id;
    }
  }
  ResponseStatus status = id4 ? ResponseStatus::loop(*id4) : ResponseStatus::active();
  check(t.hr.has_value(), "generate response without higher request");
  const Request hr = *t.hr;
  send_response(ti, hr, status, loops, out);
  t.root.status = NodeStatus::active;
  t.root.loop_ids.clear();
}

void PrincipalEngine::send_response(std::size_t ti, const Request& to, const ResponseStatus& status,
                                    const std::set<RequestId>& loops, Out& out) {
  GoalTable& t = tables_[ti];
  log(Procedure::send_response, t.goal,
      "((" + to.id.to_string() + "," + to.requester + "," + to_string(to.goal) + ")," +
          to_string(status) + "," + to_string(loops) + ")");
  Response response{to.id, {}, status, loops};
  if (status.kind != StatusKind::floundered) {
    for (auto& entry : t.ans_set) {
      if (entry.recipients.insert(to.id).second) response.answers.push_back(entry.atom);
    }
  }
  out.push_back(Message{to.requester, std::move(response)});
}

void PrincipalEngine::terminate(std::size_t ti, Out& out) {
  GoalTable& t = tables_[ti];
  log(Procedure::terminate, t.goal, paren(to_string(t.goal)));
  for (auto& n : t.nodes) {
    if (n.status != NodeStatus::answer) n.status = NodeStatus::disposed;
  }
  t.root.status = NodeStatus::disposed;
  t.root.loop_ids.clear();
  std::vector<Request> targets;
  if (t.hr) targets.push_back(*t.hr);
  targets.insert(targets.end(), t.lr.begin(), t.lr.end());
  for (const auto& r : targets) send_response(ti, r, ResponseStatus::disposed(), {}, out);
  retire(ti);
  t.hr.reset();
  t.lr.clear();
  t.active_goals.clear();
}

void PrincipalEngine::flounder(std::size_t ti, const std::string& reason, Out& out) {
  GoalTable& t = tables_[ti];
  if (t.floundered) return;
  log(Procedure::flounder, t.goal, paren(to_string(t.goal) + "," + reason));
  floundered_ = true;
  t.floundered = true;
  for (auto& n : t.nodes) {
    if (n.status != NodeStatus::answer) n.status = NodeStatus::disposed;
  }
  t.root.status = NodeStatus::disposed;
  t.root.loop_ids.clear();
  t.ans_set.clear();
  t.ground_answers.clear();
  t.general_answers.clear();
  std::vector<Request> targets;
  if (t.hr) targets.push_back(*t.hr);
  targets.insert(targets.end(), t.lr.begin(), t.lr.end());
  for (const auto& r : targets) {
    send_response(ti, r, ResponseStatus::floundered(reason), {}, out);
  }
  retire(ti);
  t.hr.reset();
  t.lr.clear();
  t.active_goals.clear();
}

void PrincipalEngine::retire(std::size_t ti) {
  const GoalTable& t = tables_[ti];
  KeyIndex& index = by_key_.at(t.key);
  if (t.hr) {
    auto [lo, hi] = index.live.equal_range(std::hash<RequestId>{}(t.hr->id));
    for (auto it = lo; it != hi; ++it) {
      if (it->second == ti) {
        index.live.erase(it);
        break;
      }
    }
  }
  if (t.floundered) {
    index.completed.erase(ti);
    index.floundered.insert(ti);
  } else {
    index.completed.insert(ti);
  }
}

bool PrincipalEngine::should_resume(const GoalTable& t) const {
  if (t.root.status == NodeStatus::active) return true;
  if (t.root.status != NodeStatus::loop) return false;
  for (const auto& id : t.root.loop_ids) {
    auto it = t.active_goals.find(id);
    if (it != t.active_goals.end() && it->second != 0) return false;
  }
  return true;
}

std::vector<Message> PrincipalEngine::process_response(const Response& response) {
  Out out;
  auto query = queries_.find(response.id);
  if (query != queries_.end()) {
    QueryOutcome& q = query->second;
    log(Procedure::query_result, q.goal,
        "(" + response.id.to_string() + "," + render_answers(response.answers) + "," +
            to_string(response.status) + "," + to_string(response.loops) + ")");
    for (const auto& a : response.answers) {
      if (std::none_of(q.answers.begin(), q.answers.end(),
                       [&](const Atom& b) { return is_variant(a, b); })) {
        q.answers.push_back(a);
      }
    }
    if (response.status.kind == StatusKind::disposed) q.complete = true;
    if (response.status.kind == StatusKind::floundered) {
      q.complete = true;
      q.floundered = true;
      q.reason = response.status.reason;
    }
    return out;
  }

  auto where = node_index_.find(response.id);
  if (where == node_index_.end()) {
    throw std::invalid_argument("response " + to_string(response) + " matches no node at " +
                                principal());
  }
  auto [ti, ni] = where->second;
  log(Procedure::process_response, tables_[ti].goal,
      "(" + response.id.to_string() + "," + render_answers(response.answers) + "," +
          to_string(response.status) + "," + to_string(response.loops) + ")");
  GoalTable& t = tables_[ti];
  if (t.disposed()) return out;

  if (response.status.kind == StatusKind::floundered) {
    flounder(ti, response.status.reason, out);
    return out;
  }
  if (t.nodes[ni].negation) {
    negation_response(ti, ni, response, out);
    return out;
  }

  {
    TreeNode& n = t.nodes[ni];
    if (response.status.kind == StatusKind::disposed) {
      if (n.status == NodeStatus::loop) {
        for (auto& other : t.nodes) {
          if (other.status == NodeStatus::loop) {
            other.status = NodeStatus::disposed;
            other.loop_ids.clear();
          }
        }
      }
      n.status = NodeStatus::disposed;
      n.loop_ids.clear();
    } else {
      if (n.status == NodeStatus::loop) {
        n.loop_ids.insert(response.loops.begin(), response.loops.end());
      } else if (!response.loops.empty()) {
        n.status = NodeStatus::loop;
        n.loop_ids = response.loops;
      }
      for (const auto& id2 : response.loops) t.active_goals.emplace(id2, 0);
      if (response.status.kind == StatusKind::loop) {
        const RequestId& id3 = response.status.loop_id;
        auto counter = t.active_goals.find(id3);
        check(counter != t.active_goals.end(),
              "iteration response for untracked loop " + id3.to_string());
        if (counter != t.active_goals.end()) {
          --counter->second;
          check(counter->second >= 0, "counter of loop " + id3.to_string() + " went negative");
        }
        if (t.root.status == NodeStatus::active) {
          t.root.status = NodeStatus::loop;
          t.root.loop_ids = {id3};
        }
      }
    }
  }

  if (!response.answers.empty()) {
    const Clause clause = t.nodes[ni].clause;
    const Atom& b1 = clause.body.front().atom;
    std::set<std::string> avoid = variables_of(clause);
    Clause tail{clause.head, {clause.body.begin() + 1, clause.body.end()}};
    for (const auto& ans : response.answers) {
      Atom renamed = renamer_.rename_apart(ans, avoid);
      auto theta = unify(b1, renamed);
      check(theta.has_value(), "answer " + to_string(ans) + " does not unify with " + to_string(b1));
      if (!theta) continue;
      add_node(ti, ni, theta->apply(tail));
    }
  }
  if (should_resume(tables_[ti])) activate_node(ti, out);
  return out;
}

void PrincipalEngine::negation_response(std::size_t ti, std::size_t ni, const Response& response,
                                        Out& out) {
  GoalTable& t = tables_[ti];
  TreeNode& n = t.nodes[ni];
  if (n.status == NodeStatus::disposed) return;
  const Literal selected = n.clause.body.front();
  if (!response.loops.empty() || response.status.kind == StatusKind::loop) {
    flounder(ti, "loop through negation at " + to_string(selected), out);
    return;
  }
  if (!response.answers.empty()) {
    n.status = NodeStatus::disposed;
  } else if (response.status.kind == StatusKind::disposed) {
    n.status = NodeStatus::disposed;
    Clause tail{n.clause.head, {n.clause.body.begin() + 1, n.clause.body.end()}};
    add_node(ti, ni, std::move(tail));
  } else {
    return;
  }
  if (should_resume(tables_[ti])) activate_node(ti, out);
}

RequestId PrincipalEngine::new_id(const RequestId& parent) {
  RequestId id = ids_.extend(parent);
  emitted_.push_back(id);
  return id;
}

void PrincipalEngine::log(Procedure procedure, const Atom& goal, std::string args) {
  if (log_) log_->record(principal(), procedure, to_string(goal), std::move(args));
}

void PrincipalEngine::check(bool condition, const std::string& what) const {
  if (options_.check_invariants && !condition) {
    throw InvariantViolation(principal() + ": " + what);
  }
}

}  // namespace gem
