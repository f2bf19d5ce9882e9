#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gem/engine/event_log.hpp"
#include "gem/engine/goal_table.hpp"
#include "gem/engine/messages.hpp"
#include "gem/ids/request_id.hpp"
#include "gem/policy/term.hpp"
#include "gem/policy/unify.hpp"

namespace gem {

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct EngineOptions {
  IdGenMode ids;
  std::uint64_t seed = 0;
  bool check_invariants = true;
};

struct QueryOutcome {
  Atom goal;
  std::vector<Atom> answers;
  bool complete = false;
  bool floundered = false;
  std::string reason;
};

struct EngineStats {
  std::size_t tables_created = 0;
  std::size_t loops_detected = 0;
  // Requests answered from a completed or floundered table.
  std::size_t cached_replies = 0;
  // Activate Node found no fresh node while a subgoal request was still
  // outstanding and waited instead of generating a response.
  std::size_t deferred_responses = 0;
};

class PrincipalEngine {
 public:
  PrincipalEngine(Policy policy, EngineOptions options = {});

  const std::string& principal() const { return policy_.owner; }
  const Policy& policy() const { return policy_; }

  std::vector<Message> handle(const Payload& payload);
  std::vector<Message> process_request(const Request& request);
  std::vector<Message> process_response(const Response& response);

  // Starts a query from this principal; the returned message carries the
  // initial request.
  Message issue_query(const Atom& goal);
  const std::map<RequestId, QueryOutcome>& queries() const { return queries_; }

  const std::vector<GoalTable>& tables() const { return tables_; }
  bool floundered() const { return floundered_; }
  const EngineStats& stats() const { return stats_; }
  const IdGenerator& ids() const { return ids_; }
  const std::vector<RequestId>& emitted_ids() const { return emitted_; }

  void set_event_log(EventLog* log) { log_ = log; }

 private:
  using Out = std::vector<Message>;

  void create_table(const Request& request, Out& out);
  void activate_node(std::size_t ti, Out& out);
  void generate_response(std::size_t ti, Out& out);
  void send_response(std::size_t ti, const Request& to, const ResponseStatus& status,
                     const std::set<RequestId>& loops, Out& out);
  void terminate(std::size_t ti, Out& out);
  void flounder(std::size_t ti, const std::string& reason, Out& out);

  void negation_response(std::size_t ti, std::size_t ni, const Response& response, Out& out);
  std::size_t add_node(std::size_t ti, std::size_t parent, Clause clause);
  void add_answer(GoalTable& table, const Atom& answer);
  bool outstanding_request(const GoalTable& table) const;
  bool unsent_to_lower(const GoalTable& table) const;
  bool should_resume(const GoalTable& table) const;

  RequestId new_id(const RequestId& parent);
  void log(Procedure procedure, const Atom& goal, std::string args);
  void check(bool condition, const std::string& what) const;

  Policy policy_;
  EngineOptions options_;
  IdGenerator ids_;
  VariableRenamer renamer_;
  std::vector<GoalTable> tables_;
  // Variant tables of one goal key. Live tables are keyed by the hash of
  // their higher-request id so loop owners are found by prefix lookup.
  struct KeyIndex {
    std::set<std::size_t> completed;
    std::set<std::size_t> floundered;
    std::unordered_multimap<std::size_t, std::size_t> live;
  };
  void retire(std::size_t ti);

  std::unordered_map<std::string, KeyIndex> by_key_;
  std::unordered_map<RequestId, std::pair<std::size_t, std::size_t>> node_index_;
  std::map<RequestId, QueryOutcome> queries_;
  std::vector<RequestId> emitted_;
  EngineStats stats_;
  bool floundered_ = false;
  EventLog* log_ = nullptr;
};

}  // namespace gem
