#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gem/engine/event_log.hpp"
#include "gem/engine/principal_engine.hpp"
#include "gem/harness/metrics.hpp"
#include "gem/harness/scenario.hpp"

namespace gem {

enum class TransportKind { sim, tcp };
enum class Outcome { answered, floundered };

struct RunOptions {
  TransportKind transport = TransportKind::sim;
  std::optional<Scheduler> scheduler;  // overrides the scenario
  std::optional<std::uint64_t> seed;   // overrides the scenario
  std::optional<Atom> query;
  std::optional<std::string> requester;
  std::size_t step_budget = 5'000'000;
  std::chrono::milliseconds tcp_timeout{60'000};
  bool check_invariants = true;
  bool record_events = true;
};

struct RunResult {
  Outcome outcome = Outcome::answered;
  std::vector<Atom> answers;
  std::string flounder_reason;
  RunMetrics metrics;
  // Requests served from an already completed (or floundered) table.
  std::size_t cached_replies = 0;
  std::size_t deferred_responses = 0;
  std::vector<Event> events;
  std::vector<std::unique_ptr<PrincipalEngine>> engines;

  const PrincipalEngine* engine(const std::string& name) const;
};

RunResult run(const Scenario& scenario, const RunOptions& options = {});

}  // namespace gem
