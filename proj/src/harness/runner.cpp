#include "gem/harness/runner.hpp"

#include <algorithm>
#include <unordered_map>

#include "gem/harness/invariants.hpp"
#include "gem/policy/unify.hpp"

namespace gem {

const PrincipalEngine* RunResult::engine(const std::string& name) const {
  for (const auto& e : engines) {
    if (e->principal() == name) return e.get();
  }
  return nullptr;
}

RunResult run(const Scenario& scenario, const RunOptions& options) {
  RunResult result;
  EventLog log;
  std::uint64_t seed = options.seed.value_or(scenario.seed);
  std::unordered_map<std::string, PrincipalEngine*> by_name;
  std::uint64_t n = 0;
  for (const auto& p : scenario.principals) {
    EngineOptions eo;
    eo.ids = scenario.ids;
    // Distinct nonce streams per engine, reproducible from the run seed.
    eo.seed = seed * 1000003ULL + (++n);
    eo.check_invariants = options.check_invariants;
    auto engine = std::make_unique<PrincipalEngine>(p.policy, eo);
    if (options.record_events) engine->set_event_log(&log);
    by_name[p.name] = engine.get();
    result.engines.push_back(std::move(engine));
  }

  std::string requester = options.requester.value_or(scenario.requester);
  Atom goal = options.query.value_or(scenario.goal);
  auto req_it = by_name.find(requester);
  if (req_it == by_name.end()) throw ConfigError("requester " + requester + " is not declared");
  if (goal.location().is_variable()) throw ConfigError("query location must be a constant");
  if (!by_name.contains(goal.location().name())) {
    throw ConfigError("query location " + goal.location().name() + " is not declared");
  }

  AnswerLedger ledger;
  DeliveryObserver observer = [&](const Envelope& env) { ledger.observe(env); };
  PrincipalEngine& origin = *req_it->second;
  Message initial = origin.issue_query(goal);

  TrafficCounts traffic;
  if (options.transport == TransportKind::sim) {
    SimBus bus(options.scheduler.value_or(scenario.scheduler), seed);
    for (const auto& p : scenario.principals) bus.register_principal(p.name);
    bus.dispatch(requester, std::move(initial));
    traffic = run_until_quiescent(bus, by_name, options.step_budget, observer);
  } else {
    std::map<std::string, TcpEndpoint> addresses;
    for (const auto& p : scenario.principals) {
      if (p.address) addresses[p.name] = *p.address;
    }
    TcpNetwork net(by_name, addresses);
    traffic = net.run(requester, std::move(initial), options.tcp_timeout, observer);
  }

  const QueryOutcome& q = origin.queries().begin()->second;
  result.answers = q.answers;
  if (q.floundered) {
    result.outcome = Outcome::floundered;
    result.flounder_reason = q.reason;
  } else if (!q.complete) {
    throw std::runtime_error("run reached quiescence without a final response");
  }
  std::sort(result.answers.begin(), result.answers.end(),
            [](const Atom& a, const Atom& b) { return to_string(a) < to_string(b); });

  RunMetrics& m = result.metrics;
  m.id = scenario.name;
  m.clauses = scenario.clause_count();
  m.req = traffic.requests;
  m.resp = traffic.responses;
  m.resp_with_answers = traffic.responses_with_answers;
  m.ans = traffic.answers;
  std::vector<const PrincipalEngine*> engines;
  for (const auto& e : result.engines) {
    engines.push_back(e.get());
    const EngineStats& s = e->stats();
    if (s.tables_created > 0) ++m.princ;
    m.tab += s.tables_created;
    m.loops += s.loops_detected;
    result.cached_replies += s.cached_replies;
    result.deferred_responses += s.deferred_responses;
  }
  result.events = log.events();

  if (options.check_invariants) {
    std::vector<std::string> problems = ledger.violations();
    for (auto& p : check_counts(m, result.cached_replies)) problems.push_back(std::move(p));
    for (auto& p : check_id_order(engines)) problems.push_back(std::move(p));
    for (auto& p : check_quiescent(engines)) problems.push_back(std::move(p));
    if (!problems.empty()) {
      std::string what = scenario.name + ": invariant violations:";
      for (const auto& p : problems) what += "\n  " + p;
      throw InvariantViolation(what);
    }
  }
  return result;
}

}  // namespace gem
