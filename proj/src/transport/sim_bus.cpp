#include "gem/transport/sim_bus.hpp"

#include <algorithm>

#include "gem/engine/principal_engine.hpp"

namespace gem {

void TrafficCounts::count(const Payload& payload) {
  ++deliveries;
  if (std::holds_alternative<Request>(payload)) {
    ++requests;
    return;
  }
  const auto& r = std::get<Response>(payload);
  ++responses;
  if (!r.answers.empty()) ++responses_with_answers;
  answers += r.answers.size();
}

std::uint64_t SequenceCounter::next(const std::string& from, const std::string& to) {
  return ++seq_[{from, to}];
}

SimBus::SimBus(Scheduler scheduler, std::uint64_t seed) : scheduler_(scheduler), rng_(seed) {}

void SimBus::register_principal(const std::string& name) { principals_[name] = true; }

void SimBus::dispatch(const std::string& from, Message message) {
  Envelope env{from, message.to, 0, std::move(message.payload)};
  env.seq = seq_.next(env.from, env.to);
  dispatch(std::move(env));
}

void SimBus::dispatch(Envelope envelope) {
  if (!principals_.contains(envelope.to)) {
    throw ConfigError("message from " + envelope.from + " to unknown principal " + envelope.to);
  }
  PairKey key{envelope.from, envelope.to};
  auto& queue = queues_[key];
  if (queue.empty()) nonempty_.push_back(key);
  queue.push_back(std::move(envelope));
  if (scheduler_ == Scheduler::fifo) fifo_order_.push_back(key);
  ++pending_;
}

std::optional<Envelope> SimBus::next() {
  if (pending_ == 0) return std::nullopt;
  PairKey key;
  if (scheduler_ == Scheduler::fifo) {
    key = fifo_order_.front();
    fifo_order_.pop_front();
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, nonempty_.size() - 1);
    key = nonempty_[pick(rng_)];
  }
  auto& queue = queues_[key];
  Envelope env = std::move(queue.front());
  queue.pop_front();
  if (queue.empty()) {
    nonempty_.erase(std::find(nonempty_.begin(), nonempty_.end(), key));
  }
  --pending_;
  return env;
}

TrafficCounts run_until_quiescent(SimBus& bus,
                                  const std::unordered_map<std::string, PrincipalEngine*>& engines,
                                  std::size_t step_budget, const DeliveryObserver& observer) {
  TrafficCounts counts;
  while (auto env = bus.next()) {
    if (counts.deliveries >= step_budget) {
      throw StepBudgetExceeded("step budget of " + std::to_string(step_budget) +
                               " deliveries exhausted");
    }
    counts.count(env->payload);
    if (observer) observer(*env);
    auto it = engines.find(env->to);
    if (it == engines.end()) throw ConfigError("no engine for principal " + env->to);
    for (auto& m : it->second->handle(env->payload)) bus.dispatch(env->to, std::move(m));
  }
  return counts;
}

}  // namespace gem
