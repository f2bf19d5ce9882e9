#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gem/engine/messages.hpp"

namespace gem {

class PrincipalEngine;

struct Envelope {
  std::string from;
  std::string to;
  std::uint64_t seq = 0;
  Payload payload;

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scheduler { fifo, random };

// Message counters in the layout of the experiment tables.
struct TrafficCounts {
  std::size_t deliveries = 0;
  std::size_t requests = 0;
  std::size_t responses = 0;
  std::size_t responses_with_answers = 0;
  std::size_t answers = 0;

  void count(const Payload& payload);
};

// Tracks per directed pair sequence numbers.
class SequenceCounter {
 public:
  std::uint64_t next(const std::string& from, const std::string& to);

 private:
  std::map<std::pair<std::string, std::string>, std::uint64_t> seq_;
};

class SimBus {
 public:
  explicit SimBus(Scheduler scheduler = Scheduler::fifo, std::uint64_t seed = 0);

  void register_principal(const std::string& name);
  bool registered(const std::string& name) const { return principals_.contains(name); }

  // Stamps the next per-pair sequence number.
  void dispatch(const std::string& from, Message message);
  void dispatch(Envelope envelope);

  std::optional<Envelope> next();
  bool empty() const { return pending_ == 0; }
  std::size_t pending() const { return pending_; }

 private:
  using PairKey = std::pair<std::string, std::string>;

  Scheduler scheduler_;
  std::mt19937_64 rng_;
  std::map<std::string, bool> principals_;
  std::map<PairKey, std::deque<Envelope>> queues_;
  std::deque<PairKey> fifo_order_;
  std::vector<PairKey> nonempty_;
  SequenceCounter seq_;
  std::size_t pending_ = 0;
};

using DeliveryObserver = std::function<void(const Envelope&)>;

// Delivers until every queue is empty. Each delivery runs the destination
// engine to completion before the next one is picked.
TrafficCounts run_until_quiescent(SimBus& bus,
                                  const std::unordered_map<std::string, PrincipalEngine*>& engines,
                                  std::size_t step_budget, const DeliveryObserver& observer = {});

}  // namespace gem
