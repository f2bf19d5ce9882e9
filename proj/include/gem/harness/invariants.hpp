#pragma once

#include <map>
#include <mutex>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gem/engine/principal_engine.hpp"
#include "gem/harness/metrics.hpp"
#include "gem/transport/sim_bus.hpp"

namespace gem {

// Observes deliveries and records any answer sent twice to one request id.
class AnswerLedger {
 public:
  void observe(const Envelope& envelope);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::mutex mutex_;
  std::set<std::tuple<std::string, RequestId, std::string>> seen_;
  std::vector<std::string> violations_;
};

// Requests are either answered by a new table, detected as lower requests,
// or served from a finished table.
std::vector<std::string> check_counts(const RunMetrics& metrics, std::size_t cached_replies);

// Every table disposed, HR cleared, LR and counters empty.
std::vector<std::string> check_quiescent(const std::vector<const PrincipalEngine*>& engines);

// Ids are globally unique, every child of a given id was emitted by one
// engine with distinct ordinals, and (for small id sets, exhaustively) the
// side order is compatible with the prefix order.
std::vector<std::string> check_id_order(const std::vector<const PrincipalEngine*>& engines,
                                        std::size_t exhaustive_limit = 40);

}  // namespace gem
