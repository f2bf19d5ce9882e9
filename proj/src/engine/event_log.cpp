#include "gem/engine/event_log.hpp"

namespace gem {

const char* to_string(Procedure p) {
  switch (p) {
    case Procedure::process_request: return "ProcessRequest";
    case Procedure::create_table: return "CreateTable";
    case Procedure::activate_node: return "ActivateNode";
    case Procedure::generate_response: return "GenerateResponse";
    case Procedure::terminate: return "Terminate";
    case Procedure::send_response: return "SendResponse";
    case Procedure::process_response: return "ProcessResponse";
    case Procedure::flounder: return "Flounder";
    case Procedure::query_result: return "QueryResult";
  }
  return "?";
}

void EventLog::record(std::string principal, Procedure procedure, std::string goal,
                      std::string args) {
  std::lock_guard lock(mutex_);
  Event e;
  e.seq = events_.size() + 1;
  e.principal = std::move(principal);
  e.procedure = procedure;
  e.goal = std::move(goal);
  e.args = std::move(args);
  events_.push_back(std::move(e));
}

std::vector<Event> EventLog::events() const {
  std::lock_guard lock(mutex_);
  return events_;
}

std::size_t EventLog::size() const {
  std::lock_guard lock(mutex_);
  return events_.size();
}

void EventLog::clear() {
  std::lock_guard lock(mutex_);
  events_.clear();
}

std::string EventLog::render() const {
  std::lock_guard lock(mutex_);
  std::string out;
  for (const auto& e : events_) {
    out += std::to_string(e.seq) + " " + e.principal + " " + to_string(e.procedure) + e.args + "\n";
  }
  return out;
}

}  // namespace gem
