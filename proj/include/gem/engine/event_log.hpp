#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

namespace gem {

enum class Procedure {
  process_request,
  create_table,
  activate_node,
  generate_response,
  terminate,
  send_response,
  process_response,
  flounder,
  query_result,
};

const char* to_string(Procedure p);

struct Event {
  std::uint64_t seq = 0;
  std::string principal;
  Procedure procedure;
  std::string goal;  // the goal the call is about, in surface syntax
  std::string args;  // full argument list, e.g. "((h_1,h,p(a,X)),active,{})"
};

// Shared by all engines of a run. Appends are serialized so the TCP
// transport can log from several engine threads.
class EventLog {
 public:
  void record(std::string principal, Procedure procedure, std::string goal, std::string args);
  std::vector<Event> events() const;
  std::size_t size() const;
  void clear();

  // One line per event: "<seq> <principal> <Procedure>(<args>)".
  std::string render() const;

 private:
  mutable std::mutex mutex_;
  std::vector<Event> events_;
};

}  // namespace gem
