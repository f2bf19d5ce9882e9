#include "gem/engine/messages.hpp"

namespace gem {

std::string to_string(const ResponseStatus& status) {
  switch (status.kind) {
    case StatusKind::active: return "active";
    case StatusKind::loop: return "loop(" + status.loop_id.to_string() + ")";
    case StatusKind::disposed: return "disposed";
    case StatusKind::floundered: return "floundered(" + status.reason + ")";
  }
  return "?";
}

std::string to_string(const std::set<RequestId>& ids) {
  std::string out = "{";
  bool first = true;
  for (const auto& id : ids) {
    if (!first) out += ",";
    first = false;
    out += id.to_string();
  }
  return out + "}";
}

std::string to_string(const Request& request) {
  return "(" + request.id.to_string() + "," + request.requester + "," + to_string(request.goal) +
         ")";
}

std::string to_string(const Response& response) {
  std::string out = "(" + response.id.to_string() + ",{";
  for (std::size_t i = 0; i < response.answers.size(); ++i) {
    if (i > 0) out += ",";
    out += to_string(response.answers[i]);
  }
  out += "}," + to_string(response.status) + "," + to_string(response.loops) + ")";
  return out;
}

}  // namespace gem
