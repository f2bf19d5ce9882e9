#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gem/ids/request_id.hpp"
#include "gem/policy/term.hpp"

namespace gem {

struct Request {
  RequestId id;
  std::string requester;
  Atom goal;

  friend bool operator==(const Request&, const Request&) = default;
};

enum class StatusKind { active, loop, disposed, floundered };

struct ResponseStatus {
  StatusKind kind = StatusKind::active;
  RequestId loop_id;   // loop only
  std::string reason;  // floundered only

  static ResponseStatus active() { return {}; }
  static ResponseStatus loop(RequestId id) { return {StatusKind::loop, std::move(id), {}}; }
  static ResponseStatus disposed() { return {StatusKind::disposed, {}, {}}; }
  static ResponseStatus floundered(std::string reason) {
    return {StatusKind::floundered, {}, std::move(reason)};
  }

  friend bool operator==(const ResponseStatus&, const ResponseStatus&) = default;
};

struct Response {
  RequestId id;
  std::vector<Atom> answers;
  ResponseStatus status;
  std::set<RequestId> loops;

  friend bool operator==(const Response&, const Response&) = default;
};

using Payload = std::variant<Request, Response>;

struct Message {
  std::string to;
  Payload payload;
};

std::string to_string(const ResponseStatus& status);
std::string to_string(const std::set<RequestId>& ids);
std::string to_string(const Request& request);
std::string to_string(const Response& response);

}  // namespace gem
