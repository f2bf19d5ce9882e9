#include "gem/transport/wire.hpp"

#include <json.hpp>

#include "gem/policy/parser.hpp"

namespace gem {

using nlohmann::json;

WireError::WireError(std::size_t offset, const std::string& message)
    : std::runtime_error("byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

namespace {

json id_json(const RequestId& id) { return id.segments(); }

RequestId id_from(const json& j) {
  return RequestId(j.get<std::vector<std::string>>());
}

}  // namespace

std::string encode_frame(const Envelope& env) {
  json j;
  j["from"] = env.from;
  j["to"] = env.to;
  j["seq"] = env.seq;
  if (const auto* req = std::get_if<Request>(&env.payload)) {
    j["kind"] = "request";
    j["id"] = id_json(req->id);
    j["requester"] = req->requester;
    j["goal"] = to_string(req->goal);
  } else {
    const auto& r = std::get<Response>(env.payload);
    j["id"] = id_json(r.id);
    if (r.status.kind == StatusKind::floundered) {
      j["kind"] = "flounder";
      j["reason"] = r.status.reason;
    } else {
      j["kind"] = "response";
      json answers = json::array();
      for (const auto& a : r.answers) answers.push_back(to_string(a));
      j["answers"] = std::move(answers);
      switch (r.status.kind) {
        case StatusKind::active: j["status"] = "active"; break;
        case StatusKind::disposed: j["status"] = "disposed"; break;
        default: j["status"] = json{{"loop", id_json(r.status.loop_id)}}; break;
      }
    }
    json loops = json::array();
    for (const auto& id : r.loops) loops.push_back(id_json(id));
    j["loops"] = std::move(loops);
  }
  return j.dump() + "\n";
}

Envelope decode_frame(std::string_view frame, std::size_t base_offset) {
  if (frame.empty() || frame.back() != '\n') {
    throw WireError(base_offset + frame.size(), "truncated frame (missing newline)");
  }
  std::string_view body = frame.substr(0, frame.size() - 1);
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw WireError(base_offset + at, std::string("malformed frame: ") + e.what());
  }
  try {
    Envelope env;
    env.from = j.at("from").get<std::string>();
    env.to = j.at("to").get<std::string>();
    env.seq = j.at("seq").get<std::uint64_t>();
    std::string kind = j.at("kind").get<std::string>();
    RequestId id = id_from(j.at("id"));
    if (kind == "request") {
      env.payload = Request{id, j.at("requester").get<std::string>(),
                            parse_atom(j.at("goal").get<std::string>())};
      return env;
    }
    Response r;
    r.id = std::move(id);
    for (const auto& l : j.at("loops")) r.loops.insert(id_from(l));
    if (kind == "flounder") {
      r.status = ResponseStatus::floundered(j.at("reason").get<std::string>());
    } else if (kind == "response") {
      for (const auto& a : j.at("answers")) r.answers.push_back(parse_atom(a.get<std::string>()));
      const json& status = j.at("status");
      if (status.is_object()) {
        r.status = ResponseStatus::loop(id_from(status.at("loop")));
      } else if (status == "active") {
        r.status = ResponseStatus::active();
      } else if (status == "disposed") {
        r.status = ResponseStatus::disposed();
      } else {
        throw WireError(base_offset, "unknown status " + status.dump());
      }
    } else {
      throw WireError(base_offset, "unknown frame kind '" + kind + "'");
    }
    env.payload = std::move(r);
    return env;
  } catch (const WireError&) {
    throw;
  } catch (const std::exception& e) {
    throw WireError(base_offset, std::string("invalid frame: ") + e.what());
  }
}

void FrameReader::feed(std::string_view bytes) { buffer_.append(bytes); }

std::optional<Envelope> FrameReader::next() {
  auto nl = buffer_.find('\n');
  if (nl == std::string::npos) return std::nullopt;
  std::string frame = buffer_.substr(0, nl + 1);
  buffer_.erase(0, nl + 1);
  std::size_t start = consumed_;
  consumed_ += frame.size();
  return decode_frame(frame, start);
}

}  // namespace gem
