#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>

#include "gem/transport/sim_bus.hpp"

namespace gem {

struct TcpEndpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks an ephemeral port
};

TcpEndpoint parse_endpoint(const std::string& text);

// Runs every engine behind its own loopback listener. Each principal has a
// worker thread that drains its inbox one message at a time, one reader
// thread per accepted connection, and one outbound connection per peer.
class TcpNetwork {
 public:
  TcpNetwork(const std::unordered_map<std::string, PrincipalEngine*>& engines,
             const std::map<std::string, TcpEndpoint>& addresses = {});
  ~TcpNetwork();
  TcpNetwork(const TcpNetwork&) = delete;
  TcpNetwork& operator=(const TcpNetwork&) = delete;

  std::uint16_t port_of(const std::string& principal) const;

  // Sends `initial` on behalf of `from` and blocks until no message is in
  // flight and every engine is idle.
  TrafficCounts run(const std::string& from, Message initial, std::chrono::milliseconds timeout,
                    const DeliveryObserver& observer = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gem
