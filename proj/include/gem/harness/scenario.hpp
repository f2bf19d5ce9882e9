#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gem/ids/request_id.hpp"
#include "gem/policy/term.hpp"
#include "gem/transport/sim_bus.hpp"
#include "gem/transport/tcp_network.hpp"

namespace gem {

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct PrincipalSpec {
  std::string name;
  Policy policy;
  std::optional<TcpEndpoint> address;
};

struct Scenario {
  std::string name;
  std::vector<PrincipalSpec> principals;
  std::string requester;
  Atom goal;
  IdGenMode ids;
  Scheduler scheduler = Scheduler::fifo;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  const PrincipalSpec* find(const std::string& name) const;
  std::size_t clause_count() const;
  std::vector<Policy> policies() const;
};

// Sections:
//   [config]            ids = traceable|untraceable, length = fixed|variable,
//                       segment_length = N, scheduler = fifo|random, seed = N,
//                       address <principal> = host:port
//   [principal <name>]  policy clauses owned by <name>
//   [request]           requester = <name>, goal = <atom>
Scenario parse_scenario(std::string_view text, std::string name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

// Checks names, ownership, locations and the request; fills warnings.
void validate(Scenario& scenario);

std::string write_scenario(const Scenario& scenario);

}  // namespace gem
