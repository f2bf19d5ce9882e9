#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "gem/engine/principal_engine.hpp"
#include "gem/harness/generators.hpp"
#include "gem/harness/runner.hpp"
#include "gem/policy/parser.hpp"

namespace {

int run_command(const std::string& path, const std::string& query, const std::string& requester,
                const std::string& metrics, std::optional<std::uint64_t> seed,
                const std::string& scheduler, const std::string& transport,
                const std::string& log_path) {
  gem::Scenario scenario = gem::load_scenario(path);
  for (const auto& w : scenario.warnings) std::cerr << "warning: " << w << "\n";

  gem::RunOptions options;
  options.seed = seed;
  if (!query.empty()) options.query = gem::parse_atom(query);
  if (!requester.empty()) options.requester = requester;
  if (scheduler == "random") options.scheduler = gem::Scheduler::random;
  if (scheduler == "fifo") options.scheduler = gem::Scheduler::fifo;
  options.transport = transport == "tcp" ? gem::TransportKind::tcp : gem::TransportKind::sim;
  options.record_events = !log_path.empty();

  gem::RunResult result = gem::run(scenario, options);

  if (!log_path.empty()) {
    std::ofstream out(log_path);
    if (!out) throw std::runtime_error("cannot write " + log_path);
    for (const auto& e : result.events) {
      out << e.seq << " " << e.principal << " " << gem::to_string(e.procedure) << e.args << "\n";
    }
  }
  for (const auto& a : result.answers) std::cout << gem::to_string(a) << "\n";
  if (!metrics.empty()) {
    auto format = metrics == "csv" ? gem::ReportFormat::csv : gem::ReportFormat::table;
    std::cout << gem::emit_report({result.metrics}, format);
  }
  if (result.outcome == gem::Outcome::floundered) {
    std::cerr << "floundered: " << result.flounder_reason << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed goal evaluation over trust-management policies"};
  app.require_subcommand(1);

  std::string path, query, requester, metrics, scheduler, transport = "sim", log_path;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Evaluate the request of a scenario file");
  run->add_option("scenario", path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--query", query, "Goal to evaluate instead of the scenario's request");
  run->add_option("--requester", requester, "Principal issuing the query");
  run->add_option("--metrics", metrics, "Print a metrics row")
      ->check(CLI::IsMember({"table", "csv"}));
  run->add_option("--seed", seed, "Seed for identifiers and the random scheduler");
  run->add_option("--scheduler", scheduler, "Simulator delivery order")
      ->check(CLI::IsMember({"fifo", "random"}));
  run->add_option("--transport", transport, "Message transport")
      ->check(CLI::IsMember({"sim", "tcp"}));
  run->add_option("--log", log_path, "Write the procedure-call log to this file");

  int family = 0, index = 0, scale = 1;
  std::string out_path;
  auto* gen = app.add_subcommand("generate", "Write one of the experiment policy families");
  gen->add_option("--family", family, "Family 1, 2 or 3")->required()->check(CLI::Range(1, 3));
  gen->add_option("--index", index, "Variant index 0..5")->required()->check(CLI::Range(0, 5));
  gen->add_option("--scale", scale, "Fact multiplier")->check(CLI::PositiveNumber);
  gen->add_option("--out", out_path, "Output scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      return run_command(path, query, requester, metrics, seed, scheduler, transport, log_path);
    }
    gem::Scenario s = gem::generate_variant(family, index, scale);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << gem::write_scenario(s);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
