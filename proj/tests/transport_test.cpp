#include <gtest/gtest.h>

#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "gem/engine/principal_engine.hpp"
#include "gem/harness/runner.hpp"
#include "gem/harness/scenario.hpp"
#include "gem/policy/parser.hpp"
#include "gem/transport/sim_bus.hpp"
#include "gem/transport/tcp_network.hpp"
#include "gem/transport/wire.hpp"

namespace gem {
namespace {

std::string scenario_path(const std::string& name) {
  return std::string(GEM_SCENARIO_DIR) + "/" + name;
}

RequestId rid(std::vector<std::string> segs) { return RequestId(std::move(segs)); }

struct System {
  std::vector<std::unique_ptr<PrincipalEngine>> owned;
  std::unordered_map<std::string, PrincipalEngine*> engines;

  explicit System(const Scenario& s) {
    std::uint64_t n = 0;
    for (const auto& p : s.principals) {
      owned.push_back(std::make_unique<PrincipalEngine>(p.policy, EngineOptions{s.ids, ++n, true}));
      engines[p.name] = owned.back().get();
    }
  }
};

TEST(SimBus, SingleMessageIsOneDelivery) {
  Scenario s = parse_scenario(
      "[principal h]\n[principal ri]\n[request]\nrequester = h, goal = memberOfAlpha(ri,X)\n");
  System sys(s);
  SimBus bus;
  for (const auto& [name, e] : sys.engines) bus.register_principal(name);
  // h's reply is the only further message: the request plus an empty
  // Disposed response.
  bus.dispatch("h", sys.engines["h"]->issue_query(s.goal));
  TrafficCounts c = run_until_quiescent(bus, sys.engines, 100);
  EXPECT_EQ(c.deliveries, 2u);
  EXPECT_EQ(c.requests, 1u);
  EXPECT_EQ(c.responses, 1u);
  EXPECT_EQ(c.answers, 0u);
  EXPECT_TRUE(bus.empty());
}

TEST(SimBus, UnknownDestinationIsConfigError) {
  SimBus bus;
  bus.register_principal("h");
  Request r{rid({"h_1"}), "h", parse_atom("p(nowhere,X)")};
  EXPECT_THROW(bus.dispatch("h", Message{"nowhere", r}), ConfigError);
}

TEST(SimBus, PerPairOrderPreservedUnderRandomScheduling) {
  SimBus bus(Scheduler::random, 17);
  for (const char* p : {"a", "b", "c"}) bus.register_principal(p);
  for (int i = 0; i < 200; ++i) {
    const char* from = i % 2 ? "a" : "b";
    const char* to = i % 3 ? "c" : "a";
    bus.dispatch(from, Message{to, Request{rid({std::to_string(i)}), from, parse_atom("p(c,X)")}});
  }
  std::map<std::pair<std::string, std::string>, std::uint64_t> last;
  std::size_t n = 0;
  while (auto env = bus.next()) {
    ++n;
    auto key = std::make_pair(env->from, env->to);
    auto it = last.find(key);
    if (it != last.end()) {
      EXPECT_GT(env->seq, it->second);
    }
    last[key] = env->seq;
  }
  EXPECT_EQ(n, 200u);
}

TEST(SimBus, StepBudgetIsEnforced) {
  System sys(load_scenario(scenario_path("appendix_b.gem")));
  SimBus bus;
  for (const auto& [name, e] : sys.engines) bus.register_principal(name);
  bus.dispatch("h", sys.engines["h"]->issue_query(parse_atom("memberOfAlpha(c1,X)")));
  EXPECT_THROW(run_until_quiescent(bus, sys.engines, 3), StepBudgetExceeded);
}

TEST(Network, WorkedExampleExchangesFourteenMessages) {
  Scenario s = load_scenario(scenario_path("appendix_b.gem"));
  System sys(s);
  SimBus bus;
  for (const auto& [name, e] : sys.engines) bus.register_principal(name);
  bus.dispatch(s.requester, sys.engines[s.requester]->issue_query(s.goal));
  TrafficCounts c = run_until_quiescent(bus, sys.engines, 10'000);
  EXPECT_EQ(c.deliveries, 14u);
  EXPECT_EQ(c.requests, 5u);
  EXPECT_EQ(c.responses, 9u);
}

std::vector<std::string> answer_names(const RunResult& r) {
  std::vector<std::string> out;
  for (const auto& a : r.answers) out.push_back(to_string(a));
  return out;
}

TEST(Network, RandomSchedulesGiveSameAnswers) {
  for (const char* file : {"appendix_b.gem", "two_loops.gem", "section_6_negation.gem"}) {
    Scenario s = load_scenario(scenario_path(file));
    RunResult base = run(s);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      RunOptions o;
      o.scheduler = Scheduler::random;
      o.seed = seed;
      RunResult r = run(s, o);
      EXPECT_EQ(answer_names(r), answer_names(base)) << file << " seed " << seed;
      EXPECT_EQ(r.metrics.tab, base.metrics.tab) << file << " seed " << seed;
      EXPECT_EQ(r.metrics.req, base.metrics.req) << file << " seed " << seed;
      EXPECT_EQ(r.metrics.loops, base.metrics.loops) << file << " seed " << seed;
    }
  }
}

TEST(Network, TwoLoopPolicyAnswersBothMembers) {
  RunResult r = run(load_scenario(scenario_path("two_loops.gem")));
  EXPECT_EQ(answer_names(r), (std::vector<std::string>{"memberOfAlpha(c1,alice)",
                                                      "memberOfAlpha(c1,bob)"}));
}

TEST(Network, EachRecipientGetsFullAnswerSet) {
  // c1 serves both h and the lower request from c2.
  Scenario s = load_scenario(scenario_path("two_loops.gem"));
  System sys(s);
  SimBus bus;
  for (const auto& [name, e] : sys.engines) bus.register_principal(name);
  std::map<std::string, std::set<std::string>> received;
  auto observer = [&](const Envelope& env) {
    const auto* resp = std::get_if<Response>(&env.payload);
    if (resp == nullptr || env.from != "c1") return;
    for (const auto& a : resp->answers) received[env.to].insert(to_string(a));
  };
  bus.dispatch(s.requester, sys.engines[s.requester]->issue_query(s.goal));
  run_until_quiescent(bus, sys.engines, 10'000, observer);
  std::set<std::string> both{"memberOfAlpha(c1,alice)", "memberOfAlpha(c1,bob)"};
  EXPECT_EQ(received["h"], both);
  EXPECT_EQ(received["c2"], both);
}

TEST(Wire, RequestRoundTrip) {
  Envelope e{"c1", "c2", 7, Request{rid({"h_1", "c1_2"}), "c1", parse_atom("memberOfAlpha(c2,X)")}};
  std::string frame = encode_frame(e);
  ASSERT_FALSE(frame.empty());
  EXPECT_EQ(frame.back(), '\n');
  EXPECT_EQ(frame.find('\n'), frame.size() - 1);
  EXPECT_EQ(decode_frame(frame), e);
}

TEST(Wire, ResponseWithAnswersAndLoopsRoundTrip) {
  Response r{rid({"h_1", "c1_2"}),
             {parse_atom("memberOfAlpha(c2,alice)"), parse_atom("memberOfAlpha(c2,'Bob Smith')"),
              parse_atom("memberOfAlpha(c2,X)")},
             ResponseStatus::loop(rid({"h_1"})),
             {rid({"h_1"}), rid({"h_1", "c1_2", "c2_1"})}};
  Envelope e{"c2", "c1", 3, r};
  EXPECT_EQ(decode_frame(encode_frame(e)), e);
  Envelope f{"c2", "c1", 4,
             Response{rid({"h_1"}), {}, ResponseStatus::floundered("loop through negation"), {}}};
  EXPECT_EQ(decode_frame(encode_frame(f)), f);
}

TEST(WireProperty, RandomEnvelopesRoundTrip) {
  std::mt19937_64 rng(99);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  auto segment = [&] {
    static const std::string alphabet = "0123456789ABCDEFGHJKLMNPQRSTUVWXYZ_'\"\\ ";
    std::string s;
    int n = 1 + pick(8);
    for (int i = 0; i < n; ++i) {
      s += alphabet[static_cast<std::size_t>(pick(static_cast<int>(alphabet.size())))];
    }
    return s;
  };
  auto id = [&] {
    std::vector<std::string> segs;
    int n = 1 + pick(5);
    for (int i = 0; i < n; ++i) segs.push_back(segment());
    return RequestId(segs);
  };
  auto atom = [&] {
    Atom a{pick(2) ? "p" : "memberOfAlpha", {Term::constant("loc")}};
    int n = pick(4);
    for (int i = 0; i < n; ++i) {
      a.args.push_back(pick(2) ? Term::variable("X" + std::to_string(pick(3)))
                               : Term::constant("c " + segment()));
    }
    return a;
  };
  for (int i = 0; i < 500; ++i) {
    Envelope e{"from" + std::to_string(pick(3)), "to" + std::to_string(pick(3)),
               static_cast<std::uint64_t>(rng() >> 1), Request{}};
    if (pick(2)) {
      e.payload = Request{id(), "req", atom()};
    } else {
      Response r{id(), {}, {}, {}};
      int n = pick(4);
      for (int k = 0; k < n; ++k) r.answers.push_back(atom());
      switch (pick(4)) {
        case 0: r.status = ResponseStatus::active(); break;
        case 1: r.status = ResponseStatus::loop(id()); break;
        case 2: r.status = ResponseStatus::disposed(); break;
        default:
          // Floundered responses never carry answers.
          r.status = ResponseStatus::floundered("reason " + segment());
          r.answers.clear();
          break;
      }
      int m = pick(3);
      for (int k = 0; k < m; ++k) r.loops.insert(id());
      e.payload = r;
    }
    std::string frame = encode_frame(e);
    EXPECT_EQ(frame.find('\n'), frame.size() - 1);
    EXPECT_EQ(decode_frame(frame), e) << frame;
  }
}

TEST(Wire, TruncatedFrameIsRejected) {
  Envelope e{"c1", "c2", 1, Request{rid({"h_1"}), "c1", parse_atom("p(c2,X)")}};
  std::string frame = encode_frame(e);
  for (std::size_t cut : {std::size_t{0}, std::size_t{1}, frame.size() / 2, frame.size() - 1}) {
    try {
      decode_frame(std::string_view(frame).substr(0, cut), 100);
      FAIL() << "decoded a frame cut at " << cut;
    } catch (const WireError& err) {
      EXPECT_GE(err.offset(), 100u);
    }
  }
}

TEST(Wire, MalformedFramesReportOffset) {
  for (const char* bad :
       {"{not json}\n", "[]\n", "{\"kind\":\"request\"}\n",
        "{\"kind\":\"teleport\",\"from\":\"a\",\"to\":\"b\",\"seq\":1,\"id\":[\"x\"]}\n",
        "{\"kind\":\"request\",\"from\":\"a\",\"to\":\"b\",\"seq\":1,\"id\":[\"x\"],"
        "\"requester\":\"a\",\"goal\":\"p(\"}\n"}) {
    EXPECT_THROW(decode_frame(bad, 5), WireError) << bad;
  }
}

TEST(Wire, FrameReaderSplitsStream) {
  Envelope a{"c1", "c2", 1, Request{rid({"h_1"}), "c1", parse_atom("p(c2,X)")}};
  Envelope b{"c2", "c1", 1, Response{rid({"h_1"}), {parse_atom("p(c2,a)")}, {}, {}}};
  std::string bytes = encode_frame(a) + encode_frame(b);
  FrameReader reader;
  std::vector<Envelope> got;
  for (char ch : bytes) {
    reader.feed(std::string_view(&ch, 1));
    while (auto env = reader.next()) got.push_back(*env);
  }
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0], a);
  EXPECT_EQ(got[1], b);
  EXPECT_EQ(reader.buffered(), 0u);
}

TEST(Tcp, EndpointParsing) {
  TcpEndpoint e = parse_endpoint("127.0.0.1:8080");
  EXPECT_EQ(e.host, "127.0.0.1");
  EXPECT_EQ(e.port, 8080);
  EXPECT_THROW(parse_endpoint("localhost"), std::exception);
  EXPECT_THROW(parse_endpoint("127.0.0.1:99999"), std::exception);
}

TEST(Tcp, LoopbackRunMatchesSimulator) {
  for (const char* file : {"appendix_b.gem", "two_loops.gem", "section_6_negation.gem"}) {
    Scenario s = load_scenario(scenario_path(file));
    RunResult sim = run(s);
    RunOptions o;
    o.transport = TransportKind::tcp;
    o.tcp_timeout = std::chrono::milliseconds(20'000);
    RunResult tcp = run(s, o);
    EXPECT_EQ(answer_names(tcp), answer_names(sim)) << file;
    EXPECT_EQ(tcp.metrics.tab, sim.metrics.tab) << file;
    EXPECT_EQ(tcp.metrics.req, sim.metrics.req) << file;
  }
}

TEST(Tcp, FlounderPropagatesOverSockets) {
  RunOptions o;
  o.transport = TransportKind::tcp;
  RunResult r = run(load_scenario(scenario_path("section_6_negation_loop.gem")), o);
  EXPECT_EQ(r.outcome, Outcome::floundered);
}

}  // namespace
}  // namespace gem
