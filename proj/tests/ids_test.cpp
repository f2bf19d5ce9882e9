#include <gtest/gtest.h>

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "gem/ids/request_id.hpp"

namespace gem {
namespace {

RequestId id(std::vector<std::string> segs) { return RequestId(std::move(segs)); }

TEST(RequestId, RendersWithSeparator) {
  EXPECT_EQ(id({"h_1", "c1_1", "c2_1"}).to_string(), "h_1·c1_1·c2_1");
}

TEST(RequestId, TraceableExtension) {
  IdGenerator h("h", IdGenMode::traceable(), 1);
  IdGenerator c1("c1", IdGenMode::traceable(), 1);
  RequestId root = h.fresh_root();
  EXPECT_EQ(root, id({"h_1"}));
  RequestId child = c1.extend(root);
  EXPECT_EQ(child, id({"h_1", "c1_1"}));
  EXPECT_TRUE(is_lower(child, root));
}

TEST(RequestId, SiblingsAreDistinctAndOrderedByEmission) {
  IdGenerator g("c1", IdGenMode{}, 42);
  RequestId root = id({"h_1"});
  RequestId a = g.extend(root);
  RequestId b = g.extend(root);
  EXPECT_NE(a, b);
  EXPECT_TRUE(is_lower(a, root));
  EXPECT_TRUE(is_lower(b, root));
  EmissionOrder order = [&](const RequestId& x) { return g.ordinal(x); };
  EXPECT_TRUE(is_side(a, b, order));
  EXPECT_FALSE(is_side(b, a, order));
}

TEST(RequestId, IsLowerExamples) {
  EXPECT_TRUE(is_lower(id({"h1", "c1_1", "c2_1"}), id({"h1"})));
  EXPECT_FALSE(is_lower(id({"h1"}), id({"h1"})));
  EXPECT_FALSE(is_lower(id({"h1", "c1_1"}), id({"h1", "c1_2"})));
  EXPECT_FALSE(is_lower(id({"h1"}), id({"h1", "c1_1"})));
}

TEST(RequestId, SideExamples) {
  std::unordered_map<RequestId, std::uint64_t> ord{{id({"h1", "c1_1"}), 0},
                                                    {id({"h1", "c1_2"}), 1}};
  EmissionOrder order = [&](const RequestId& x) -> std::optional<std::uint64_t> {
    auto it = ord.find(x);
    if (it == ord.end()) return std::nullopt;
    return it->second;
  };
  EXPECT_TRUE(is_side(id({"h1", "c1_1", "c2_1"}), id({"h1", "c1_2", "c3_1"}), order));
  EXPECT_FALSE(is_side(id({"h1", "c1_2", "c3_1"}), id({"h1", "c1_1", "c2_1"}), order));
  EXPECT_THROW(is_side(id({"h1"}), id({"h1"}), order), IdOrderError);
  EXPECT_THROW(is_side(id({"h1", "c1_1"}), id({"h1"}), order), IdOrderError);
  EXPECT_THROW(is_side(id({"h1", "c1_1"}), id({"h2", "c1_2"}), order), IdOrderError);
  EXPECT_THROW(is_side(id({"h1", "c1_1"}), id({"h1", "c1_9"}), order), IdOrderError);
}

TEST(RequestIdProperty, LowerIsStrictPartialOrder) {
  IdGenerator g("p", IdGenMode{}, 9);
  std::vector<RequestId> all{g.fresh_root()};
  for (int depth = 0; depth < 3; ++depth) {
    std::size_t n = all.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (all[i].depth() == static_cast<std::size_t>(depth + 1)) {
        all.push_back(g.extend(all[i]));
        all.push_back(g.extend(all[i]));
      }
    }
  }
  for (const auto& a : all) {
    EXPECT_FALSE(is_lower(a, a));
    for (const auto& b : all) {
      if (is_lower(a, b)) {
        EXPECT_FALSE(is_lower(b, a));
      }
      for (const auto& c : all) {
        if (is_lower(a, b) && is_lower(b, c)) {
          EXPECT_TRUE(is_lower(a, c));
        }
      }
    }
  }
}

// Builds a full tree where each node's children are emitted by one of
// several engines, then checks the order-compatibility property on every
// quadruple: id1 below id2, id3 below id4 and id2 side of id4 imply id1
// side of id3.
void check_compatibility(std::size_t depth, std::size_t fanout) {
  std::vector<IdGenerator> engines;
  for (int i = 0; i < 3; ++i) engines.emplace_back("e" + std::to_string(i), IdGenMode{}, 100 + i);
  std::unordered_map<RequestId, std::size_t> owner;
  std::vector<RequestId> all{engines[0].fresh_root()};
  owner[all[0]] = 0;
  std::vector<RequestId> frontier = all;
  for (std::size_t d = 1; d < depth; ++d) {
    std::vector<RequestId> next;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      std::size_t e = (d + k) % engines.size();
      for (std::size_t f = 0; f < fanout; ++f) {
        RequestId child = engines[e].extend(frontier[k]);
        owner[child] = e;
        next.push_back(child);
        all.push_back(child);
      }
    }
    frontier = next;
  }
  EmissionOrder order = [&](const RequestId& x) -> std::optional<std::uint64_t> {
    auto it = owner.find(x);
    if (it == owner.end()) return std::nullopt;
    return engines[it->second].ordinal(x);
  };
  std::set<RequestId> unique(all.begin(), all.end());
  ASSERT_EQ(unique.size(), all.size());
  std::size_t checked = 0;
  for (const auto& id2 : all) {
    for (const auto& id4 : all) {
      if (comparable(id2, id4) || !is_side(id2, id4, order)) continue;
      for (const auto& id1 : all) {
        if (!is_lower(id1, id2)) continue;
        for (const auto& id3 : all) {
          if (!is_lower(id3, id4)) continue;
          ++checked;
          ASSERT_TRUE(is_side(id1, id3, order))
              << id1.to_string() << " " << id2.to_string() << " " << id3.to_string() << " "
              << id4.to_string();
        }
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(RequestIdProperty, SideOrderCompatibleThreeLevels) { check_compatibility(3, 3); }
TEST(RequestIdProperty, SideOrderCompatibleFourLevels) { check_compatibility(4, 3); }
TEST(RequestIdProperty, SideOrderCompatibleFourLevelsBinary) { check_compatibility(4, 2); }

TEST(IdGenerator, UntraceableSegmentsNeverContainPrincipal) {
  for (const std::string principal : {"A", "K2", "bob", "Z9X"}) {
    IdGenerator g(principal, IdGenMode{}, 5);
    RequestId root = g.fresh_root();
    for (int i = 0; i < 1000; ++i) {
      RequestId child = g.extend(root);
      const std::string& seg = child.segments().back();
      EXPECT_EQ(seg.find(principal), std::string::npos) << seg;
    }
  }
}

TEST(IdGenerator, FixedLengthSegments) {
  IdGenMode mode;
  mode.length = SegmentLength::fixed;
  mode.fixed_length = 10;
  IdGenerator g("p", mode, 3);
  RequestId root = g.fresh_root();
  EXPECT_EQ(root.segments()[0].size(), 10u);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(g.extend(root).segments().back().size(), 10u);
}

TEST(IdGenerator, VariableLengthSegmentsDiffer) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    IdGenerator g("p", IdGenMode{}, seed);
    RequestId root = g.fresh_root();
    std::set<std::size_t> lengths;
    for (int i = 0; i < 16; ++i) {
      std::size_t n = g.extend(root).segments().back().size();
      EXPECT_GE(n, 4u);
      EXPECT_LE(n, 12u);
      lengths.insert(n);
    }
    EXPECT_GE(lengths.size(), 2u) << "seed " << seed;
  }
}

TEST(IdGenerator, NoRepeatsWithinARun) {
  for (auto mode : {IdGenMode{}, IdGenMode::traceable()}) {
    IdGenerator g("p", mode, 1);
    RequestId root = g.fresh_root();
    std::set<RequestId> seen{root};
    for (int i = 0; i < 2000; ++i) {
      RequestId parent = i % 3 == 0 ? root : *seen.rbegin();
      EXPECT_TRUE(seen.insert(g.extend(parent)).second);
    }
  }
}

}  // namespace
}  // namespace gem
