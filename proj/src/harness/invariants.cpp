#include "gem/harness/invariants.hpp"

#include <unordered_map>

#include "gem/policy/unify.hpp"

namespace gem {

void AnswerLedger::observe(const Envelope& env) {
  const auto* r = std::get_if<Response>(&env.payload);
  if (!r) return;
  std::lock_guard lock(mutex_);
  for (const auto& a : r->answers) {
    if (!seen_.emplace(env.to, r->id, variant_key(a)).second) {
      violations_.push_back("answer " + to_string(a) + " sent twice to " + r->id.to_string());
    }
  }
}

std::vector<std::string> check_counts(const RunMetrics& m, std::size_t cached_replies) {
  std::vector<std::string> out;
  if (m.req != m.tab + m.loops + cached_replies) {
    out.push_back("req " + std::to_string(m.req) + " != tab " + std::to_string(m.tab) +
                  " + loops " + std::to_string(m.loops) + " + cached " +
                  std::to_string(cached_replies));
  }
  if (m.resp < m.req) out.push_back("fewer responses than requests");
  if (m.resp_with_answers > m.resp) out.push_back("resp&ans exceeds resp");
  if (m.ans < m.resp_with_answers) out.push_back("ans below resp&ans");
  return out;
}

std::vector<std::string> check_quiescent(const std::vector<const PrincipalEngine*>& engines) {
  std::vector<std::string> out;
  for (const auto* e : engines) {
    for (const auto& t : e->tables()) {
      std::string where = e->principal() + " table " + to_string(t.goal);
      if (!t.disposed()) out.push_back(where + " not disposed");
      if (t.hr) out.push_back(where + " still has a higher request");
      if (!t.lr.empty()) out.push_back(where + " still has lower requests");
      if (!t.active_goals.empty()) out.push_back(where + " still has loop counters");
    }
  }
  return out;
}

std::vector<std::string> check_id_order(const std::vector<const PrincipalEngine*>& engines,
                                        std::size_t exhaustive_limit) {
  std::vector<std::string> out;
  std::unordered_map<RequestId, std::size_t> owner;
  std::vector<RequestId> all;
  for (std::size_t i = 0; i < engines.size(); ++i) {
    for (const auto& id : engines[i]->emitted_ids()) {
      if (!owner.emplace(id, i).second) out.push_back("id " + id.to_string() + " emitted twice");
      all.push_back(id);
    }
  }
  EmissionOrder order = [&](const RequestId& id) -> std::optional<std::uint64_t> {
    auto it = owner.find(id);
    if (it == owner.end()) return std::nullopt;
    return engines[it->second]->ids().ordinal(id);
  };

  std::unordered_map<RequestId, std::pair<std::size_t, std::set<std::uint64_t>>> children;
  for (const auto& id : all) {
    if (!order(id)) {
      out.push_back("id " + id.to_string() + " has no recorded emission");
      continue;
    }
    if (id.depth() < 2) continue;
    RequestId parent = id.prefix(id.depth() - 1);
    if (!owner.contains(parent)) {
      out.push_back("parent of " + id.to_string() + " was never emitted");
      continue;
    }
    auto [it, fresh] = children.try_emplace(parent, owner[id], std::set<std::uint64_t>{});
    if (it->second.first != owner[id]) {
      out.push_back("children of " + parent.to_string() + " come from two engines");
    }
    if (!it->second.second.insert(*order(id)).second) {
      out.push_back("siblings under " + parent.to_string() + " share an ordinal");
    }
  }

  if (all.size() <= exhaustive_limit) {
    auto side = [&](const RequestId& a, const RequestId& b) -> std::optional<bool> {
      if (comparable(a, b) || a.segments().front() != b.segments().front()) return std::nullopt;
      return is_side(a, b, order);
    };
    for (const auto& id2 : all) {
      for (const auto& id4 : all) {
        auto s24 = side(id2, id4);
        if (!s24 || !*s24) continue;
        for (const auto& id1 : all) {
          if (!is_lower(id1, id2)) continue;
          for (const auto& id3 : all) {
            if (!is_lower(id3, id4)) continue;
            auto s13 = side(id1, id3);
            if (!s13 || !*s13) {
              out.push_back("side order of " + id1.to_string() + " and " + id3.to_string() +
                            " breaks compatibility");
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace gem
