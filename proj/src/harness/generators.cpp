#include "gem/harness/generators.hpp"

#include <map>
#include <stdexcept>
#include <vector>

#include "gem/policy/parser.hpp"

namespace gem {

namespace {

const std::vector<std::string> kMembers = {
    "alice", "bob",   "carol", "dave",  "erin",   "frank", "grace",
    "heidi", "ivan",  "judy",  "kim",   "leo",    "mia",   "nick",
};

class Builder {
 public:
  explicit Builder(int scale) : scale_(scale) {}

  void rule(const std::string& owner, const std::string& text) { add(owner, text + "\n"); }

  void member_fact(const std::string& owner, const std::string& member) {
    if (scale_ == 1) {
      add(owner, "memberOfAlpha(" + owner + "," + member + ").\n");
      return;
    }
    for (int i = 1; i <= scale_; ++i) {
      add(owner, "memberOfAlpha(" + owner + "," + member + "_" + std::to_string(i) + ").\n");
    }
  }

  void declare(const std::string& owner) { add(owner, ""); }

  Scenario build(std::string name) {
    Scenario s;
    s.name = std::move(name);
    s.principals.push_back({"h", Policy{"h", {}}, std::nullopt});
    for (const auto& owner : order_) {
      s.principals.push_back({owner, parse_policy(text_[owner], owner), std::nullopt});
    }
    s.requester = "h";
    s.goal = parse_atom("memberOfAlpha(c1,X)");
    s.ids = IdGenMode::traceable();
    validate(s);
    return s;
  }

 private:
  void add(const std::string& owner, const std::string& text) {
    if (!text_.contains(owner)) order_.push_back(owner);
    text_[owner] += text;
  }

  int scale_;
  std::vector<std::string> order_;
  std::map<std::string, std::string> text_;
};

std::string c(int i) { return "c" + std::to_string(i); }

std::string delegate(int from, const std::string& to) {
  return "memberOfAlpha(" + c(from) + ",X) :- memberOfAlpha(" + to + ",X).";
}

std::string delegate(int from, int to) { return delegate(from, c(to)); }

Scenario family1(int k, int scale, std::string name) {
  Builder b(scale);
  int last = 2 * k + 3;
  auto partner = [&](int j) { return k == 0 ? std::string("mc") : "mc" + std::to_string(j); };
  for (int j = 1; j <= k + 1; ++j) {
    int top = 2 * j - 1;
    b.rule(c(top), "memberOfAlpha(" + c(top) + ",X) :- projectPartner(" + partner(j) +
                       ",Y), memberOfAlpha(Y,X).");
    if (top > 1) b.member_fact(c(top), kMembers[top - 2]);
  }
  for (int j = 1; j <= k + 1; ++j) {
    // Partner facts are not scaled.
    b.rule(partner(j), "projectPartner(" + partner(j) + "," + c(2 * j) + ").");
    b.rule(partner(j), "projectPartner(" + partner(j) + "," + c(2 * j + 1) + ").");
    int even = 2 * j;
    b.rule(c(even), delegate(even, 2 * j - 1));
    b.member_fact(c(even), kMembers[even - 2]);
  }
  b.member_fact(c(last), kMembers[last - 2]);
  return b.build(std::move(name));
}

Scenario family2(int k, int scale, std::string name) {
  Builder b(scale);
  b.rule(c(1), delegate(1, 2));
  b.rule(c(1), delegate(1, 3));
  for (int j = 5; j <= k + 4; ++j) b.rule(c(1), delegate(1, j));
  b.rule(c(2), delegate(2, 4));
  b.member_fact(c(2), "alice");
  b.rule(c(2), delegate(2, 1));
  b.rule(c(3), delegate(3, 4));
  b.member_fact(c(3), "bob");
  b.rule(c(4), delegate(4, 2));
  for (int j = 5; j <= k + 4; ++j) b.rule(c(j), delegate(j, j == 5 ? 3 : j - 1));
  return b.build(std::move(name));
}

Scenario family3(int k, int scale, std::string name) {
  Builder b(scale);
  for (int level = 0; level <= k; ++level) {
    int top = 3 * level + 1, left = top + 1, right = top + 2, bottom = top + 3;
    b.rule(c(top), delegate(top, left));
    b.rule(c(top), delegate(top, right));
    b.rule(c(left), delegate(left, bottom));
    b.member_fact(c(left), kMembers[2 * level]);
    b.rule(c(left), delegate(left, top));
    b.rule(c(right), delegate(right, bottom));
    b.member_fact(c(right), kMembers[2 * level + 1]);
    b.rule(c(bottom), delegate(bottom, left));
  }
  return b.build(std::move(name));
}

}  // namespace

std::string variant_label(int family, int index, int fact_scale) {
  std::string label = std::to_string(family) + "." + std::to_string(index);
  switch (fact_scale) {
    case 1: break;
    case 10: label += "a"; break;
    case 50: label += "b"; break;
    case 100: label += "c"; break;
    default: label += "x" + std::to_string(fact_scale); break;
  }
  return label;
}

Scenario generate_variant(int family, int index, int fact_scale) {
  if (index < 0 || index > 5) throw std::out_of_range("variant index must be in 0..5");
  if (fact_scale < 1) throw std::out_of_range("fact scale must be positive");
  std::string name = variant_label(family, index, fact_scale);
  switch (family) {
    case 1: return family1(index, fact_scale, name);
    case 2: return family2(index, fact_scale, name);
    case 3: return family3(index, fact_scale, name);
    default: throw std::out_of_range("family must be 1, 2 or 3");
  }
}

}  // namespace gem
