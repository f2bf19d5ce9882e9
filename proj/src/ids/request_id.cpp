#include "gem/ids/request_id.hpp"

#include <algorithm>

namespace gem {

namespace {

// Segments never contain this byte, so joined keys are unambiguous.
constexpr char kKeySeparator = '\x1f';

std::string key_of(const RequestId& id) {
  std::string key;
  for (const auto& s : id.segments()) {
    key += s;
    key += kKeySeparator;
  }
  return key;
}

}  // namespace

RequestId::RequestId(std::vector<std::string> segments) : segments_(std::move(segments)) {
  for (const auto& s : segments_) {
    if (s.empty()) throw std::invalid_argument("empty id segment");
  }
}

RequestId RequestId::prefix(std::size_t length) const {
  std::size_t n = std::min(length, segments_.size());
  return RequestId(std::vector<std::string>(segments_.begin(), segments_.begin() + n));
}

RequestId RequestId::extended(std::string segment) const {
  auto segs = segments_;
  segs.push_back(std::move(segment));
  return RequestId(std::move(segs));
}

std::string RequestId::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (i > 0) out += "·";
    out += segments_[i];
  }
  return out;
}

bool is_lower(const RequestId& a, const RequestId& b) {
  const auto& sa = a.segments();
  const auto& sb = b.segments();
  return sb.size() < sa.size() && std::equal(sb.begin(), sb.end(), sa.begin());
}

bool comparable(const RequestId& a, const RequestId& b) {
  return a == b || is_lower(a, b) || is_lower(b, a);
}

bool is_side(const RequestId& a, const RequestId& b, const EmissionOrder& order) {
  if (comparable(a, b)) {
    throw IdOrderError("side order undefined for comparable ids " + a.to_string() + " and " +
                       b.to_string());
  }
  if (a.empty() || b.empty() || a.segments().front() != b.segments().front()) {
    throw IdOrderError("ids " + a.to_string() + " and " + b.to_string() + " have different roots");
  }
  std::size_t i = 0;
  while (a.segments()[i] == b.segments()[i]) ++i;
  auto oa = order(a.prefix(i + 1));
  auto ob = order(b.prefix(i + 1));
  if (!oa || !ob) {
    throw IdOrderError("emission of " + a.prefix(i + 1).to_string() + " or " +
                       b.prefix(i + 1).to_string() + " was not recorded");
  }
  return *oa < *ob;
}

IdGenerator::IdGenerator(std::string principal, IdGenMode mode, std::uint64_t seed)
    : principal_(std::move(principal)), mode_(mode), rng_(seed) {}

RequestId IdGenerator::fresh_root() { return record(RequestId({next_segment()})); }

RequestId IdGenerator::extend(const RequestId& parent) {
  return record(parent.extended(next_segment()));
}

std::optional<std::uint64_t> IdGenerator::ordinal(const RequestId& id) const {
  auto it = ordinals_.find(key_of(id));
  if (it == ordinals_.end()) return std::nullopt;
  return it->second;
}

RequestId IdGenerator::record(RequestId id) {
  ordinals_.emplace(key_of(id), emitted_++);
  return id;
}

std::string IdGenerator::next_segment() {
  if (mode_.traceability == Traceability::traceable) {
    return principal_ + "_" + std::to_string(++counter_);
  }
  // Digits and uppercase only: principal names in policies are lowercase
  // constants, so a clash is rare; the substring check covers the rest.
  static constexpr char kAlphabet[] = "0123456789ABCDEFGHJKLMNPQRSTUVWXYZ";
  std::uniform_int_distribution<std::size_t> pick(0, sizeof(kAlphabet) - 2);
  std::uniform_int_distribution<std::size_t> length(mode_.min_length, mode_.max_length);
  while (true) {
    std::size_t n = mode_.length == SegmentLength::fixed ? mode_.fixed_length : length(rng_);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += kAlphabet[pick(rng_)];
    if (!principal_.empty() && s.find(principal_) != std::string::npos) continue;
    if (!used_segments_.insert(s).second) continue;
    return s;
  }
}

}  // namespace gem

namespace {

std::size_t fold(std::size_t h, const std::string& segment) {
  return h ^ (std::hash<std::string>{}(segment) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

std::vector<std::size_t> gem::prefix_hashes(const RequestId& id) {
  std::vector<std::size_t> out;
  out.reserve(id.depth());
  std::size_t h = 0;
  for (const auto& s : id.segments()) out.push_back(h = fold(h, s));
  return out;
}

std::size_t std::hash<gem::RequestId>::operator()(const gem::RequestId& id) const noexcept {
  std::size_t h = 0;
  for (const auto& s : id.segments()) h = fold(h, s);
  return h;
}
