#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gem {

class RequestId {
 public:
  RequestId() = default;
  explicit RequestId(std::vector<std::string> segments);

  const std::vector<std::string>& segments() const { return segments_; }
  std::size_t depth() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  RequestId prefix(std::size_t length) const;
  RequestId extended(std::string segment) const;

  // Segments joined by "·".
  std::string to_string() const;

  friend bool operator==(const RequestId&, const RequestId&) = default;
  friend auto operator<=>(const RequestId&, const RequestId&) = default;

 private:
  std::vector<std::string> segments_;
};

// a ⊑ b: b is a strict prefix of a.
bool is_lower(const RequestId& a, const RequestId& b);

// Element k is std::hash of id.prefix(k + 1), computed in one pass.
std::vector<std::size_t> prefix_hashes(const RequestId& id);
bool comparable(const RequestId& a, const RequestId& b);

class IdOrderError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Maps an emitted id to its emission ordinal, or nothing if unknown.
using EmissionOrder = std::function<std::optional<std::uint64_t>(const RequestId&)>;

// a ↪ b: at the first differing segment, a's segment was emitted first.
// Throws IdOrderError for comparable ids, different roots, or ids whose
// emission was not recorded.
bool is_side(const RequestId& a, const RequestId& b, const EmissionOrder& order);

enum class Traceability { traceable, untraceable };
enum class SegmentLength { fixed, variable };

struct IdGenMode {
  Traceability traceability = Traceability::untraceable;
  SegmentLength length = SegmentLength::variable;
  std::size_t fixed_length = 8;
  std::size_t min_length = 4;
  std::size_t max_length = 12;

  static IdGenMode traceable() { return {Traceability::traceable, SegmentLength::variable}; }
};

// Per-engine identifier source. Traceable segments are "<principal>_<n>" with
// one counter for the whole engine; untraceable segments are random strings
// that never contain the principal name.
class IdGenerator {
 public:
  IdGenerator(std::string principal, IdGenMode mode, std::uint64_t seed);

  RequestId fresh_root();
  RequestId extend(const RequestId& parent);

  std::optional<std::uint64_t> ordinal(const RequestId& id) const;
  const IdGenMode& mode() const { return mode_; }
  const std::string& principal() const { return principal_; }

 private:
  std::string next_segment();
  RequestId record(RequestId id);

  std::string principal_;
  IdGenMode mode_;
  std::mt19937_64 rng_;
  std::uint64_t counter_ = 0;
  std::uint64_t emitted_ = 0;
  std::set<std::string> used_segments_;
  std::unordered_map<std::string, std::uint64_t> ordinals_;
};

}  // namespace gem

template <>
struct std::hash<gem::RequestId> {
  std::size_t operator()(const gem::RequestId& id) const noexcept;
};
