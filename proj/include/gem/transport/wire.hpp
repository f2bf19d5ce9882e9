#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gem/transport/sim_bus.hpp"

namespace gem {

class WireError : public std::runtime_error {
 public:
  WireError(std::size_t offset, const std::string& message);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// One JSON object per line, terminated by '\n'.
std::string encode_frame(const Envelope& envelope);
// `frame` must include the terminating newline. Offsets in errors are
// relative to `base_offset`.
Envelope decode_frame(std::string_view frame, std::size_t base_offset = 0);

// Splits a byte stream into frames, tracking the stream offset.
class FrameReader {
 public:
  void feed(std::string_view bytes);
  std::optional<Envelope> next();
  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::string buffer_;
  std::size_t consumed_ = 0;
};

}  // namespace gem
