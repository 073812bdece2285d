#pragma once

// Bit strings, binary integers and greedy chunking.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toporec/error.hpp"

namespace toporec {

/// A sequence of bits stored as '0'/'1' characters.
class BitString {
 public:
  BitString() = default;
  BitString(std::string_view bits) : bits_(bits) {  // NOLINT: implicit from literals is handy in tests
    if (!std::all_of(bits_.begin(), bits_.end(), [](char c) { return c == '0' || c == '1'; }))
      throw ParseError("bit string contains a character other than 0/1");
  }
  BitString(const char* bits) : BitString(std::string_view(bits)) {}

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  char operator[](std::size_t i) const { return bits_[i]; }
  const std::string& str() const { return bits_; }

  BitString& operator+=(const BitString& o) {
    bits_ += o.bits_;
    return *this;
  }
  friend BitString operator+(BitString a, const BitString& b) { return a += b; }
  void push_back(bool b) { bits_.push_back(b ? '1' : '0'); }
  BitString substr(std::size_t pos, std::size_t len = std::string::npos) const {
    BitString out;
    out.bits_ = bits_.substr(pos, len);
    return out;
  }

  auto operator<=>(const BitString&) const = default;

 private:
  std::string bits_;
};

/// Minimal binary representation ("0" for zero).
inline BitString binary(std::uint64_t x) {
  if (x == 0) return BitString("0");
  std::string s;
  for (; x; x >>= 1) s.push_back((x & 1) ? '1' : '0');
  std::reverse(s.begin(), s.end());
  return BitString(s);
}

/// Binary of x left-padded with zeros to `width` bits.
inline BitString binary_padded(std::uint64_t x, std::size_t width) {
  BitString b = binary(x);
  if (b.size() > width)
    throw std::invalid_argument(std::to_string(x) + " does not fit in " + std::to_string(width) + " bits");
  return BitString(std::string(width - b.size(), '0')) + b;
}

inline std::uint64_t to_uint(const BitString& b) {
  if (b.empty()) throw MalformedLabel("empty integer field");
  if (b.size() > 64) throw MalformedLabel("integer field wider than 64 bits");
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < b.size(); ++i) x = (x << 1) | (b[i] == '1' ? 1u : 0u);
  return x;
}

struct Chunk {
  std::size_t index;  // 1-based
  BitString bits;
  bool operator==(const Chunk&) const = default;
};

/// Greedy split into pieces of length c, the last piece holding the remainder.
inline std::vector<Chunk> chunk(const BitString& s, std::size_t c) {
  if (s.empty()) throw std::invalid_argument("cannot chunk an empty string");
  if (c == 0) throw std::invalid_argument("chunk length must be positive");
  std::vector<Chunk> out;
  for (std::size_t pos = 0; pos < s.size(); pos += c) out.push_back({out.size() + 1, s.substr(pos, c)});
  return out;
}

/// Concatenates chunks in index order. Indices must be exactly 1..k.
inline BitString unchunk(std::vector<Chunk> chunks) {
  if (chunks.empty()) throw MissingChunk("no chunks");
  std::sort(chunks.begin(), chunks.end(), [](const Chunk& a, const Chunk& b) { return a.index < b.index; });
  BitString out;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (chunks[i].index != i + 1) throw MissingChunk("chunk " + std::to_string(i + 1) + " is missing or repeated");
    out += chunks[i].bits;
  }
  return out;
}

}  // namespace toporec
