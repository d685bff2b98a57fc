#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace burstsync {

using Bit = std::uint8_t;

/// Finite binary sequence. Holds the source block, the side-information
/// and deletion patterns alike. The empty string is a valid value.
class BitString {
 public:
  BitString() = default;

  explicit BitString(std::size_t length, Bit fill = 0) : bits_(length, check(fill)) {}

  BitString(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) bits_.push_back(check(b));
  }

  /// Parses a string of '0'/'1' characters.
  static BitString parse(std::string_view text) {
    BitString out;
    out.bits_.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') throw std::invalid_argument("BitString: expected '0' or '1'");
      out.bits_.push_back(static_cast<Bit>(c - '0'));
    }
    return out;
  }

  /// Low `length` bits of `word`, least significant bit first.
  static BitString from_word(std::uint64_t word, std::size_t length) {
    if (length > 64) throw std::invalid_argument("BitString::from_word: length > 64");
    BitString out(length);
    for (std::size_t i = 0; i < length; ++i) out.bits_[i] = static_cast<Bit>((word >> i) & 1u);
    return out;
  }

  std::uint64_t to_word() const {
    if (bits_.size() > 64) throw std::length_error("BitString::to_word: length > 64");
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i) w |= std::uint64_t{bits_[i]} << i;
    return w;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  Bit operator[](std::size_t i) const { return bits_[i]; }
  Bit at(std::size_t i) const { return bits_.at(i); }
  void set(std::size_t i, Bit b) { bits_.at(i) = check(b); }
  void push_back(Bit b) { bits_.push_back(check(b)); }

  std::size_t count_ones() const noexcept {
    std::size_t c = 0;
    for (Bit b : bits_) c += b;
    return c;
  }

  /// Half-open slice [first, first + count).
  BitString slice(std::size_t first, std::size_t count) const {
    if (first + count > bits_.size()) throw std::out_of_range("BitString::slice");
    BitString out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(first),
                     bits_.begin() + static_cast<std::ptrdiff_t>(first + count));
    return out;
  }

  BitString complemented() const {
    BitString out = *this;
    for (Bit& b : out.bits_) b ^= 1u;
    return out;
  }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (Bit b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  const std::vector<Bit>& bits() const noexcept { return bits_; }
  auto begin() const noexcept { return bits_.begin(); }
  auto end() const noexcept { return bits_.end(); }

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  static Bit check(int b) {
    if (b != 0 && b != 1) throw std::invalid_argument("BitString: bit must be 0 or 1");
    return static_cast<Bit>(b);
  }

  std::vector<Bit> bits_;
};

}  // namespace burstsync
