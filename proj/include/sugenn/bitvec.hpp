#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "sugenn/errors.hpp"

namespace sugenn {

/// Fixed-width bit vector packed little-endian into 64-bit words: bit i lives
/// in word i/64 at position i%64. Unused high bits of the last word stay zero,
/// so whole-word operations (popcount, xor, and) are exact.
class BitVec {
 public:
  BitVec() = default;

  explicit BitVec(std::size_t bit_count)
      : bits_(bit_count), words_((bit_count + 63) / 64, 0) {}

  static BitVec from_indices(std::size_t bit_count,
                             std::span<const std::size_t> indices) {
    BitVec v(bit_count);
    for (std::size_t i : indices) v.set(i);
    return v;
  }

  static BitVec from_indices(std::size_t bit_count,
                             std::initializer_list<std::size_t> indices) {
    return from_indices(bit_count,
                        std::span<const std::size_t>(indices.begin(), indices.size()));
  }

  std::size_t size() const { return bits_; }

  bool test(std::size_t pos) const {
    check_pos(pos);
    return (words_[pos >> 6] >> (pos & 63)) & 1u;
  }

  void set(std::size_t pos, bool value = true) {
    check_pos(pos);
    const std::uint64_t mask = std::uint64_t{1} << (pos & 63);
    if (value) {
      words_[pos >> 6] |= mask;
    } else {
      words_[pos >> 6] &= ~mask;
    }
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool any() const {
    for (std::uint64_t w : words_)
      if (w) return true;
    return false;
  }

  bool none() const { return !any(); }

  BitVec& operator&=(const BitVec& o) {
    check_same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  BitVec& operator|=(const BitVec& o) {
    check_same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  BitVec& operator^=(const BitVec& o) {
    check_same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }

  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  /// Bitwise complement within the declared width (tail bits stay zero).
  BitVec complement() const {
    BitVec r(*this);
    for (std::uint64_t& w : r.words_) w = ~w;
    r.mask_tail();
    return r;
  }

  bool is_subset_of(const BitVec& o) const {
    check_same(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  /// Ascending positions of the set bits.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each_set([&](std::size_t p) { out.push_back(p); });
    return out;
  }

  template <typename Fn>
  void for_each_set(Fn&& fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        const int b = std::countr_zero(w);
        fn(wi * 64 + static_cast<std::size_t>(b));
        w &= w - 1;
      }
    }
  }

  std::span<const std::uint64_t> words() const { return words_; }

  friend std::size_t intersection_count(const BitVec& a, const BitVec& b) {
    a.check_same(b);
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i]));
    return c;
  }

  friend bool operator==(const BitVec&, const BitVec&) = default;

  /// "{0,2,5}" — for diagnostics and test failure messages.
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for_each_set([&](std::size_t p) {
      if (!first) s += ',';
      s += std::to_string(p);
      first = false;
    });
    s += '}';
    return s;
  }

 private:
  void check_pos(std::size_t pos) const {
    if (pos >= bits_)
      throw dimension_error("BitVec: position " + std::to_string(pos) +
                            " out of range for width " + std::to_string(bits_));
  }

  void check_same(const BitVec& o) const {
    if (bits_ != o.bits_)
      throw dimension_error("BitVec: width mismatch (" + std::to_string(bits_) +
                            " vs " + std::to_string(o.bits_) + ")");
  }

  void mask_tail() {
    const std::size_t rem = bits_ & 63;
    if (rem != 0 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << rem) - 1;
  }

  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Order on ascending index sequences; the order used for all deterministic
/// subset listings (a set precedes its proper supersets-with-larger-suffix,
/// and equal-size sets compare like sorted tuples).
inline bool lex_less(const BitVec& a, const BitVec& b) {
  const auto ia = a.indices();
  const auto ib = b.indices();
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

}  // namespace sugenn
