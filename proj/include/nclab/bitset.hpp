#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nclab {

/// Fixed-size bit set with word access. Used for packet sets and for the
/// adjacency rows of conflict graphs, where the clique test is an AND over
/// words. Bits past size() are always zero.
class BitSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitSet() = default;
  explicit BitSet(std::size_t size) : size_(size), words_(word_count(size), 0) {}

  static std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

  std::size_t size() const { return size_; }
  bool empty_domain() const { return size_ == 0; }

  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void assign(std::size_t i, bool value) { value ? set(i) : reset(i); }

  void set_all() {
    for (auto& w : words_) w = ~Word{0};
    trim();
  }
  void clear() {
    for (auto& w : words_) w = 0;
  }

  // Sets bits [begin, end).
  void set_range(std::size_t begin, std::size_t end) {
    while (begin < end && begin % kWordBits != 0) set(begin++);
    while (begin + kWordBits <= end) {
      words_[begin / kWordBits] = ~Word{0};
      begin += kWordBits;
    }
    while (begin < end) set(begin++);
  }

  std::size_t count() const {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  // Number of set bits in [begin, end).
  std::size_t count_range(std::size_t begin, std::size_t end) const {
    if (begin >= end) return 0;
    const std::size_t first = begin / kWordBits;
    const std::size_t last = (end - 1) / kWordBits;
    const Word head = ~Word{0} << (begin % kWordBits);
    const Word tail = ~Word{0} >> (kWordBits - 1 - (end - 1) % kWordBits);
    if (first == last) return static_cast<std::size_t>(std::popcount(words_[first] & head & tail));
    std::size_t total = static_cast<std::size_t>(std::popcount(words_[first] & head));
    for (std::size_t k = first + 1; k < last; ++k) total += static_cast<std::size_t>(std::popcount(words_[k]));
    return total + static_cast<std::size_t>(std::popcount(words_[last] & tail));
  }

  bool any() const {
    for (auto w : words_)
      if (w != 0) return true;
    return false;
  }
  bool none() const { return !any(); }

  bool intersects(const BitSet& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & other.words_[k]) return true;
    return false;
  }

  bool is_subset_of(const BitSet& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~other.words_[k]) return false;
    return true;
  }

  BitSet& operator&=(const BitSet& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
    return *this;
  }
  BitSet& operator|=(const BitSet& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
    return *this;
  }
  // this &= ~other
  BitSet& subtract(const BitSet& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~other.words_[k];
    return *this;
  }

  BitSet complement() const {
    BitSet out(*this);
    for (auto& w : out.words_) w = ~w;
    out.trim();
    return out;
  }

  friend BitSet operator&(BitSet a, const BitSet& b) { return a &= b; }
  friend BitSet operator|(BitSet a, const BitSet& b) { return a |= b; }
  friend BitSet operator-(BitSet a, const BitSet& b) { return a.subtract(b); }
  friend bool operator==(const BitSet&, const BitSet&) = default;

  // Index of the first set bit at or after `from`, or size() if none.
  std::size_t find_next(std::size_t from) const {
    if (from >= size_) return size_;
    std::size_t k = from / kWordBits;
    Word w = words_[k] & (~Word{0} << (from % kWordBits));
    while (true) {
      if (w != 0) return k * kWordBits + static_cast<std::size_t>(std::countr_zero(w));
      if (++k == words_.size()) return size_;
      w = words_[k];
    }
  }
  std::size_t find_first() const { return find_next(0); }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      Word w = words_[k];
      while (w != 0) {
        f(k * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

 private:
  void trim() {
    if (size_ % kWordBits != 0 && !words_.empty()) words_.back() &= ~Word{0} >> (kWordBits - size_ % kWordBits);
  }

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

}  // namespace nclab
