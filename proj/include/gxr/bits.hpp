#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gxr {

/// Fixed-width dynamic bitset. Width is set at construction; all binary
/// operations require equal widths.
class BitSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitSet() = default;
  explicit BitSet(std::size_t size) : size_(size), words_(word_count(size), 0) {}

  static std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

  static BitSet full(std::size_t size) {
    BitSet s(size);
    std::fill(s.words_.begin(), s.words_.end(), ~Word{0});
    s.trim();
    return s;
  }

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) noexcept { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) noexcept { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void assign(std::size_t i, bool v) noexcept { v ? set(i) : reset(i); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }
  bool any() const noexcept { return !none(); }

  bool is_subset_of(const BitSet& o) const noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }
  bool intersects(const BitSet& o) const noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & o.words_[k]) return true;
    return false;
  }

  BitSet& operator|=(const BitSet& o) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  BitSet& operator&=(const BitSet& o) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  /// this := this \ o
  BitSet& subtract(const BitSet& o) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }
  friend BitSet operator|(BitSet a, const BitSet& b) { return a |= b; }
  friend BitSet operator&(BitSet a, const BitSet& b) { return a &= b; }

  /// Calls f(i) for every set bit in increasing order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      Word w = words_[k];
      while (w) {
        f(k * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  /// Ordering by indicator string: position 0 is the most significant
  /// character and '1' > '0'.
  friend std::strong_ordering indicator_order(const BitSet& a, const BitSet& b) noexcept {
    for (std::size_t k = 0; k < a.words_.size(); ++k) {
      Word diff = a.words_[k] ^ b.words_[k];
      if (diff) {
        std::size_t bit = static_cast<std::size_t>(std::countr_zero(diff));
        return ((a.words_[k] >> bit) & 1U) ? std::strong_ordering::greater : std::strong_ordering::less;
      }
    }
    return std::strong_ordering::equal;
  }

  friend bool operator==(const BitSet&, const BitSet&) = default;

 private:
  void trim() noexcept {
    if (size_ % kWordBits && !words_.empty()) words_.back() &= (Word{1} << (size_ % kWordBits)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

/// Square boolean matrix over an n-element index space, one bitset row per
/// index. Represents binary relations on nodes.
class BitMatrix {
 public:
  using Word = BitSet::Word;

  BitMatrix() = default;
  explicit BitMatrix(std::size_t n) : n_(n), stride_(BitSet::word_count(n)), words_(n * stride_, 0) {}

  static BitMatrix identity(const BitSet& universe) {
    BitMatrix m(universe.size());
    universe.for_each([&](std::size_t i) { m.set(i, i); });
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  bool test(std::size_t i, std::size_t j) const noexcept {
    return (words_[i * stride_ + j / 64] >> (j % 64)) & 1U;
  }
  void set(std::size_t i, std::size_t j) noexcept { words_[i * stride_ + j / 64] |= Word{1} << (j % 64); }

  std::span<const Word> row(std::size_t i) const noexcept { return {words_.data() + i * stride_, stride_}; }
  std::span<Word> row(std::size_t i) noexcept { return {words_.data() + i * stride_, stride_}; }

  bool row_empty(std::size_t i) const noexcept {
    auto r = row(i);
    return std::all_of(r.begin(), r.end(), [](Word w) { return w == 0; });
  }

  /// Calls f(j) for every j with (i, j) in the relation.
  template <class F>
  void for_each_in_row(std::size_t i, F&& f) const {
    auto r = row(i);
    for (std::size_t k = 0; k < stride_; ++k) {
      Word w = r[k];
      while (w) {
        f(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  BitMatrix& operator|=(const BitMatrix& o) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  BitMatrix& operator&=(const BitMatrix& o) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }

  /// Relational composition: (i, k) iff exists j with (i, j) in a and (j, k) in b.
  friend BitMatrix compose(const BitMatrix& a, const BitMatrix& b) {
    BitMatrix out(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) {
      Word* dst = out.words_.data() + i * out.stride_;
      a.for_each_in_row(i, [&](std::size_t j) {
        const Word* src = b.words_.data() + j * b.stride_;
        for (std::size_t k = 0; k < out.stride_; ++k) dst[k] |= src[k];
      });
    }
    return out;
  }

  BitMatrix transposed() const {
    BitMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i) for_each_in_row(i, [&](std::size_t j) { t.set(j, i); });
    return t;
  }

  /// universe x universe minus this relation.
  BitMatrix complement_within(const BitSet& universe) const {
    BitMatrix c(n_);
    auto u = universe.words();
    universe.for_each([&](std::size_t i) {
      auto src = row(i);
      auto dst = c.row(i);
      for (std::size_t k = 0; k < stride_; ++k) dst[k] = u[k] & ~src[k];
    });
    return c;
  }

  /// Keeps only pairs whose endpoints both lie in `universe`.
  void restrict_to(const BitSet& universe) noexcept {
    auto u = universe.words();
    for (std::size_t i = 0; i < n_; ++i) {
      auto r = row(i);
      if (!universe.test(i)) {
        std::fill(r.begin(), r.end(), Word{0});
      } else {
        for (std::size_t k = 0; k < stride_; ++k) r[k] &= u[k];
      }
    }
  }

  /// Sources with at least one successor.
  BitSet domain() const {
    BitSet d(n_);
    for (std::size_t i = 0; i < n_; ++i)
      if (!row_empty(i)) d.set(i);
    return d;
  }

  /// True iff every pair in universe x universe is related.
  bool covers(const BitSet& universe) const noexcept {
    auto u = universe.words();
    bool ok = true;
    universe.for_each([&](std::size_t i) {
      if (!ok) return;
      auto r = row(i);
      for (std::size_t k = 0; k < stride_; ++k)
        if (u[k] & ~r[k]) {
          ok = false;
          return;
        }
    });
    return ok;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> words_;
};

}  // namespace gxr
