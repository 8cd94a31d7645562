#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dst {

inline constexpr int kMaxCommodities = 256;

/// A set of commodities (0-based indices) as a fixed-width bitset.
class CommoditySet {
 public:
  static constexpr int kWords = kMaxCommodities / 64;

  CommoditySet() = default;

  static CommoditySet singleton(int k) {
    CommoditySet s;
    s.insert(k);
    return s;
  }
  /// {0, ..., b-1}
  static CommoditySet all(int b) {
    CommoditySet s;
    for (int k = 0; k < b; ++k) s.insert(k);
    return s;
  }
  static CommoditySet of(std::initializer_list<int> ks) {
    CommoditySet s;
    for (int k : ks) s.insert(k);
    return s;
  }

  void insert(int k) { words_[static_cast<std::size_t>(k / 64)] |= std::uint64_t{1} << (k % 64); }
  bool contains(int k) const { return (words_[static_cast<std::size_t>(k / 64)] >> (k % 64)) & 1U; }

  int size() const {
    int n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
  }
  bool empty() const {
    for (auto w : words_) {
      if (w) return false;
    }
    return true;
  }
  /// Lowest member, or -1 when empty.
  int first() const {
    for (int i = 0; i < kWords; ++i) {
      if (words_[static_cast<std::size_t>(i)]) return i * 64 + std::countr_zero(words_[static_cast<std::size_t>(i)]);
    }
    return -1;
  }
  std::vector<int> members() const {
    std::vector<int> out;
    for (int i = 0; i < kWords; ++i) {
      for (auto w = words_[static_cast<std::size_t>(i)]; w; w &= w - 1) out.push_back(i * 64 + std::countr_zero(w));
    }
    return out;
  }

  bool intersects(const CommoditySet& o) const {
    for (int i = 0; i < kWords; ++i) {
      if (words_[static_cast<std::size_t>(i)] & o.words_[static_cast<std::size_t>(i)]) return true;
    }
    return false;
  }
  bool subset_of(const CommoditySet& o) const {
    for (int i = 0; i < kWords; ++i) {
      if (words_[static_cast<std::size_t>(i)] & ~o.words_[static_cast<std::size_t>(i)]) return false;
    }
    return true;
  }

  CommoditySet operator|(const CommoditySet& o) const {
    CommoditySet r = *this;
    for (int i = 0; i < kWords; ++i) r.words_[static_cast<std::size_t>(i)] |= o.words_[static_cast<std::size_t>(i)];
    return r;
  }
  CommoditySet& operator|=(const CommoditySet& o) { return *this = *this | o; }

  friend bool operator==(const CommoditySet&, const CommoditySet&) = default;

  /// Numeric order of the bitset read as an unsigned integer.
  friend std::strong_ordering numeric_compare(const CommoditySet& a, const CommoditySet& b) {
    for (int i = kWords - 1; i >= 0; --i) {
      auto c = a.words_[static_cast<std::size_t>(i)] <=> b.words_[static_cast<std::size_t>(i)];
      if (c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

  /// Canonical order: by cardinality, then numeric value.
  friend bool operator<(const CommoditySet& a, const CommoditySet& b) {
    const int sa = a.size(), sb = b.size();
    if (sa != sb) return sa < sb;
    return numeric_compare(a, b) < 0;
  }

  std::size_t hash() const {
    std::size_t h = 0;
    for (auto w : words_) h = h * 0x9E3779B97F4A7C15ULL + std::hash<std::uint64_t>{}(w) + (h >> 29);
    return h;
  }

  /// Bit string over b commodities, commodity 0 first.
  std::string to_bit_string(int b) const {
    std::string s(static_cast<std::size_t>(b), '0');
    for (int k = 0; k < b; ++k) {
      if (contains(k)) s[static_cast<std::size_t>(k)] = '1';
    }
    return s;
  }

 private:
  std::array<std::uint64_t, kWords> words_{};
};

struct CommoditySetHash {
  std::size_t operator()(const CommoditySet& s) const { return s.hash(); }
};

}  // namespace dst
