#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "scout/errors.hpp"

namespace scout {

struct GridDims {
  int width = 0;
  int height = 0;

  int cell_count() const { return width * height; }
  bool contains(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  // Row-major: index = y * width + x.
  int index(int x, int y) const { return y * width + x; }
  bool operator==(const GridDims&) const = default;
};

// Fixed-capacity bitset over grid cells. Coverage math runs on whole-word
// set algebra so counts stay exact integers.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(int nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  int capacity() const { return nbits_; }

  void insert(int i) { words_[static_cast<size_t>(i) >> 6] |= 1ULL << (i & 63); }

  bool contains(int i) const {
    return (words_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1ULL;
  }

  // Inserts and reports whether the bit was newly set.
  bool insert_new(int i) {
    uint64_t& w = words_[static_cast<size_t>(i) >> 6];
    uint64_t bit = 1ULL << (i & 63);
    bool fresh = (w & bit) == 0;
    w |= bit;
    return fresh;
  }

  int count() const {
    int n = 0;
    for (uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  bool empty() const {
    for (uint64_t w : words_) {
      if (w) return false;
    }
    return true;
  }

  CellSet& operator|=(const CellSet& o) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  // |o \ this|: cells of o not already present here.
  int count_new(const CellSet& o) const {
    int n = 0;
    for (size_t i = 0; i < words_.size(); ++i) {
      n += std::popcount(o.words_[i] & ~words_[i]);
    }
    return n;
  }

  bool intersects(const CellSet& o) const {
    for (size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & o.words_[i]) return true;
    }
    return false;
  }

  std::vector<int32_t> to_indices() const {
    std::vector<int32_t> out;
    for (size_t wi = 0; wi < words_.size(); ++wi) {
      uint64_t w = words_[wi];
      while (w) {
        int b = std::countr_zero(w);
        out.push_back(static_cast<int32_t>(wi * 64 + static_cast<size_t>(b)));
        w &= w - 1;
      }
    }
    return out;
  }

  static CellSet from_indices(int nbits, std::span<const int32_t> idx) {
    CellSet s(nbits);
    for (int32_t i : idx) {
      if (i < 0 || i >= nbits) throw FormatError("cell index out of range");
      s.insert(i);
    }
    return s;
  }

  bool operator==(const CellSet&) const = default;

 private:
  int nbits_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace scout
