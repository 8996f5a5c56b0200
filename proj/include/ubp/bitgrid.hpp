#pragma once

// Row-major bit matrix with 64-bit word rows. Bits past the logical width
// stay zero at all times; every operation below preserves that.

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace ubp {

/// Copy `len` bits from src starting at bit s0 into dst starting at bit d0,
/// OR-ing into whatever dst already holds. Caller clears dst first when a
/// plain copy is wanted. Ranges must be in-bounds for both word arrays.
inline void copy_bit_range(const std::uint64_t* src, std::size_t s0,
                           std::uint64_t* dst, std::size_t d0,
                           std::size_t len) {
  std::size_t pos = 0;
  while (pos < len) {
    const std::size_t d = d0 + pos;
    const std::size_t dw = d >> 6;
    const std::size_t db = d & 63;
    const std::size_t chunk = std::min<std::size_t>(64 - db, len - pos);
    const std::size_t s = s0 + pos;
    const std::size_t sw = s >> 6;
    const std::size_t sb = s & 63;
    std::uint64_t bits = src[sw] >> sb;
    if (sb != 0 && sb + chunk > 64) bits |= src[sw + 1] << (64 - sb);
    if (chunk < 64) bits &= (std::uint64_t{1} << chunk) - 1;
    dst[dw] |= bits << db;
    pos += chunk;
  }
}

class BitGrid {
 public:
  BitGrid() = default;
  BitGrid(int width, int height)
      : w_(width), h_(height), wpr_((width + 63) / 64),
        bits_(static_cast<std::size_t>(wpr_) * height, 0) {
    assert(width > 0 && height > 0);
  }

  int width() const { return w_; }
  int height() const { return h_; }
  int words_per_row() const { return wpr_; }

  std::uint64_t* row(int y) {
    assert(y >= 0 && y < h_);
    return bits_.data() + static_cast<std::size_t>(y) * wpr_;
  }
  const std::uint64_t* row(int y) const {
    assert(y >= 0 && y < h_);
    return bits_.data() + static_cast<std::size_t>(y) * wpr_;
  }

  bool get(int x, int y) const {
    assert(x >= 0 && x < w_);
    return (row(y)[x >> 6] >> (x & 63)) & 1;
  }

  void set(int x, int y, bool v = true) {
    assert(x >= 0 && x < w_);
    std::uint64_t& w = row(y)[x >> 6];
    const std::uint64_t m = std::uint64_t{1} << (x & 63);
    if (v)
      w |= m;
    else
      w &= ~m;
  }

  void clear() { std::fill(bits_.begin(), bits_.end(), 0); }

  void fill_all() {
    std::fill(bits_.begin(), bits_.end(), ~std::uint64_t{0});
    trim_tail();
  }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (std::uint64_t w : bits_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool any() const {
    for (std::uint64_t w : bits_)
      if (w) return true;
    return false;
  }

  bool all_set() const {
    return popcount() == static_cast<std::size_t>(w_) * h_;
  }

  friend bool operator==(const BitGrid& a, const BitGrid& b) {
    return a.w_ == b.w_ && a.h_ == b.h_ && a.bits_ == b.bits_;
  }

 private:
  void trim_tail() {
    const int tail = w_ & 63;
    if (tail == 0) return;
    const std::uint64_t m = (std::uint64_t{1} << tail) - 1;
    for (int y = 0; y < h_; ++y) row(y)[wpr_ - 1] &= m;
  }

  int w_ = 0, h_ = 0, wpr_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace ubp
