#pragma once

// Square 2^k x 2^k rasters: 8-bit grayscale images, binary images and the
// bit planes that connect them.
//
// Coordinates are (y, x) = (row, column) with the origin at the top-left;
// storage is row-major. Bit index 0 is the least significant bit.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qwm/error.hpp"

namespace qwm {

struct GrayTag {
  static constexpr std::uint8_t max_value = 255;
  static constexpr const char* name = "gray";
};

struct BinaryTag {
  static constexpr std::uint8_t max_value = 1;
  static constexpr const char* name = "binary";
};

constexpr int kMaxSideExp = 15;

template <typename Tag>
class SquareRaster {
 public:
  using value_type = std::uint8_t;

  SquareRaster() = default;

  explicit SquareRaster(int side_exp, value_type fill = 0)
      : side_exp_(checked_exp(side_exp)),
        data_(std::size_t{1} << (2 * side_exp), fill) {
    require(fill <= Tag::max_value, ErrorKind::InvalidArgument,
            std::string(Tag::name) + " fill value out of range");
  }

  SquareRaster(int side_exp, std::vector<value_type> data)
      : side_exp_(checked_exp(side_exp)), data_(std::move(data)) {
    require(data_.size() == (std::size_t{1} << (2 * side_exp)), ErrorKind::Structural,
            "pixel count does not equal 4^side_exp");
    for (auto v : data_) {
      require(v <= Tag::max_value, ErrorKind::InvalidArgument,
              std::string(Tag::name) + " pixel value out of range");
    }
  }

  int side_exp() const noexcept { return side_exp_; }
  std::size_t side() const noexcept { return std::size_t{1} << side_exp_; }
  std::size_t size() const noexcept { return data_.size(); }

  value_type operator()(std::size_t y, std::size_t x) const { return data_[y * side() + x]; }

  value_type at(std::size_t y, std::size_t x) const {
    require(y < side() && x < side(), ErrorKind::Structural, "coordinate out of range");
    return data_[y * side() + x];
  }

  void set(std::size_t y, std::size_t x, value_type v) {
    require(v <= Tag::max_value, ErrorKind::InvalidArgument,
            std::string(Tag::name) + " pixel value out of range");
    data_[y * side() + x] = v;
  }

  std::span<const value_type> pixels() const noexcept { return data_; }

  // Unchecked write access; callers keep values within Tag::max_value.
  std::span<value_type> mutable_pixels() noexcept { return data_; }

  friend bool operator==(const SquareRaster&, const SquareRaster&) = default;

 private:
  static int checked_exp(int e) {
    require(e >= 0 && e <= kMaxSideExp, ErrorKind::Structural,
            "side exponent out of range: " + std::to_string(e));
    return e;
  }

  int side_exp_ = 0;
  std::vector<value_type> data_ = std::vector<value_type>(1, 0);
};

using GrayImage = SquareRaster<GrayTag>;
using BinaryImage = SquareRaster<BinaryTag>;

struct BitPlane {
  BinaryImage bits;
  int bit_index = 0;

  friend bool operator==(const BitPlane&, const BitPlane&) = default;
};

/// Returns k with 2^k == n, or -1 if n is not a positive power of two.
constexpr int exact_log2(std::size_t n) noexcept {
  if (n == 0 || (n & (n - 1)) != 0) return -1;
  int k = 0;
  while ((std::size_t{1} << k) != n) ++k;
  return k;
}

/// Planes b = 0..7 in ascending order.
inline std::array<BitPlane, 8> decompose_bitplanes(const GrayImage& img) {
  std::array<BitPlane, 8> planes;
  const auto src = img.pixels();
  for (int b = 0; b < 8; ++b) {
    BinaryImage bits(img.side_exp());
    auto dst = bits.mutable_pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (src[i] >> b) & 1u;
    planes[b] = BitPlane{std::move(bits), b};
  }
  return planes;
}

/// Inverse of decompose_bitplanes. Planes may arrive in any order but must
/// cover bit indices 0..7 exactly once and share one size.
inline GrayImage reconstruct_bitplanes(std::span<const BitPlane> planes) {
  require(planes.size() == 8, ErrorKind::Structural, "expected 8 bit planes");
  const int exp = planes[0].bits.side_exp();
  std::array<bool, 8> seen{};
  for (const auto& p : planes) {
    require(p.bit_index >= 0 && p.bit_index < 8, ErrorKind::Structural,
            "bit index out of range");
    require(!seen[p.bit_index], ErrorKind::Structural,
            "duplicate bit index " + std::to_string(p.bit_index));
    require(p.bits.side_exp() == exp, ErrorKind::Structural, "bit planes differ in size");
    seen[p.bit_index] = true;
  }
  GrayImage out(exp);
  auto dst = out.mutable_pixels();
  for (const auto& p : planes) {
    const auto src = p.bits.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = static_cast<std::uint8_t>(dst[i] | (src[i] << p.bit_index));
  }
  return out;
}

}  // namespace qwm
