#pragma once

// Seeded salt-and-pepper noise and top-left cropping.
//
// The noise generator is std::mt19937_64 (fully specified by the standard)
// driven through our own rejection sampler, so outputs are reproducible
// across standard libraries. Its identifier is kNoisePrng.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "qwm/error.hpp"
#include "qwm/image.hpp"

namespace qwm {

inline constexpr const char* kNoisePrng = "mt19937_64+rejection-fisher-yates";

enum class AttackKind { SaltPepper, Crop };

inline std::string to_string(AttackKind k) { return k == AttackKind::SaltPepper ? "salt_pepper" : "crop"; }

inline AttackKind parse_attack_kind(const std::string& s) {
  if (s == "salt_pepper" || s == "salt-pepper" || s == "noise") return AttackKind::SaltPepper;
  if (s == "crop") return AttackKind::Crop;
  fail(ErrorKind::InvalidArgument, "unknown attack kind '" + s + "'");
}

struct AttackSpec {
  AttackKind kind = AttackKind::SaltPepper;
  double amount = 0.0;  // noise density or cropped area fraction
  std::uint64_t seed = 0;
  double crop_exponent = 0.5;  // side = N * amount^exponent; 0.5 reads amount as area

  void validate() const {
    require(amount >= 0.0 && amount <= 1.0, ErrorKind::InvalidArgument,
            "attack amount must lie in [0,1]");
    require(crop_exponent > 0.0, ErrorKind::InvalidArgument, "crop exponent must be positive");
  }
};

namespace detail {

/// Uniform integer in [0, n) by rejection on the raw 64-bit output.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

}  // namespace detail

/// Indices of the pixels salt_pepper replaces, in selection order.
inline std::vector<std::size_t> salt_pepper_positions(std::size_t pixel_count, double p,
                                                      std::uint64_t seed) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidArgument, "noise density must lie in [0,1]");
  const auto count = static_cast<std::size_t>(std::llround(p * static_cast<double>(pixel_count)));
  std::vector<std::size_t> idx(pixel_count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + detail::uniform_below(rng, pixel_count - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

inline GrayImage salt_pepper(const GrayImage& img, double p, std::uint64_t seed) {
  const auto positions = salt_pepper_positions(img.size(), p, seed);
  // Values come from a second stream so the position set depends only on (count, seed).
  std::mt19937_64 values(seed ^ 0x9E3779B97F4A7C15ull);
  GrayImage out = img;
  auto px = out.mutable_pixels();
  for (auto i : positions) px[i] = (values() >> 63) ? 255 : 0;
  return out;
}

inline std::size_t crop_side(std::size_t side, double area_fraction, double exponent = 0.5) {
  require(area_fraction >= 0.0 && area_fraction <= 1.0, ErrorKind::InvalidArgument,
          "crop fraction must lie in [0,1]");
  require(exponent > 0.0, ErrorKind::InvalidArgument, "crop exponent must be positive");
  const double s = static_cast<double>(side) * std::pow(area_fraction, exponent);
  return std::min(side, static_cast<std::size_t>(std::llround(s)));
}

/// Zeroes the square anchored at (0,0) whose side is N * area_fraction^exponent.
inline GrayImage crop_topleft(const GrayImage& img, double area_fraction, double exponent = 0.5) {
  const std::size_t c = crop_side(img.side(), area_fraction, exponent);
  GrayImage out = img;
  auto px = out.mutable_pixels();
  for (std::size_t y = 0; y < c; ++y)
    for (std::size_t x = 0; x < c; ++x) px[y * img.side() + x] = 0;
  return out;
}

inline GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec) {
  spec.validate();
  return spec.kind == AttackKind::SaltPepper ? salt_pepper(img, spec.amount, spec.seed)
                                             : crop_topleft(img, spec.amount, spec.crop_exponent);
}

}  // namespace qwm
