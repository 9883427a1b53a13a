#pragma once

// Histogram-driven choice of the LSB embedding rule.
//
// The watermark's mass in the dark interval [0,127] versus the bright
// interval [128,255] selects one of three rules, keyed on V, the XOR of the
// carrier pixel's 3 (eta = 0) or 4 (eta = 1) most significant bits:
//
//   tau1 tau2 | embedded LSB      | extracted bit
//   ----------+-------------------+------------------
//    0    -   | w                 | lsb
//    1    0   | w xor V           | lsb xor V
//    1    1   | not (w xor V)     | not (lsb xor V)
//
// The embedded LSB never depends on the prior LSB, so the rule is a
// flip/no-change decision on the carrier bit.

#include <array>
#include <cmath>
#include <cstdint>

#include "qwm/error.hpp"
#include "qwm/image.hpp"

namespace qwm {

struct HistogramStats {
  std::array<std::uint64_t, 256> h{};
  std::array<std::uint64_t, 256> cumulative{};
  double t_dark = 0.0;
  double t_bright = 0.0;

  std::uint64_t pixel_count() const noexcept { return cumulative[255]; }
};

struct EmbedParams {
  double lambda = 0.5;
  bool tau1 = false;
  bool tau2 = false;  // only meaningful when tau1
  int eta = 0;

  friend bool operator==(const EmbedParams&, const EmbedParams&) = default;
};

inline HistogramStats histogram_stats(const GrayImage& img) {
  HistogramStats s;
  for (auto v : img.pixels()) ++s.h[v];
  std::uint64_t run = 0;
  for (std::size_t g = 0; g < 256; ++g) {
    run += s.h[g];
    s.cumulative[g] = run;
  }
  const auto total = static_cast<double>(s.pixel_count());
  s.t_dark = static_cast<double>(s.cumulative[127]) / total;
  s.t_bright = static_cast<double>(s.pixel_count() - s.cumulative[127]) / total;
  return s;
}

inline int xor_index_for_scale(int r) { return r == 1 ? 0 : r % 2; }

inline EmbedParams derive_params(const HistogramStats& stats, double lambda, int r) {
  require(lambda >= 0.0 && lambda <= 1.0, ErrorKind::InvalidArgument,
          "division threshold must lie in [0,1]");
  require(r >= 1, ErrorKind::UnsupportedScale, "scale factor must be at least 1");
  EmbedParams p;
  p.lambda = lambda;
  p.eta = xor_index_for_scale(r);
  p.tau1 = std::abs(stats.t_bright - stats.t_dark) >= lambda;
  if (p.tau1) {
    const double cut = (1.0 + lambda) / 2.0;
    if (stats.t_dark >= cut)
      p.tau2 = false;
    else if (stats.t_bright >= cut)
      p.tau2 = true;
    else  // rounding at the boundary; the dominant side decides
      p.tau2 = stats.t_bright > stats.t_dark;
  }
  return p;
}

/// V_eta: XOR of bits 7,6,5 (eta = 0) or bits 7,6,5,4 (eta = 1).
constexpr bool msb_xor_flag(std::uint8_t pixel, int eta) noexcept {
  unsigned v = ((pixel >> 7) ^ (pixel >> 6) ^ (pixel >> 5)) & 1u;
  if (eta == 1) v ^= (pixel >> 4) & 1u;
  return v != 0;
}

constexpr bool embed_bit(bool /*lsb*/, bool w, bool v, const EmbedParams& p) noexcept {
  if (!p.tau1) return w;
  return p.tau2 ? !(w != v) : (w != v);
}

constexpr bool extract_bit(bool lsb, bool v, const EmbedParams& p) noexcept {
  if (!p.tau1) return lsb;
  return p.tau2 ? !(lsb != v) : (lsb != v);
}

}  // namespace qwm
