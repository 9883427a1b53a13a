#pragma once

// Adaptive scaling of a 2^m grayscale watermark into binary images of side
// 2^(m+d): bit-plane replication followed by recursive 4-to-1 block splicing.
//
// Canonical layout (shared by embedder and extractor, effectively part of the
// key):
//   * splice quadrants: block 0 -> top-left (00), 1 -> top-right (01),
//     2 -> bottom-left (10), 3 -> bottom-right (11);
//   * r > 1 sequence: planes b0..b3 for copies 1..alpha, then planes b4..b7
//     for copies 1..alpha+2, copy-major with ascending bit index inside a copy;
//   * aggregation places sequence position t at the quadtree cell addressed
//     by the base-4 digits of t, most significant digit outermost (Z-order).
//
// Planes are copied directly. A quantum implementation must instead repeat
// the decomposition alpha+2 times (no-cloning); the resulting data is the same.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qwm/error.hpp"
#include "qwm/image.hpp"

namespace qwm {

constexpr int kMaxScale = 8;

struct ScalePlan {
  int r = 0;
  int beta = 0;
  int alpha = 0;
  int d = 0;            // aggregation level
  int q = 0;            // number of aggregated output images
  int eta = 0;          // 0: XOR of 3 MSBs, 1: XOR of 4 MSBs
  int copies_low = 0;   // decompositions feeding planes b0..b3
  int copies_high = 0;  // decompositions feeding planes b4..b7
  int block_count = 0;  // blocks actually fed to aggregation

  /// How many redundant copies of plane `bit_index` the embedder writes.
  /// For r = 1 only three of the four outputs are embedded, which leaves
  /// b0..b5 with one copy and b6, b7 with three.
  int copies_of(int bit_index) const {
    require(bit_index >= 0 && bit_index < 8, ErrorKind::Structural, "bit index out of range");
    if (r == 1) return bit_index >= 6 ? 3 : 1;
    return bit_index < 4 ? copies_low : copies_high;
  }

  friend bool operator==(const ScalePlan&, const ScalePlan&) = default;
};

inline ScalePlan make_scale_plan(int r) {
  require(r >= 1, ErrorKind::UnsupportedScale,
          "scale factor must be at least 1 (watermark strictly smaller than carrier)");
  require(r <= kMaxScale, ErrorKind::UnsupportedScale,
          "scale factor " + std::to_string(r) + " exceeds supported maximum " +
              std::to_string(kMaxScale));
  ScalePlan p;
  p.r = r;
  p.beta = r == 1 ? 2 : r;
  p.alpha = (1 << (2 * p.beta - 3)) - 1;
  p.d = r == 1 ? 1 : r;
  p.q = r == 1 ? 4 : 1 << (2 * (r - p.d));
  p.eta = r == 1 ? 0 : r % 2;
  p.copies_low = p.alpha;
  p.copies_high = p.alpha + 2;
  p.block_count = r == 1 ? 12 : 4 * (2 * p.alpha + 2);
  return p;
}

struct BlockProvenance {
  int bit_index = 0;
  int copy = 0;  // 1-based

  friend bool operator==(const BlockProvenance&, const BlockProvenance&) = default;
};

struct BlockSequence {
  std::vector<BinaryImage> blocks;
  std::vector<BlockProvenance> provenance;
};

/// Provenance of the canonical r > 1 sequence, independent of block data.
inline std::vector<BlockProvenance> canonical_provenance(const ScalePlan& plan) {
  require(plan.r > 1, ErrorKind::Structural, "canonical sequence is defined for r > 1");
  std::vector<BlockProvenance> out;
  out.reserve(static_cast<std::size_t>(plan.block_count));
  for (int c = 1; c <= plan.copies_low; ++c)
    for (int b = 0; b < 4; ++b) out.push_back({b, c});
  for (int c = 1; c <= plan.copies_high; ++c)
    for (int b = 4; b < 8; ++b) out.push_back({b, c});
  return out;
}

/// The three embedded r = 1 images, each as four blocks in splice order.
inline std::array<std::vector<BlockProvenance>, 3> r1_provenance() {
  return {{
      {{0, 1}, {1, 1}, {2, 1}, {3, 1}},
      {{4, 1}, {6, 1}, {6, 2}, {6, 3}},
      {{5, 1}, {7, 1}, {7, 2}, {7, 3}},
  }};
}

namespace detail {

inline const BinaryImage& plane_bits(std::span<const BitPlane> planes, int bit_index) {
  for (const auto& p : planes)
    if (p.bit_index == bit_index) return p.bits;
  fail(ErrorKind::Structural, "bit plane " + std::to_string(bit_index) + " missing");
}

inline void check_plane_set(std::span<const BitPlane> planes) {
  require(planes.size() == 8, ErrorKind::Structural, "expected 8 bit planes");
  std::array<bool, 8> seen{};
  for (const auto& p : planes) {
    require(p.bit_index >= 0 && p.bit_index < 8 && !seen[p.bit_index], ErrorKind::Structural,
            "bit planes must cover indices 0..7 exactly once");
    require(p.bits.side_exp() == planes[0].bits.side_exp(), ErrorKind::Structural,
            "bit planes differ in size");
    seen[p.bit_index] = true;
  }
}

inline BlockSequence materialize(std::span<const BitPlane> planes,
                                 std::vector<BlockProvenance> provenance) {
  BlockSequence seq;
  seq.blocks.reserve(provenance.size());
  for (const auto& p : provenance) seq.blocks.push_back(plane_bits(planes, p.bit_index));
  seq.provenance = std::move(provenance);
  return seq;
}

}  // namespace detail

inline BlockSequence build_block_sequence(std::span<const BitPlane> planes, const ScalePlan& plan) {
  detail::check_plane_set(planes);
  return detail::materialize(planes, canonical_provenance(plan));
}

inline std::array<BlockSequence, 3> build_r1_images(std::span<const BitPlane> planes) {
  detail::check_plane_set(planes);
  auto layout = r1_provenance();
  return {detail::materialize(planes, layout[0]), detail::materialize(planes, layout[1]),
          detail::materialize(planes, layout[2])};
}

/// (row, column) of the cell that sequence position `t` occupies in a
/// 2^level x 2^level grid of blocks.
struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;
};

inline Cell zorder_cell(std::size_t t, int level) {
  Cell c;
  for (int k = level - 1; k >= 0; --k) {
    const std::size_t digit = (t >> (2 * k)) & 3u;
    c.row = (c.row << 1) | (digit >> 1);
    c.col = (c.col << 1) | (digit & 1u);
  }
  return c;
}

inline BinaryImage qbs_splice(std::span<const BinaryImage> blocks) {
  require(blocks.size() == 4, ErrorKind::Structural, "splicing needs exactly 4 blocks");
  const int exp = blocks[0].side_exp();
  for (const auto& b : blocks)
    require(b.side_exp() == exp, ErrorKind::Structural, "spliced blocks differ in size");
  BinaryImage out(exp + 1);
  const std::size_t s = blocks[0].side();
  auto dst = out.mutable_pixels();
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t oy = (k >> 1) * s, ox = (k & 1u) * s;
    const auto src = blocks[k].pixels();
    for (std::size_t y = 0; y < s; ++y)
      for (std::size_t x = 0; x < s; ++x) dst[(oy + y) * 2 * s + ox + x] = src[y * s + x];
  }
  return out;
}

inline std::array<BinaryImage, 4> qbs_split(const BinaryImage& img) {
  require(img.side_exp() >= 1, ErrorKind::Structural, "cannot split a 1x1 image");
  const std::size_t s = img.side() / 2;
  std::array<BinaryImage, 4> out;
  const auto src = img.pixels();
  for (std::size_t k = 0; k < 4; ++k) {
    BinaryImage blk(img.side_exp() - 1);
    auto dst = blk.mutable_pixels();
    const std::size_t oy = (k >> 1) * s, ox = (k & 1u) * s;
    for (std::size_t y = 0; y < s; ++y)
      for (std::size_t x = 0; x < s; ++x) dst[y * s + x] = src[(oy + y) * 2 * s + ox + x];
    out[k] = std::move(blk);
  }
  return out;
}

/// Aggregates consecutive runs of 4^d blocks into images of side 2^(m+d).
inline std::vector<BinaryImage> qba_aggregate(std::span<const BinaryImage> blocks, int d) {
  require(d >= 1, ErrorKind::Structural, "aggregation level must be at least 1");
  require(d <= kMaxScale, ErrorKind::Structural, "aggregation level too large");
  const std::size_t group = std::size_t{1} << (2 * d);
  require(!blocks.empty() && blocks.size() % group == 0, ErrorKind::Structural,
          "block count " + std::to_string(blocks.size()) + " is not a multiple of 4^" +
              std::to_string(d));
  const int exp = blocks[0].side_exp();
  for (const auto& b : blocks)
    require(b.side_exp() == exp, ErrorKind::Structural, "aggregated blocks differ in size");
  const std::size_t s = blocks[0].side();
  std::vector<BinaryImage> out;
  for (std::size_t base = 0; base < blocks.size(); base += group) {
    BinaryImage img(exp + d);
    const std::size_t side = img.side();
    auto dst = img.mutable_pixels();
    for (std::size_t t = 0; t < group; ++t) {
      const Cell cell = zorder_cell(t, d);
      const auto src = blocks[base + t].pixels();
      for (std::size_t y = 0; y < s; ++y)
        for (std::size_t x = 0; x < s; ++x)
          dst[(cell.row * s + y) * side + cell.col * s + x] = src[y * s + x];
    }
    out.push_back(std::move(img));
  }
  return out;
}

inline std::vector<BinaryImage> qba_aggregate(const BlockSequence& seq, int d) {
  return qba_aggregate(std::span<const BinaryImage>(seq.blocks), d);
}

/// Inverse of qba_aggregate for a single output image: 4^d blocks in sequence order.
inline std::vector<BinaryImage> qba_disaggregate(const BinaryImage& img, int d) {
  require(d >= 1, ErrorKind::Structural, "aggregation level must be at least 1");
  require(img.side_exp() >= d, ErrorKind::Structural,
          "image side not divisible by 2^" + std::to_string(d));
  const std::size_t group = std::size_t{1} << (2 * d);
  const int exp = img.side_exp() - d;
  const std::size_t s = std::size_t{1} << exp;
  const std::size_t side = img.side();
  const auto src = img.pixels();
  std::vector<BinaryImage> out;
  out.reserve(group);
  for (std::size_t t = 0; t < group; ++t) {
    const Cell cell = zorder_cell(t, d);
    BinaryImage blk(exp);
    auto dst = blk.mutable_pixels();
    for (std::size_t y = 0; y < s; ++y)
      for (std::size_t x = 0; x < s; ++x)
        dst[y * s + x] = src[(cell.row * s + y) * side + cell.col * s + x];
    out.push_back(std::move(blk));
  }
  return out;
}

inline std::vector<BinaryImage> qba_disaggregate(std::span<const BinaryImage> images, int d) {
  std::vector<BinaryImage> out;
  for (const auto& img : images) {
    auto part = qba_disaggregate(img, d);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

}  // namespace qwm
