#pragma once

// End-to-end watermark embedding and blind extraction.
//
// Embedding writes the aggregated watermark bits into the carrier's low bits:
// r > 1 uses LSB 1 only; r = 1 writes its three images into LSBs 1, 2 and 3
// (image from {b0..b3} -> LSB 1, {b4,b6,b6,b6} -> LSB 2, {b5,b7,b7,b7} ->
// LSB 3). The XOR flag is read from bits >= 4, which embedding never touches,
// so the extractor recomputes it from the stego image alone.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qwm/aqsm.hpp"
#include "qwm/error.hpp"
#include "qwm/hdwm.hpp"
#include "qwm/image.hpp"
#include "qwm/pgm.hpp"

namespace qwm {

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Watermark-to-carrier payload ratio, 1/4^r.
inline Rational capacity(int r) {
  require(r >= 1 && r <= 31, ErrorKind::UnsupportedScale, "scale factor out of range");
  return {1, std::uint64_t{1} << (2 * r)};
}

struct WatermarkKey {
  int r = 0;
  double lambda = 0.5;
  bool tau1 = false;
  bool tau2 = false;
  int eta = 0;
  int carrier_exp = 0;
  int watermark_exp = 0;

  EmbedParams params() const { return {lambda, tau1, tau2, eta}; }

  void validate() const {
    require(r >= 1 && r <= kMaxScale, ErrorKind::KeyInvalid, "key: scale factor out of range");
    require(carrier_exp - watermark_exp == r, ErrorKind::KeyInvalid,
            "key: r must equal carrier_exp - watermark_exp");
    require(watermark_exp >= 1, ErrorKind::KeyInvalid, "key: watermark_exp must be at least 1");
    require(carrier_exp <= kMaxSideExp, ErrorKind::KeyInvalid, "key: carrier_exp too large");
    require(lambda >= 0.0 && lambda <= 1.0, ErrorKind::KeyInvalid, "key: lambda outside [0,1]");
    require(eta == xor_index_for_scale(r), ErrorKind::KeyInvalid,
            "key: eta inconsistent with scale factor");
  }

  friend bool operator==(const WatermarkKey&, const WatermarkKey&) = default;
};

inline nlohmann::json key_to_json(const WatermarkKey& k) {
  return nlohmann::json{{"r", k.r},
                        {"lambda", k.lambda},
                        {"tau1", k.tau1 ? 1 : 0},
                        {"tau2", k.tau2 ? 1 : 0},
                        {"eta", k.eta},
                        {"carrier_exp", k.carrier_exp},
                        {"watermark_exp", k.watermark_exp}};
}

inline WatermarkKey key_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::KeyInvalid, "key: expected a JSON object");
  auto int_field = [&](const char* name) {
    if (!j.contains(name) || !j.at(name).is_number_integer())
      fail(ErrorKind::KeyInvalid, std::string("key: missing integer field '") + name + "'");
    return j.at(name).get<int>();
  };
  auto bit_field = [&](const char* name) {
    const int v = int_field(name);
    require(v == 0 || v == 1, ErrorKind::KeyInvalid, std::string("key: '") + name + "' must be 0 or 1");
    return v == 1;
  };
  WatermarkKey k;
  k.r = int_field("r");
  if (!j.contains("lambda") || !j.at("lambda").is_number())
    fail(ErrorKind::KeyInvalid, "key: missing numeric field 'lambda'");
  k.lambda = j.at("lambda").get<double>();
  k.tau1 = bit_field("tau1");
  k.tau2 = bit_field("tau2");
  k.eta = int_field("eta");
  k.carrier_exp = int_field("carrier_exp");
  k.watermark_exp = int_field("watermark_exp");
  k.validate();
  return k;
}

inline void save_key(const std::filesystem::path& path, const WatermarkKey& k) {
  const std::string text = key_to_json(k).dump(2) + "\n";
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline WatermarkKey load_key(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  auto j = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::KeyInvalid, "key: not valid JSON: " + path.string());
  return key_from_json(j);
}

struct StegoImage {
  GrayImage image;
  WatermarkKey key;
};

/// Per-position majority over an odd number of equally sized binary blocks.
inline BinaryImage majority_vote(std::span<const BinaryImage> copies) {
  require(!copies.empty() && copies.size() % 2 == 1, ErrorKind::Structural,
          "majority vote needs an odd number of copies, got " + std::to_string(copies.size()));
  const int exp = copies[0].side_exp();
  for (const auto& c : copies)
    require(c.side_exp() == exp, ErrorKind::Structural, "voted copies differ in size");
  if (copies.size() == 1) return copies[0];
  BinaryImage out(exp);
  auto dst = out.mutable_pixels();
  std::vector<unsigned> ones(dst.size(), 0);
  for (const auto& c : copies) {
    const auto src = c.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) ones[i] += src[i];
  }
  const unsigned half = static_cast<unsigned>(copies.size() / 2);
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = ones[i] > half ? 1 : 0;
  return out;
}

/// Where one copy of a watermark bit lives in the stego image.
struct BitLocation {
  int lsb = 0;  // carrier bit index (0 = LSB 1)
  std::size_t y = 0;
  std::size_t x = 0;

  friend bool operator==(const BitLocation&, const BitLocation&) = default;
};

/// Every stego position carrying a copy of bit plane `bit_index` at watermark
/// coordinate (y, x), in copy order.
inline std::vector<BitLocation> locate_copies(const ScalePlan& plan, int watermark_exp,
                                              int bit_index, std::size_t y, std::size_t x) {
  const std::size_t s = std::size_t{1} << watermark_exp;
  require(y < s && x < s, ErrorKind::Structural, "watermark coordinate out of range");
  std::vector<BitLocation> out;
  if (plan.r == 1) {
    const auto layout = r1_provenance();
    for (int img = 0; img < 3; ++img)
      for (std::size_t k = 0; k < 4; ++k)
        if (layout[img][k].bit_index == bit_index)
          out.push_back({img, (k >> 1) * s + y, (k & 1u) * s + x});
    return out;
  }
  const auto prov = canonical_provenance(plan);
  for (std::size_t t = 0; t < prov.size(); ++t) {
    if (prov[t].bit_index != bit_index) continue;
    const Cell cell = zorder_cell(t, plan.d);
    out.push_back({0, cell.row * s + y, cell.col * s + x});
  }
  return out;
}

namespace detail {

inline void check_scale(int carrier_exp, int watermark_exp) {
  require(watermark_exp >= 1, ErrorKind::UnsupportedScale, "watermark must be at least 2x2");
  require(carrier_exp > watermark_exp, ErrorKind::UnsupportedScale,
          "watermark must be strictly smaller than the carrier (got sides " +
              std::to_string(std::size_t{1} << watermark_exp) + " and " +
              std::to_string(std::size_t{1} << carrier_exp) + ")");
}

/// Aggregated binary watermark images, one per carrier LSB written.
inline std::vector<BinaryImage> aqsm_images(const GrayImage& watermark, const ScalePlan& plan) {
  const auto planes = decompose_bitplanes(watermark);
  if (plan.r == 1) {
    std::vector<BinaryImage> out;
    for (const auto& seq : build_r1_images(planes)) out.push_back(qbs_splice(seq.blocks));
    return out;
  }
  return qba_aggregate(build_block_sequence(planes, plan), plan.d);
}

}  // namespace detail

/// Embeds with caller-chosen rule parameters. `params.eta` is overridden by
/// the scale factor's XOR index.
inline StegoImage embed_with_params(const GrayImage& carrier, const GrayImage& watermark,
                                    EmbedParams params) {
  detail::check_scale(carrier.side_exp(), watermark.side_exp());
  const ScalePlan plan = make_scale_plan(carrier.side_exp() - watermark.side_exp());
  params.eta = plan.eta;
  const auto marks = detail::aqsm_images(watermark, plan);

  GrayImage stego = carrier;
  auto px = stego.mutable_pixels();
  for (std::size_t j = 0; j < marks.size(); ++j) {
    const auto w = marks[j].pixels();
    const auto bit = static_cast<unsigned>(j);
    for (std::size_t i = 0; i < px.size(); ++i) {
      const bool v = msb_xor_flag(px[i], params.eta);
      const bool lsb = (px[i] >> bit) & 1u;
      const bool e = embed_bit(lsb, w[i] != 0, v, params);
      px[i] = static_cast<std::uint8_t>((px[i] & ~(1u << bit)) | (unsigned{e} << bit));
    }
  }

  WatermarkKey key{plan.r,   params.lambda,       params.tau1,          params.tau2,
                   plan.eta, carrier.side_exp(), watermark.side_exp()};
  return {std::move(stego), key};
}

inline StegoImage embed(const GrayImage& carrier, const GrayImage& watermark, double lambda = 0.5) {
  detail::check_scale(carrier.side_exp(), watermark.side_exp());
  const int r = carrier.side_exp() - watermark.side_exp();
  return embed_with_params(carrier, watermark, derive_params(histogram_stats(watermark), lambda, r));
}

/// Blind extraction from the stego image and key alone.
inline GrayImage extract(const GrayImage& stego, const WatermarkKey& key) {
  key.validate();
  require(stego.side_exp() == key.carrier_exp, ErrorKind::Structural,
          "stego side 2^" + std::to_string(stego.side_exp()) + " does not match key carrier_exp " +
              std::to_string(key.carrier_exp));
  const ScalePlan plan = make_scale_plan(key.r);
  const EmbedParams params = key.params();
  const std::size_t layers = plan.r == 1 ? 3 : 1;

  const auto px = stego.pixels();
  std::vector<BinaryImage> marks;
  for (std::size_t j = 0; j < layers; ++j) {
    BinaryImage mark(stego.side_exp());
    auto dst = mark.mutable_pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
      const bool v = msb_xor_flag(px[i], params.eta);
      dst[i] = extract_bit((px[i] >> j) & 1u, v, params) ? 1 : 0;
    }
    marks.push_back(std::move(mark));
  }

  std::vector<BinaryImage> blocks;
  std::vector<BlockProvenance> provenance;
  if (plan.r == 1) {
    const auto layout = r1_provenance();
    for (std::size_t j = 0; j < 3; ++j) {
      auto quads = qbs_split(marks[j]);
      for (std::size_t k = 0; k < 4; ++k) {
        blocks.push_back(std::move(quads[k]));
        provenance.push_back(layout[j][k]);
      }
    }
  } else {
    blocks = qba_disaggregate(std::span<const BinaryImage>(marks), plan.d);
    provenance = canonical_provenance(plan);
  }

  std::array<std::vector<BinaryImage>, 8> grouped;
  for (std::size_t t = 0; t < blocks.size(); ++t)
    grouped[provenance[t].bit_index].push_back(std::move(blocks[t]));

  std::array<BitPlane, 8> planes;
  for (int b = 0; b < 8; ++b) {
    require(static_cast<int>(grouped[b].size()) == plan.copies_of(b), ErrorKind::Structural,
            "unexpected copy count for plane " + std::to_string(b));
    planes[b] = BitPlane{majority_vote(grouped[b]), b};
  }
  return reconstruct_bitplanes(planes);
}

}  // namespace qwm
