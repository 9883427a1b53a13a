#pragma once

// Batch robustness/quality harness.
//
// For every (carrier, r): embed, record stego quality against the carrier;
// then for every attack point: attack the stego image, extract, and record
// the extracted watermark's quality against the embedded one.
//
// Outputs (column order is stable):
//   visual.csv      carrier,r,watermark_side,tau1,tau2,eta,mse,psnr_db,ssim
//   robustness.csv  carrier,r,attack,amount,seed,mse,psnr_db,ncc
//   manifest.json   resolved configuration, PRNG identifier, row counts
// Ratios carry 4 decimals, dB values 2, infinite PSNR is written "Inf".
//
// Noise seeds are derived from (master seed, carrier file name, attack kind,
// amount), never from run order, so carriers may be processed concurrently.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "qwm/attacks.hpp"
#include "qwm/error.hpp"
#include "qwm/hdwm.hpp"
#include "qwm/image.hpp"
#include "qwm/metrics.hpp"
#include "qwm/pgm.hpp"
#include "qwm/pipeline.hpp"

namespace qwm {

// ---------------------------------------------------------------------------
// Watermark sources

/// Deterministic logo-like watermark: dark emblem strokes (ring, stem and a
/// row of glyph bars) on a bright field. Exactly round(bright_fraction * N)
/// pixels are bright (>= 215), the rest dark (<= 50), so the bright
/// cumulative fraction equals the requested one up to rounding.
inline GrayImage make_logo(int side_exp, double bright_fraction = 0.85) {
  require(bright_fraction >= 0.0 && bright_fraction <= 1.0, ErrorKind::InvalidArgument,
          "bright fraction must lie in [0,1]");
  GrayImage img(side_exp);
  const std::size_t side = img.side(), n = img.size();
  std::vector<double> score(n), dist(n);
  for (std::size_t y = 0; y < side; ++y)
    for (std::size_t x = 0; x < side; ++x) {
      const double u = (x + 0.5) / side, v = (y + 0.5) / side;
      const double d = std::hypot(u - 0.5, v - 0.42);
      const double ring = std::exp(-std::pow((d - 0.26) / 0.055, 2.0));
      const double stem = (std::abs(u - 0.5) < 0.045 && v > 0.42 && v < 0.74) ? 1.0 : 0.0;
      const double glyphs =
          (v > 0.80 && v < 0.92 && u > 0.12 && u < 0.88 && std::sin(u * 18.0 * std::numbers::pi) > 0.0) ? 0.95 : 0.0;
      score[y * side + x] = std::max({ring, stem, glyphs}) + 0.08 * (1.0 - d);
      dist[y * side + x] = d;
    }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  const auto dark = static_cast<std::size_t>(std::llround((1.0 - bright_fraction) * static_cast<double>(n)));
  auto px = img.mutable_pixels();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::min(dist[i], 1.0);
    px[i] = static_cast<std::uint8_t>(std::lround(255.0 - 40.0 * d));
  }
  for (std::size_t i = 0; i < dark; ++i) {
    const double d = std::min(dist[order[i]], 1.0);
    px[order[i]] = static_cast<std::uint8_t>(std::lround(20.0 + 30.0 * d));
  }
  return img;
}

/// Box-filter downsampling to side 2^target_exp.
inline GrayImage downsample(const GrayImage& img, int target_exp) {
  require(target_exp <= img.side_exp(), ErrorKind::UnsupportedScale,
          "watermark file is smaller than the requested watermark size");
  if (target_exp == img.side_exp()) return img;
  const std::size_t f = std::size_t{1} << (img.side_exp() - target_exp);
  GrayImage out(target_exp);
  const std::size_t side = out.side();
  auto dst = out.mutable_pixels();
  for (std::size_t y = 0; y < side; ++y)
    for (std::size_t x = 0; x < side; ++x) {
      std::uint64_t acc = 0;
      for (std::size_t dy = 0; dy < f; ++dy)
        for (std::size_t dx = 0; dx < f; ++dx) acc += img(y * f + dy, x * f + dx);
      dst[y * side + x] = static_cast<std::uint8_t>((acc + f * f / 2) / (f * f));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

enum class EmbeddingMode { Hdwm, Plain };

struct ExperimentConfig {
  std::filesystem::path corpus_dir;
  std::optional<std::filesystem::path> watermark_path;  // synthetic logo when empty
  double logo_bright_fraction = 0.85;
  std::vector<int> scales{1, 2, 3};
  std::vector<double> noise_densities{0.05, 0.1, 0.15, 0.2};
  std::vector<double> crop_fractions{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6};
  double crop_exponent = 0.5;
  double lambda = 0.5;
  std::uint64_t master_seed = 20240601;
  std::filesystem::path output_dir = "results";
  EmbeddingMode mode = EmbeddingMode::Hdwm;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const {
    require(!corpus_dir.empty(), ErrorKind::ConfigInvalid, "config: corpus directory is required");
    require(!scales.empty(), ErrorKind::ConfigInvalid, "config: scale list is empty");
    for (int r : scales)
      require(r >= 1 && r <= kMaxScale, ErrorKind::ConfigInvalid, "config: scale factor out of range");
    for (double p : noise_densities)
      require(p >= 0.0 && p <= 1.0, ErrorKind::ConfigInvalid, "config: noise density outside [0,1]");
    for (double p : crop_fractions)
      require(p >= 0.0 && p <= 1.0, ErrorKind::ConfigInvalid, "config: crop fraction outside [0,1]");
    require(crop_exponent > 0.0, ErrorKind::ConfigInvalid, "config: crop exponent must be positive");
    require(lambda >= 0.0 && lambda <= 1.0, ErrorKind::ConfigInvalid, "config: lambda outside [0,1]");
    require(logo_bright_fraction >= 0.0 && logo_bright_fraction <= 1.0, ErrorKind::ConfigInvalid,
            "config: logo bright fraction outside [0,1]");
  }
};

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["corpus"] = c.corpus_dir.generic_string();
  if (c.watermark_path)
    j["watermark"] = {{"file", c.watermark_path->generic_string()}};
  else
    j["watermark"] = {{"logo_bright_fraction", c.logo_bright_fraction}};
  j["scales"] = c.scales;
  j["attacks"] = {{"salt_pepper", c.noise_densities},
                  {"crop", c.crop_fractions},
                  {"crop_exponent", c.crop_exponent}};
  j["lambda"] = c.lambda;
  j["seed"] = c.master_seed;
  j["output"] = c.output_dir.generic_string();
  j["embedding"] = c.mode == EmbeddingMode::Hdwm ? "hdwm" : "plain";
  return j;
}

/// Parses the JSON config. Relative paths resolve against `base_dir`.
inline ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) fail(ErrorKind::ConfigInvalid, "config: expected a JSON object");
  ExperimentConfig c;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  try {
    if (!j.contains("corpus")) fail(ErrorKind::ConfigInvalid, "config: 'corpus' is required");
    c.corpus_dir = resolve(j.at("corpus").get<std::string>());
    if (j.contains("watermark")) {
      const auto& w = j.at("watermark");
      if (w.contains("file")) c.watermark_path = resolve(w.at("file").get<std::string>());
      if (w.contains("logo_bright_fraction")) c.logo_bright_fraction = w.at("logo_bright_fraction").get<double>();
    }
    if (j.contains("scales")) c.scales = j.at("scales").get<std::vector<int>>();
    if (j.contains("attacks")) {
      const auto& a = j.at("attacks");
      if (a.contains("salt_pepper")) c.noise_densities = a.at("salt_pepper").get<std::vector<double>>();
      if (a.contains("crop")) c.crop_fractions = a.at("crop").get<std::vector<double>>();
      if (a.contains("crop_exponent")) c.crop_exponent = a.at("crop_exponent").get<double>();
    }
    if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
    if (j.contains("seed")) c.master_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) c.output_dir = resolve(j.at("output").get<std::string>());
    if (j.contains("embedding")) {
      const auto m = j.at("embedding").get<std::string>();
      if (m == "hdwm")
        c.mode = EmbeddingMode::Hdwm;
      else if (m == "plain")
        c.mode = EmbeddingMode::Plain;
      else
        fail(ErrorKind::ConfigInvalid, "config: embedding must be 'hdwm' or 'plain'");
    }
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ConfigInvalid, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  auto j = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::ConfigInvalid, "config: not valid JSON: " + path.string());
  return config_from_json(j, path.parent_path());
}

// ---------------------------------------------------------------------------
// Seeds

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view carrier, AttackKind kind, double amount) {
  const std::string point = std::string(carrier) + "|" + to_string(kind) + "|" + format_ratio(amount);
  return splitmix64(master ^ fnv1a(point));
}

// ---------------------------------------------------------------------------
// Runs

struct VisualRow {
  std::string carrier;
  int r = 0;
  std::size_t watermark_side = 0;
  WatermarkKey key;
  double mse = 0, psnr = 0, ssim = 0;
};

struct RobustnessRow {
  std::string carrier;
  int r = 0;
  AttackKind kind = AttackKind::SaltPepper;
  double amount = 0;
  std::uint64_t seed = 0;
  double mse = 0, psnr = 0, ncc = 0;
};

struct ExperimentResult {
  std::vector<VisualRow> visual;
  std::vector<RobustnessRow> robustness;
  std::vector<std::string> failures;

  bool ok() const noexcept { return failures.empty(); }
};

inline std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir) {
  require(std::filesystem::is_directory(dir), ErrorKind::Io, "corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

inline GrayImage watermark_for(const ExperimentConfig& cfg, const std::optional<GrayImage>& file_mark, int exp) {
  return file_mark ? downsample(*file_mark, exp) : make_logo(exp, cfg.logo_bright_fraction);
}

inline StegoImage embed_in_mode(const GrayImage& carrier, const GrayImage& mark, double lambda, EmbeddingMode mode) {
  if (mode == EmbeddingMode::Hdwm) return embed(carrier, mark, lambda);
  return embed_with_params(carrier, mark, EmbedParams{lambda, false, false, 0});
}

/// One carrier, all scales and attack points. Appends rows; throws on failure.
inline void run_carrier(const ExperimentConfig& cfg, const std::string& name, const GrayImage& carrier,
                        const std::optional<GrayImage>& file_mark, std::vector<VisualRow>& visual,
                        std::vector<RobustnessRow>& robust) {
  for (int r : cfg.scales) {
    const int wexp = carrier.side_exp() - r;
    require(wexp >= 1, ErrorKind::UnsupportedScale,
            name + ": carrier too small for r=" + std::to_string(r));
    const GrayImage mark = watermark_for(cfg, file_mark, wexp);
    const StegoImage stego = embed_in_mode(carrier, mark, cfg.lambda, cfg.mode);

    VisualRow v{name, r, mark.side(), stego.key};
    v.mse = mse(carrier, stego.image);
    v.psnr = psnr(carrier, stego.image);
    v.ssim = ssim(carrier, stego.image);
    visual.push_back(v);

    auto attack_point = [&](AttackKind kind, double amount) {
      AttackSpec spec{kind, amount, 0, cfg.crop_exponent};
      if (kind == AttackKind::SaltPepper) spec.seed = derive_seed(cfg.master_seed, name, kind, amount);
      const GrayImage attacked = apply_attack(stego.image, spec);
      const GrayImage got = extract(attacked, stego.key);
      RobustnessRow row{name, r, kind, amount, spec.seed};
      row.mse = mse(mark, got);
      row.psnr = psnr(mark, got);
      row.ncc = ncc(mark, got);
      robust.push_back(row);
    };
    for (double p : cfg.noise_densities) attack_point(AttackKind::SaltPepper, p);
    for (double p : cfg.crop_fractions) attack_point(AttackKind::Crop, p);
  }
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log = &std::cerr) {
  cfg.validate();
  const auto files = list_corpus(cfg.corpus_dir);
  require(!files.empty(), ErrorKind::Io, "corpus directory has no .pgm files: " + cfg.corpus_dir.string());
  std::optional<GrayImage> file_mark;
  if (cfg.watermark_path) file_mark = load_pgm(*cfg.watermark_path);

  ExperimentResult result;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      const std::string name = files[i].filename().string();
      std::vector<VisualRow> visual;
      std::vector<RobustnessRow> robust;
      std::string error;
      try {
        run_carrier(cfg, name, load_pgm(files[i]), file_mark, visual, robust);
      } catch (const Error& e) {
        error = name + ": " + std::string(category(e.kind())) + ": " + e.what();
      }
      std::lock_guard lock(mu);
      if (!error.empty()) {
        result.failures.push_back(error);
        if (log) *log << "experiment: " << error << "\n";
        continue;
      }
      result.visual.insert(result.visual.end(), visual.begin(), visual.end());
      result.robustness.insert(result.robustness.end(), robust.begin(), robust.end());
    }
  };
  unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, files.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::sort(result.visual.begin(), result.visual.end(),
            [](const VisualRow& a, const VisualRow& b) { return std::tie(a.carrier, a.r) < std::tie(b.carrier, b.r); });
  std::sort(result.robustness.begin(), result.robustness.end(), [](const RobustnessRow& a, const RobustnessRow& b) {
    return std::tie(a.carrier, a.r, a.kind, a.amount) < std::tie(b.carrier, b.r, b.kind, b.amount);
  });
  std::sort(result.failures.begin(), result.failures.end());
  return result;
}

inline std::string visual_csv(const ExperimentResult& res) {
  std::ostringstream os;
  os << "carrier,r,watermark_side,tau1,tau2,eta,mse,psnr_db,ssim\n";
  for (const auto& v : res.visual)
    os << v.carrier << ',' << v.r << ',' << v.watermark_side << ',' << int{v.key.tau1} << ','
       << int{v.key.tau2} << ',' << v.key.eta << ',' << format_ratio(v.mse) << ',' << format_db(v.psnr) << ','
       << format_ratio(v.ssim) << '\n';
  return os.str();
}

inline std::string robustness_csv(const ExperimentResult& res) {
  std::ostringstream os;
  os << "carrier,r,attack,amount,seed,mse,psnr_db,ncc\n";
  for (const auto& v : res.robustness)
    os << v.carrier << ',' << v.r << ',' << to_string(v.kind) << ',' << format_ratio(v.amount) << ',' << v.seed
       << ',' << format_ratio(v.mse) << ',' << format_db(v.psnr) << ',' << format_ratio(v.ncc) << '\n';
  return os.str();
}

inline void write_reports(const ExperimentConfig& cfg, const ExperimentResult& res) {
  std::filesystem::create_directories(cfg.output_dir);
  auto put = [&](const char* file, const std::string& text) {
    write_file_bytes(cfg.output_dir / file,
                     std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  };
  put("visual.csv", visual_csv(res));
  put("robustness.csv", robustness_csv(res));
  nlohmann::json manifest;
  manifest["config"] = config_to_json(cfg);
  manifest["noise_prng"] = kNoisePrng;
  manifest["seed_derivation"] = "splitmix64(seed ^ fnv1a(carrier|attack|amount))";
  manifest["visual_rows"] = res.visual.size();
  manifest["robustness_rows"] = res.robustness.size();
  manifest["failures"] = res.failures;
  put("manifest.json", manifest.dump(2) + "\n");
}

}  // namespace qwm
