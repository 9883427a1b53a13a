#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "qwm/experiment.hpp"
#include "test_util.hpp"

using namespace qwm;
namespace fs = std::filesystem;

namespace {

fs::path make_corpus(const std::string& tag, int count, int exp) {
  const fs::path dir = fs::temp_directory_path() / ("qwm_corpus_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::mt19937_64 rng(count * 31 + exp);
  for (int i = 0; i < count; ++i) save_pgm(dir / ("c" + std::to_string(i) + ".pgm"), fx::random_gray(exp, rng));
  return dir;
}

ExperimentConfig small_config(const fs::path& corpus) {
  ExperimentConfig c;
  c.corpus_dir = corpus;
  c.scales = {1, 2};
  c.noise_densities = {0.05, 0.2};
  c.crop_fractions = {0.25};
  c.threads = 1;
  return c;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Logo, BrightFractionIsExact) {
  for (double f : {0.85, 0.5, 0.95}) {
    const auto logo = make_logo(6, f);
    const auto s = histogram_stats(logo);
    EXPECT_NEAR(s.t_bright, f, 0.5 / 4096 + 1e-12);
    for (auto v : logo.pixels()) EXPECT_TRUE(v >= 215 || v <= 50);
  }
  EXPECT_EQ(make_logo(5), make_logo(5));
  EXPECT_THROW(make_logo(4, 1.5), Error);
}

TEST(Logo, SelectsBrightRule) {
  const auto p = derive_params(histogram_stats(make_logo(7)), 0.5, 2);
  EXPECT_TRUE(p.tau1);
  EXPECT_TRUE(p.tau2);
}

TEST(Downsample, BoxAverage) {
  const GrayImage img(1, std::vector<std::uint8_t>{10, 20, 30, 41});
  EXPECT_EQ(downsample(img, 0)(0, 0), 25);
  EXPECT_EQ(downsample(img, 1), img);
  EXPECT_THROW(downsample(img, 2), Error);
}

TEST(Seeds, DependOnPointNotOrder) {
  const auto a = derive_seed(1, "x.pgm", AttackKind::SaltPepper, 0.1);
  EXPECT_EQ(a, derive_seed(1, "x.pgm", AttackKind::SaltPepper, 0.1));
  EXPECT_NE(a, derive_seed(2, "x.pgm", AttackKind::SaltPepper, 0.1));
  EXPECT_NE(a, derive_seed(1, "y.pgm", AttackKind::SaltPepper, 0.1));
  EXPECT_NE(a, derive_seed(1, "x.pgm", AttackKind::SaltPepper, 0.2));
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafull);
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c;
  c.corpus_dir = "/data/carriers";
  c.scales = {2, 3};
  c.noise_densities = {0.1};
  c.crop_fractions = {};
  c.mode = EmbeddingMode::Plain;
  c.master_seed = 99;
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(back.corpus_dir, c.corpus_dir);
  EXPECT_EQ(back.scales, c.scales);
  EXPECT_EQ(back.noise_densities, c.noise_densities);
  EXPECT_TRUE(back.crop_fractions.empty());
  EXPECT_EQ(back.mode, EmbeddingMode::Plain);
  EXPECT_EQ(back.master_seed, 99u);
}

TEST(Config, RelativePathsAndErrors) {
  const auto c = config_from_json(nlohmann::json{{"corpus", "carriers"}, {"watermark", {{"file", "w.pgm"}}}}, "/base");
  EXPECT_EQ(c.corpus_dir, fs::path("/base/carriers"));
  ASSERT_TRUE(c.watermark_path);
  EXPECT_EQ(*c.watermark_path, fs::path("/base/w.pgm"));
  auto expect_invalid = [](const nlohmann::json& j) {
    try {
      config_from_json(j);
      ADD_FAILURE() << j.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ConfigInvalid);
    }
  };
  expect_invalid(nlohmann::json::object());
  expect_invalid({{"corpus", "x"}, {"scales", {0}}});
  expect_invalid({{"corpus", "x"}, {"attacks", {{"salt_pepper", {1.5}}}}});
  expect_invalid({{"corpus", "x"}, {"embedding", "fancy"}});
  expect_invalid({{"corpus", 3}});
}

TEST(Experiment, RowCountsAndSchema) {
  const auto dir = make_corpus("rows", 3, 5);
  const auto res = run_experiment(small_config(dir), nullptr);
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(res.visual.size(), 3u * 2u);
  EXPECT_EQ(res.robustness.size(), 3u * 2u * 3u);
  const auto v = visual_csv(res), r = robustness_csv(res);
  EXPECT_EQ(v.substr(0, v.find('\n')), "carrier,r,watermark_side,tau1,tau2,eta,mse,psnr_db,ssim");
  EXPECT_EQ(r.substr(0, r.find('\n')), "carrier,r,attack,amount,seed,mse,psnr_db,ncc");
  EXPECT_EQ(lines(v), 7u);
  EXPECT_EQ(lines(r), 19u);
  EXPECT_NE(r.find("c0.pgm,1,crop,0.2500,0,"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Experiment, EmptyAttackGridGivesHeaderOnly) {
  const auto dir = make_corpus("empty", 2, 4);
  auto cfg = small_config(dir);
  cfg.noise_densities.clear();
  cfg.crop_fractions.clear();
  const auto res = run_experiment(cfg, nullptr);
  EXPECT_EQ(robustness_csv(res), "carrier,r,attack,amount,seed,mse,psnr_db,ncc\n");
  EXPECT_EQ(res.visual.size(), 4u);
  fs::remove_all(dir);
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  const auto dir = make_corpus("det", 4, 5);
  auto cfg = small_config(dir);
  const auto a = run_experiment(cfg, nullptr);
  cfg.threads = 3;
  const auto b = run_experiment(cfg, nullptr);
  EXPECT_EQ(visual_csv(a), visual_csv(b));
  EXPECT_EQ(robustness_csv(a), robustness_csv(b));
  cfg.master_seed += 1;
  EXPECT_NE(robustness_csv(run_experiment(cfg, nullptr)), robustness_csv(a));
  fs::remove_all(dir);
}

TEST(Experiment, FailuresAreLoggedAndRunContinues) {
  const auto dir = make_corpus("fail", 2, 5);
  save_pgm(dir / "tiny.pgm", GrayImage(1, 9));
  std::ostringstream log;
  const auto res = run_experiment(small_config(dir), &log);
  EXPECT_FALSE(res.ok());
  ASSERT_EQ(res.failures.size(), 1u);
  EXPECT_NE(res.failures[0].find("tiny.pgm"), std::string::npos);
  EXPECT_NE(log.str().find("unsupported-scale"), std::string::npos);
  EXPECT_EQ(res.visual.size(), 4u);
  fs::remove_all(dir);
}

TEST(Experiment, WatermarkFileIsDownsampled) {
  const auto dir = make_corpus("wm", 1, 5);
  std::mt19937_64 rng(8);
  const auto wm_path = fs::temp_directory_path() / "qwm_wm.pgm";
  save_pgm(wm_path, fx::random_gray(6, rng));
  auto cfg = small_config(dir);
  cfg.watermark_path = wm_path;
  cfg.noise_densities.clear();
  cfg.crop_fractions = {0.0};
  const auto res = run_experiment(cfg, nullptr);
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(res.visual[0].watermark_side, 16u);
  for (const auto& row : res.robustness) EXPECT_TRUE(std::isinf(row.psnr));
  fs::remove_all(dir);
  fs::remove(wm_path);
}

TEST(Experiment, ReportsWritten) {
  const auto dir = make_corpus("rep", 1, 4);
  auto cfg = small_config(dir);
  cfg.output_dir = fs::temp_directory_path() / "qwm_reports";
  fs::remove_all(cfg.output_dir);
  const auto res = run_experiment(cfg, nullptr);
  write_reports(cfg, res);
  for (const char* f : {"visual.csv", "robustness.csv", "manifest.json"}) EXPECT_TRUE(fs::exists(cfg.output_dir / f));
  const auto bytes = read_file_bytes(cfg.output_dir / "manifest.json");
  const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
  EXPECT_EQ(j.at("noise_prng").get<std::string>(), kNoisePrng);
  EXPECT_EQ(j.at("robustness_rows").get<std::size_t>(), res.robustness.size());
  fs::remove_all(dir);
  fs::remove_all(cfg.output_dir);
}

TEST(Experiment, MissingCorpus) {
  auto cfg = small_config("/nonexistent/qwm");
  EXPECT_THROW(run_experiment(cfg, nullptr), Error);
}
