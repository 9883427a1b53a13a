// qwm: embed/extract/attack/measure watermarks and run batch experiments.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwm/cli.hpp"

int main(int argc, char** argv) {
  using namespace qwm;
  CLI::App app{"Adaptive-scaling, histogram-driven LSB watermarking toolkit"};
  app.require_subcommand(1);

  cli::EmbedOptions embed_opt;
  auto* embed = app.add_subcommand("embed", "Embed a watermark; writes stego PGM and key JSON");
  embed->add_option("--carrier", embed_opt.carrier, "Carrier PGM (side 2^n)")->required();
  embed->add_option("--watermark", embed_opt.watermark, "Watermark PGM (side 2^m, m < n)")->required();
  embed->add_option("-o,--out", embed_opt.out, "Stego PGM output")->required();
  embed->add_option("--key", embed_opt.key, "Key JSON output")->required();
  embed->add_option("--lambda", embed_opt.lambda, "Division threshold")->capture_default_str();
  embed->add_flag("--plain", embed_opt.plain, "Plain LSB substitution (tau1 = 0)");

  cli::ExtractOptions extract_opt;
  auto* extract = app.add_subcommand("extract", "Extract a watermark from a stego PGM");
  extract->add_option("--stego", extract_opt.stego, "Stego PGM")->required();
  extract->add_option("--key", extract_opt.key, "Key JSON written by embed")->required();
  extract->add_option("-o,--out", extract_opt.out, "Watermark PGM output")->required();

  cli::AttackOptions attack_opt;
  auto* attack = app.add_subcommand("attack", "Apply salt-and-pepper noise or top-left cropping");
  attack->add_option("--in", attack_opt.in, "Input PGM")->required();
  attack->add_option("-o,--out", attack_opt.out, "Attacked PGM output")->required();
  attack->add_option("--kind", attack_opt.kind, "salt_pepper | crop")->capture_default_str();
  attack->add_option("--amount", attack_opt.amount, "Noise density or cropped area fraction")->required();
  attack->add_option("--seed", attack_opt.seed, "Noise seed")->capture_default_str();
  attack->add_option("--crop-exponent", attack_opt.crop_exponent,
                     "Crop side = N * amount^exponent (0.5: area, 1: side length)")
      ->capture_default_str();

  cli::MetricsOptions metrics_opt;
  std::string metrics_csv;
  auto* metrics = app.add_subcommand("metrics", "Print MSE, PSNR, SSIM, NCC between two PGMs");
  metrics->add_option("a", metrics_opt.a, "Reference PGM")->required();
  metrics->add_option("b", metrics_opt.b, "Test PGM")->required();
  metrics->add_option("--csv", metrics_csv, "Also append the row to this CSV");

  std::string config_path, corpus, watermark, out_dir;
  std::vector<int> scales;
  std::vector<double> noise, crop;
  double logo_bright = 0.85, crop_exponent = 0.5, lambda = 0.5;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool plain = false;
  auto* experiment = app.add_subcommand("experiment", "Run the batch quality/robustness protocol");
  experiment->add_option("--config", config_path, "JSON config (flags below override it)");
  auto* o_corpus = experiment->add_option("--corpus", corpus, "Directory of carrier PGMs");
  auto* o_mark = experiment->add_option("--watermark", watermark, "Watermark PGM (downsampled per r)");
  auto* o_bright = experiment->add_option("--logo-bright", logo_bright, "Synthetic logo bright fraction");
  auto* o_scales = experiment->add_option("--scales", scales, "Scale factors")->delimiter(',');
  auto* o_noise = experiment->add_option("--noise", noise, "Noise densities")->delimiter(',');
  auto* o_crop = experiment->add_option("--crop", crop, "Crop area fractions")->delimiter(',');
  auto* o_cexp = experiment->add_option("--crop-exponent", crop_exponent, "Crop exponent");
  auto* o_lambda = experiment->add_option("--lambda", lambda, "Division threshold");
  auto* o_seed = experiment->add_option("--seed", seed, "Master seed");
  auto* o_out = experiment->add_option("-o,--out", out_dir, "Output directory");
  auto* o_threads = experiment->add_option("--threads", threads, "Worker threads (0: all cores)");
  auto* o_plain = experiment->add_flag("--plain", plain, "Plain LSB substitution (tau1 = 0)");

  cli::LogoOptions logo_opt;
  auto* logo = app.add_subcommand("logo", "Write the synthetic logo watermark");
  logo->add_option("-o,--out", logo_opt.out, "Output PGM")->required();
  logo->add_option("--side-exp", logo_opt.side_exp, "Side = 2^side_exp")->capture_default_str();
  logo->add_option("--bright", logo_opt.bright_fraction, "Fraction of bright pixels")->capture_default_str();

  cli::VerifyOptions verify_opt;
  std::string dump_dir;
  auto* verify = app.add_subcommand("verify-circuits", "Check reversible circuits against matrix operations");
  verify->add_option("--dump", dump_dir, "Write circuit netlists to this directory");

  CLI11_PARSE(app, argc, argv);

  return cli::run_guarded(std::cerr, [&]() -> int {
    if (*embed) return cli::cmd_embed(embed_opt, std::cout);
    if (*extract) return cli::cmd_extract(extract_opt, std::cout);
    if (*attack) return cli::cmd_attack(attack_opt, std::cout);
    if (*metrics) {
      if (!metrics_csv.empty()) metrics_opt.csv = metrics_csv;
      return cli::cmd_metrics(metrics_opt, std::cout);
    }
    if (*experiment) {
      ExperimentConfig cfg;
      if (!config_path.empty()) {
        cfg = load_config(config_path);
      } else if (!*o_corpus) {
        fail(ErrorKind::ConfigInvalid, "experiment needs --config or --corpus");
      }
      if (*o_corpus) cfg.corpus_dir = corpus;
      if (*o_mark) cfg.watermark_path = watermark;
      if (*o_bright) cfg.logo_bright_fraction = logo_bright;
      if (*o_scales) cfg.scales = scales;
      if (*o_noise) cfg.noise_densities = noise;
      if (*o_crop) cfg.crop_fractions = crop;
      if (*o_cexp) cfg.crop_exponent = crop_exponent;
      if (*o_lambda) cfg.lambda = lambda;
      if (*o_seed) cfg.master_seed = seed;
      if (*o_out) cfg.output_dir = out_dir;
      if (*o_threads) cfg.threads = threads;
      if (*o_plain) cfg.mode = plain ? EmbeddingMode::Plain : EmbeddingMode::Hdwm;
      return cli::cmd_experiment(cfg, std::cout, std::cerr);
    }
    if (*logo) return cli::cmd_logo(logo_opt, std::cout);
    if (!dump_dir.empty()) verify_opt.dump_dir = dump_dir;
    return cli::cmd_verify_circuits(verify_opt, std::cout);
  });
}
