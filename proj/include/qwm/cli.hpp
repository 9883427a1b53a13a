#pragma once

// Command implementations behind the `qwm` executable. Each command returns
// a process exit code; failures surface as qwm::Error and are rendered by
// run_guarded as a single line "error: <category>: <message>".

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "qwm/attacks.hpp"
#include "qwm/error.hpp"
#include "qwm/experiment.hpp"
#include "qwm/metrics.hpp"
#include "qwm/pgm.hpp"
#include "qwm/pipeline.hpp"
#include "qwm/qsim.hpp"
#include "qwm/verify.hpp"

namespace qwm::cli {

inline int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << category(e.kind()) << ": " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << category(ErrorKind::Io) << ": " << e.what() << "\n";
  }
  return 1;
}

struct EmbedOptions {
  std::filesystem::path carrier, watermark, out, key;
  double lambda = 0.5;
  bool plain = false;  // force the tau1 = 0 rule (plain LSB substitution)
};

inline int cmd_embed(const EmbedOptions& o, std::ostream& out) {
  const GrayImage carrier = load_pgm(o.carrier);
  const GrayImage mark = load_pgm(o.watermark);
  const StegoImage stego = embed_in_mode(carrier, mark, o.lambda, o.plain ? EmbeddingMode::Plain : EmbeddingMode::Hdwm);
  save_pgm(o.out, stego.image);
  save_key(o.key, stego.key);
  out << "r=" << stego.key.r << " tau1=" << int{stego.key.tau1} << " tau2=" << int{stego.key.tau2}
      << " eta=" << stego.key.eta << "\n";
  return 0;
}

struct ExtractOptions {
  std::filesystem::path stego, key, out;
};

inline int cmd_extract(const ExtractOptions& o, std::ostream&) {
  const GrayImage stego = load_pgm(o.stego);
  const WatermarkKey key = load_key(o.key);
  save_pgm(o.out, extract(stego, key));
  return 0;
}

struct AttackOptions {
  std::filesystem::path in, out;
  std::string kind = "salt_pepper";
  double amount = 0.0;
  std::uint64_t seed = 0;
  double crop_exponent = 0.5;
};

inline int cmd_attack(const AttackOptions& o, std::ostream& out) {
  AttackSpec spec{parse_attack_kind(o.kind), o.amount, o.seed, o.crop_exponent};
  spec.validate();
  save_pgm(o.out, apply_attack(load_pgm(o.in), spec));
  out << "attack=" << to_string(spec.kind) << " amount=" << format_ratio(spec.amount);
  if (spec.kind == AttackKind::SaltPepper)
    out << " seed=" << spec.seed << " prng=" << kNoisePrng;
  else
    out << " crop_exponent=" << spec.crop_exponent;
  out << "\n";
  return 0;
}

struct MetricsOptions {
  std::filesystem::path a, b;
  std::optional<std::filesystem::path> csv;  // append a row here as well
};

inline constexpr const char* kMetricsHeader = "a,b,mse,psnr_db,ssim,ncc";

inline int cmd_metrics(const MetricsOptions& o, std::ostream& out) {
  const MetricsReport m = compare(load_pgm(o.a), load_pgm(o.b));
  const std::string row = o.a.filename().string() + "," + o.b.filename().string() + "," +
                          format_ratio(m.mse) + "," + format_db(m.psnr) + "," + format_ratio(m.ssim) + "," +
                          format_ratio(m.ncc);
  out << kMetricsHeader << "\n" << row << "\n";
  if (o.csv) {
    const bool fresh = !std::filesystem::exists(*o.csv) || std::filesystem::file_size(*o.csv) == 0;
    std::ofstream f(*o.csv, std::ios::app);
    if (!f) fail(ErrorKind::Io, "cannot append to " + o.csv->string());
    if (fresh) f << kMetricsHeader << "\n";
    f << row << "\n";
  }
  return 0;
}

inline int cmd_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const ExperimentResult res = run_experiment(cfg, &err);
  write_reports(cfg, res);
  out << "visual rows: " << res.visual.size() << ", robustness rows: " << res.robustness.size()
      << ", failures: " << res.failures.size() << " -> " << cfg.output_dir.string() << "\n";
  return res.ok() ? 0 : 1;
}

struct LogoOptions {
  std::filesystem::path out;
  int side_exp = 7;
  double bright_fraction = 0.85;
};

inline int cmd_logo(const LogoOptions& o, std::ostream& out) {
  require(o.side_exp >= 1 && o.side_exp <= kMaxSideExp, ErrorKind::InvalidArgument, "logo side exponent out of range");
  const GrayImage logo = make_logo(o.side_exp, o.bright_fraction);
  save_pgm(o.out, logo);
  out << "side=" << logo.side() << " t_bright=" << format_ratio(histogram_stats(logo).t_bright) << "\n";
  return 0;
}

struct VerifyOptions {
  std::optional<std::filesystem::path> dump_dir;  // write circuit netlists here
};

inline void dump_netlists(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& name, const qsim::Circuit& c) {
    const std::string text = qsim::to_netlist(c);
    write_file_bytes(dir / (name + ".net"),
                     std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  };
  put("qib8", qsim::build_qib(8));
  put("qe3", qsim::build_qe(3));
  for (int m = 0; m <= 2; ++m) put("qbs_m" + std::to_string(m), qsim::build_qbs(m));
  put("majority3", qsim::build_majority3());
  for (const auto& p : qsim::slice_configs()) {
    const std::string tag = "t" + std::to_string(int{p.tau1}) + std::to_string(int{p.tau2}) + "_eta" +
                            std::to_string(p.eta);
    put("hdwm_embed_" + tag, qsim::build_hdwm_pixel(p));
    put("hdwm_extract_" + tag, qsim::build_hdwm_extract_pixel(p));
  }
}

inline int print_reports(const std::vector<qsim::VerifyReport>& reports, std::ostream& out) {
  bool all = true;
  for (const auto& r : reports) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases)";
    if (!r.passed) out << " counterexample: " << r.counterexample;
    out << "\n";
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

inline int cmd_verify_circuits(const VerifyOptions& o, std::ostream& out) {
  if (o.dump_dir) dump_netlists(*o.dump_dir);
  return print_reports(qsim::run_all_verifications(), out);
}

}  // namespace qwm::cli
