#pragma once

// Gate-level vs matrix-level equivalence suites for the reversible circuits.
// Each suite compares simulated basis states against the classical
// operation it implements and reports the first counterexample it finds.

#include <array>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qwm/aqsm.hpp"
#include "qwm/hdwm.hpp"
#include "qwm/pipeline.hpp"
#include "qwm/qsim.hpp"

namespace qwm::qsim {

struct VerifyReport {
  std::string name;
  bool passed = true;
  std::uint64_t cases = 0;
  std::string counterexample;  // empty when passed

  void record_failure(const std::string& what) {
    if (passed) counterexample = what;
    passed = false;
  }
};

namespace detail {

inline std::string describe(const Circuit& c, const BasisState& s) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, wires] : c.groups()) {
    os << (first ? "" : " ") << name << "=";
    for (auto it = wires.rbegin(); it != wires.rend(); ++it) os << (s.get(*it) ? '1' : '0');
    first = false;
  }
  return os.str();
}

}  // namespace detail

/// Random 8-bit (by default) registers copied onto zeroed backups, plus the
/// documented contract for a non-zero backup: backup ends as v xor a.
inline VerifyReport verify_qib(int width = 8, int trials = 1000, std::uint64_t seed = 0x51B) {
  VerifyReport rep;
  rep.name = "qib";
  const Circuit c = build_qib(width);
  const auto& src = c.group("source");
  const auto& bak = c.group("backup");
  std::mt19937_64 rng(seed);
  const std::uint64_t mask = width >= 64 ? ~0ull : ((1ull << width) - 1);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t v = rng() & mask;
    const std::uint64_t a = (t % 2 == 0) ? 0 : (rng() & mask);
    BasisState in(c.wire_count());
    in.load(src, v);
    in.load(bak, a);
    const BasisState out = simulate(c, in);
    ++rep.cases;
    if (out.read(src) != v || out.read(bak) != (v ^ a))
      rep.record_failure("input " + detail::describe(c, in) + " -> " + detail::describe(c, out));
  }
  return rep;
}

/// Exhaustive over all register pairs of the given width.
inline VerifyReport verify_qe(int width = 3) {
  VerifyReport rep;
  rep.name = "qe";
  const Circuit c = build_qe(width);
  const auto& a = c.group("a");
  const auto& b = c.group("b");
  const auto& anc = c.group("ancilla");
  const auto& flag = c.group("flag");
  const std::uint64_t n = 1ull << width;
  for (std::uint64_t x = 0; x < n; ++x)
    for (std::uint64_t y = 0; y < n; ++y) {
      BasisState in(c.wire_count());
      in.load(a, x);
      in.load(b, y);
      const BasisState out = simulate(c, in);
      ++rep.cases;
      const bool ok = out.read(flag) == (x == y ? 1u : 0u) && out.read(a) == x && out.read(b) == y &&
                      out.read(anc) == 0;
      if (!ok) rep.record_failure("input " + detail::describe(c, in) + " -> " + detail::describe(c, out));
    }
  return rep;
}

/// Checks a block-splicing circuit for blocks of side 2^m against qbs_splice.
///
/// Part 1 sweeps every input basis state (extension bits, position, the four
/// color bits): the expected output is read from qbs_splice applied to four
/// blocks holding those colors at the swept position. Part 2 splices random
/// blocks and compares every coordinate of the assembled image.
inline VerifyReport verify_qbs(const Circuit& c, int m, std::uint64_t seed = 0x9B5) {
  VerifyReport rep;
  rep.name = "qbs m=" + std::to_string(m);
  const auto& ys = c.group("y");
  const auto& xs = c.group("x");
  const int y_ext = c.group("y_ext")[0], x_ext = c.group("x_ext")[0], out_w = c.group("out")[0];
  const std::size_t s = std::size_t{1} << m;

  auto run = [&](const std::array<BinaryImage, 4>& blocks, std::size_t Y, std::size_t X, int ey, int ex) {
    BasisState in(c.wire_count());
    for (int k = 0; k < 4; ++k) in.set(c.group("color" + std::to_string(k))[0], blocks[k](Y, X) != 0);
    in.load(ys, Y);
    in.load(xs, X);
    in.set(y_ext, ey != 0);
    in.set(x_ext, ex != 0);
    return std::pair{in, simulate(c, in)};
  };

  auto check = [&](const std::array<BinaryImage, 4>& blocks, const BinaryImage& spliced, std::size_t Y,
                   std::size_t X, int ey, int ex) {
    auto [in, out] = run(blocks, Y, X, ey, ex);
    const std::size_t gy = ey * s + Y, gx = ex * s + X;
    ++rep.cases;
    BasisState expect = in;
    expect.set(out_w, spliced(gy, gx) != 0);
    if (out != expect)
      rep.record_failure("coordinate (" + std::to_string(gy) + "," + std::to_string(gx) + ") input " +
                         detail::describe(c, in) + " -> " + detail::describe(c, out));
  };

  for (std::size_t Y = 0; Y < s; ++Y)
    for (std::size_t X = 0; X < s; ++X)
      for (int colors = 0; colors < 16; ++colors) {
        std::array<BinaryImage, 4> blocks{BinaryImage(m), BinaryImage(m), BinaryImage(m), BinaryImage(m)};
        for (int k = 0; k < 4; ++k) blocks[k].set(Y, X, (colors >> k) & 1);
        const BinaryImage spliced = qbs_splice(blocks);
        for (int ey = 0; ey < 2; ++ey)
          for (int ex = 0; ex < 2; ++ex) check(blocks, spliced, Y, X, ey, ex);
      }

  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(m));
  for (int trial = 0; trial < 8; ++trial) {
    std::array<BinaryImage, 4> blocks{BinaryImage(m), BinaryImage(m), BinaryImage(m), BinaryImage(m)};
    for (auto& b : blocks)
      for (auto& px : b.mutable_pixels()) px = rng() & 1u;
    const BinaryImage spliced = qbs_splice(blocks);
    for (std::size_t Y = 0; Y < s; ++Y)
      for (std::size_t X = 0; X < s; ++X)
        for (int ey = 0; ey < 2; ++ey)
          for (int ex = 0; ex < 2; ++ex) check(blocks, spliced, Y, X, ey, ex);
  }
  return rep;
}

inline VerifyReport verify_qbs(int m) { return verify_qbs(build_qbs(m), m); }

/// All 8 inputs against majority_vote over three 1x1 blocks.
inline VerifyReport verify_majority3() {
  VerifyReport rep;
  rep.name = "majority3";
  const Circuit c = build_majority3();
  const auto& in_w = c.group("in");
  const int out_w = c.group("out")[0];
  for (int bits = 0; bits < 8; ++bits) {
    std::array<BinaryImage, 3> copies{BinaryImage(0), BinaryImage(0), BinaryImage(0)};
    for (int k = 0; k < 3; ++k) copies[k].set(0, 0, (bits >> k) & 1);
    const bool expect = majority_vote(copies)(0, 0) != 0;
    BasisState in(c.wire_count());
    in.load(in_w, static_cast<std::uint64_t>(bits));
    const BasisState out = simulate(c, in);
    ++rep.cases;
    if (out.get(out_w) != expect || out.read(in_w) != static_cast<std::uint64_t>(bits))
      rep.record_failure("input " + detail::describe(c, in) + " -> " + detail::describe(c, out));
  }
  return rep;
}

/// The six rule configurations: (tau1, tau2) in {(0,-), (1,0), (1,1)} x eta in {0,1}.
inline std::vector<EmbedParams> slice_configs() {
  std::vector<EmbedParams> out;
  for (int eta = 0; eta < 2; ++eta) {
    out.push_back({0.5, false, false, eta});
    out.push_back({0.5, true, false, eta});
    out.push_back({0.5, true, true, eta});
  }
  return out;
}

inline std::string config_name(const EmbedParams& p) {
  return "tau1=" + std::to_string(int{p.tau1}) + " tau2=" + std::to_string(int{p.tau2}) +
         " eta=" + std::to_string(p.eta);
}

/// Per-pixel embed and extract slices, exhaustive over (4 MSBs, w, lsb) for
/// each configuration: embed vs embed_bit, extract vs extract_bit, and
/// embed-then-extract recovering w.
inline VerifyReport verify_hdwm_slices() {
  using L = PixelSliceLayout;
  VerifyReport rep;
  rep.name = "hdwm-pixel";
  for (const auto& p : slice_configs()) {
    const Circuit emb = build_hdwm_pixel(p);
    const Circuit ext = build_hdwm_extract_pixel(p);
    const Circuit both = then(emb, ext);
    for (int msb = 0; msb < 16; ++msb)
      for (int w = 0; w < 2; ++w)
        for (int lsb = 0; lsb < 2; ++lsb) {
          const auto pixel = static_cast<std::uint8_t>((msb & 8 ? 0x10 : 0) | (msb & 4 ? 0x20 : 0) |
                                                       (msb & 2 ? 0x40 : 0) | (msb & 1 ? 0x80 : 0) | lsb);
          const bool v = msb_xor_flag(pixel, p.eta);
          BasisState in(L::wires);
          in.set(L::msb7, msb & 1);
          in.set(L::msb6, msb & 2);
          in.set(L::msb5, msb & 4);
          in.set(L::msb4, msb & 8);
          in.set(L::watermark, w);
          in.set(L::lsb, lsb);

          const BasisState e = simulate(emb, in);
          rep.cases += 3;
          const bool msbs_kept = e.read(emb.group("msb")) == in.read(emb.group("msb"));
          if (e.get(L::lsb) != embed_bit(lsb, w, v, p) || e.get(L::v) || !msbs_kept)
            rep.record_failure("embed " + config_name(p) + " input " + detail::describe(emb, in) +
                               " -> " + detail::describe(emb, e));

          BasisState xin(L::wires);
          xin.load(ext.group("msb"), in.read(ext.group("msb")));
          xin.set(L::lsb, lsb);
          const BasisState x = simulate(ext, xin);
          if (x.get(L::extracted) != extract_bit(lsb, v, p) || x.get(L::v) || x.get(L::lsb) != (lsb != 0))
            rep.record_failure("extract " + config_name(p) + " input " + detail::describe(ext, xin) +
                               " -> " + detail::describe(ext, x));

          const BasisState rt = simulate(both, in);
          if (rt.get(L::extracted) != (w != 0))
            rep.record_failure("embed+extract " + config_name(p) + " input " +
                               detail::describe(both, in) + " -> " + detail::describe(both, rt));
        }
  }
  return rep;
}

/// Every circuit built above must invert under its mirrored gate list and
/// agree with its negative-control expansion.
inline VerifyReport verify_reversibility(std::uint64_t seed = 0xEE) {
  VerifyReport rep;
  rep.name = "reversibility";
  std::vector<std::pair<std::string, Circuit>> circuits;
  circuits.emplace_back("qib8", build_qib(8));
  circuits.emplace_back("qe3", build_qe(3));
  for (int m = 0; m <= 2; ++m) circuits.emplace_back("qbs" + std::to_string(m), build_qbs(m));
  circuits.emplace_back("majority3", build_majority3());
  for (const auto& p : slice_configs()) {
    circuits.emplace_back("embed " + config_name(p), build_hdwm_pixel(p));
    circuits.emplace_back("extract " + config_name(p), build_hdwm_extract_pixel(p));
  }
  std::mt19937_64 rng(seed);
  for (const auto& [name, c] : circuits) {
    const Circuit inv = inverse(c);
    const Circuit expanded = expand_negative_controls(c);
    const bool exhaustive = c.wire_count() <= 12;
    const std::uint64_t n = exhaustive ? (1ull << c.wire_count()) : 4096;
    for (std::uint64_t i = 0; i < n; ++i) {
      BasisState s(c.wire_count());
      const std::uint64_t bits = exhaustive ? i : rng();
      for (int w = 0; w < c.wire_count(); ++w) s.set(w, (bits >> w) & 1u);
      const BasisState out = simulate(c, s);
      ++rep.cases;
      if (simulate(inv, out) != s)
        rep.record_failure(name + ": inverse does not restore " + detail::describe(c, s));
      if (simulate(expanded, s) != out)
        rep.record_failure(name + ": negative-control expansion differs on " + detail::describe(c, s));
    }
  }
  return rep;
}

/// Ancillas promised to return to 0 do so for every input with zeroed ancillas.
inline VerifyReport verify_ancilla_hygiene() {
  VerifyReport rep;
  rep.name = "ancilla-hygiene";
  for (int width = 1; width <= 4; ++width) {
    const Circuit c = build_qe(width);
    const auto& anc = c.group("ancilla");
    for (std::uint64_t ab = 0; ab < (1ull << (2 * width)); ++ab)
      for (int flag = 0; flag < 2; ++flag) {
        BasisState in(c.wire_count());
        in.load(c.group("a"), ab & ((1ull << width) - 1));
        in.load(c.group("b"), ab >> width);
        in.set(c.group("flag")[0], flag);
        const BasisState out = simulate(c, in);
        ++rep.cases;
        if (out.read(anc) != 0)
          rep.record_failure("qe" + std::to_string(width) + " ancilla dirty after " + detail::describe(c, in));
      }
  }
  for (const auto& p : slice_configs()) {
    for (const Circuit& c : {build_hdwm_pixel(p), build_hdwm_extract_pixel(p)}) {
      const int v = c.group("v")[0];
      for (std::uint64_t bits = 0; bits < (1ull << c.wire_count()); ++bits) {
        if ((bits >> v) & 1u) continue;
        BasisState in(c.wire_count());
        for (int w = 0; w < c.wire_count(); ++w) in.set(w, (bits >> w) & 1u);
        ++rep.cases;
        if (simulate(c, in).get(v))
          rep.record_failure("pixel slice " + config_name(p) + " V dirty after " + detail::describe(c, in));
      }
    }
  }
  return rep;
}

inline std::vector<VerifyReport> run_all_verifications() {
  std::vector<VerifyReport> out;
  out.push_back(verify_qib());
  out.push_back(verify_qe());
  for (int m = 0; m <= 2; ++m) out.push_back(verify_qbs(m));
  out.push_back(verify_majority3());
  out.push_back(verify_hdwm_slices());
  out.push_back(verify_reversibility());
  out.push_back(verify_ancilla_hygiene());
  return out;
}

}  // namespace qwm::qsim
