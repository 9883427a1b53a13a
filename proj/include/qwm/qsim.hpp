#pragma once

// Classical-reversible circuit model and basis-state simulator.
//
// NEQR images are uniform superpositions of basis states |C_YX>|YX>, and every
// circuit used by the watermarking scheme is a permutation of basis states
// (X, CNOT, Toffoli, multi-controlled X, SWAP, Fredkin). Simulating each basis
// state independently is therefore exact; no amplitudes are tracked.
//
// Controls carry a polarity: a negative control fires on |0>. It is equivalent
// to an X on the control wire before and after the gate (expand_negative_controls).
//
// Netlist format (to_netlist), one gate per line:
//   GATE t0 [t1] | c0+ c1- ...
// where '+' marks a control on |1> and '-' a control on |0>. Lines starting
// with '#' carry the wire count and named wire groups.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qwm/error.hpp"
#include "qwm/hdwm.hpp"

namespace qwm::qsim {

enum class GateKind { X, CNOT, TOFFOLI, MCX, SWAP, FREDKIN };

inline std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::CNOT: return "CNOT";
    case GateKind::TOFFOLI: return "TOFFOLI";
    case GateKind::MCX: return "MCX";
    case GateKind::SWAP: return "SWAP";
    case GateKind::FREDKIN: return "FREDKIN";
  }
  return "?";
}

struct Control {
  int wire = 0;
  bool on_one = true;

  friend bool operator==(const Control&, const Control&) = default;
};

inline Control pos(int w) { return {w, true}; }
inline Control neg(int w) { return {w, false}; }

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> targets;
  std::vector<Control> controls;

  bool is_swap() const noexcept { return kind == GateKind::SWAP || kind == GateKind::FREDKIN; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

class BasisState {
 public:
  explicit BasisState(int wire_count = 0) : bits_(static_cast<std::size_t>(wire_count), 0) {}

  int size() const noexcept { return static_cast<int>(bits_.size()); }
  bool get(int w) const { return bits_.at(static_cast<std::size_t>(w)) != 0; }
  void set(int w, bool v) { bits_.at(static_cast<std::size_t>(w)) = v ? 1 : 0; }
  void flip(int w) { set(w, !get(w)); }

  /// Writes `value` onto `wires`, least significant bit on wires[0].
  void load(std::span<const int> wires, std::uint64_t value) {
    for (std::size_t i = 0; i < wires.size(); ++i) set(wires[i], (value >> i) & 1u);
  }

  std::uint64_t read(std::span<const int> wires) const {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < wires.size(); ++i) v |= std::uint64_t{get(wires[i])} << i;
    return v;
  }

  std::string to_string() const {
    std::string s;
    for (auto b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  friend bool operator==(const BasisState&, const BasisState&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

class Circuit {
 public:
  explicit Circuit(int wire_count) : wire_count_(wire_count) {
    require(wire_count > 0 && wire_count <= 64, ErrorKind::Structural, "wire count must lie in [1,64]");
  }

  int wire_count() const noexcept { return wire_count_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }

  Circuit& add(Gate g) {
    validate(g);
    gates_.push_back(std::move(g));
    return *this;
  }

  Circuit& x(int t) { return add({GateKind::X, {t}, {}}); }
  Circuit& cnot(Control c, int t) { return add({GateKind::CNOT, {t}, {c}}); }
  Circuit& toffoli(Control a, Control b, int t) { return add({GateKind::TOFFOLI, {t}, {a, b}}); }
  Circuit& mcx(std::vector<Control> cs, int t) { return add({GateKind::MCX, {t}, std::move(cs)}); }
  Circuit& swap(int a, int b) { return add({GateKind::SWAP, {a, b}, {}}); }
  Circuit& fredkin(Control c, int a, int b) { return add({GateKind::FREDKIN, {a, b}, {c}}); }

  void name_group(const std::string& name, std::vector<int> wires) {
    for (int w : wires) check_wire(w);
    groups_[name] = std::move(wires);
  }

  const std::vector<int>& group(const std::string& name) const {
    auto it = groups_.find(name);
    if (it == groups_.end()) fail(ErrorKind::Structural, "no wire group named '" + name + "'");
    return it->second;
  }

  const std::map<std::string, std::vector<int>>& groups() const noexcept { return groups_; }

 private:
  void check_wire(int w) const {
    require(w >= 0 && w < wire_count_, ErrorKind::Structural,
            "wire " + std::to_string(w) + " out of range (" + std::to_string(wire_count_) + " wires)");
  }

  void validate(const Gate& g) const {
    std::size_t want_targets = g.is_swap() ? 2 : 1;
    require(g.targets.size() == want_targets, ErrorKind::Structural,
            to_string(g.kind) + ": wrong number of targets");
    auto want_controls = [&](std::size_t n) {
      require(g.controls.size() == n, ErrorKind::Structural,
              to_string(g.kind) + ": expected " + std::to_string(n) + " controls");
    };
    switch (g.kind) {
      case GateKind::X: want_controls(0); break;
      case GateKind::CNOT: want_controls(1); break;
      case GateKind::TOFFOLI: want_controls(2); break;
      case GateKind::SWAP: want_controls(0); break;
      case GateKind::FREDKIN: want_controls(1); break;
      case GateKind::MCX: break;
    }
    std::vector<bool> used(static_cast<std::size_t>(wire_count_), false);
    auto claim = [&](int w) {
      check_wire(w);
      require(!used[static_cast<std::size_t>(w)], ErrorKind::Structural,
              to_string(g.kind) + ": wire " + std::to_string(w) + " used twice");
      used[static_cast<std::size_t>(w)] = true;
    };
    for (int t : g.targets) claim(t);
    for (const auto& c : g.controls) claim(c.wire);
  }

  int wire_count_;
  std::vector<Gate> gates_;
  std::map<std::string, std::vector<int>> groups_;
};

inline bool controls_fire(const Gate& g, const BasisState& s) {
  for (const auto& c : g.controls)
    if (s.get(c.wire) != c.on_one) return false;
  return true;
}

inline void apply(const Gate& g, BasisState& s) {
  if (!controls_fire(g, s)) return;
  if (g.is_swap()) {
    const bool a = s.get(g.targets[0]);
    s.set(g.targets[0], s.get(g.targets[1]));
    s.set(g.targets[1], a);
  } else {
    s.flip(g.targets[0]);
  }
}

inline BasisState simulate(const Circuit& c, BasisState s) {
  require(s.size() == c.wire_count(), ErrorKind::Structural,
          "state has " + std::to_string(s.size()) + " wires, circuit has " +
              std::to_string(c.wire_count()));
  for (const auto& g : c.gates()) apply(g, s);
  return s;
}

/// Every gate here is self-inverse, so the inverse is the mirrored gate list.
inline Circuit inverse(const Circuit& c) {
  Circuit out(c.wire_count());
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) out.add(*it);
  for (const auto& [name, wires] : c.groups()) out.name_group(name, wires);
  return out;
}

/// Rewrites negative controls as positive controls conjugated by X gates.
inline Circuit expand_negative_controls(const Circuit& c) {
  Circuit out(c.wire_count());
  for (const auto& g : c.gates()) {
    std::vector<int> flipped;
    Gate pg = g;
    for (auto& ctl : pg.controls) {
      if (!ctl.on_one) {
        flipped.push_back(ctl.wire);
        ctl.on_one = true;
      }
    }
    for (int w : flipped) out.x(w);
    out.add(std::move(pg));
    for (int w : flipped) out.x(w);
  }
  for (const auto& [name, wires] : c.groups()) out.name_group(name, wires);
  return out;
}

inline std::string to_netlist(const Circuit& c) {
  std::ostringstream os;
  os << "# wires " << c.wire_count() << "\n";
  for (const auto& [name, wires] : c.groups()) {
    os << "# group " << name << ":";
    for (int w : wires) os << ' ' << w;
    os << "\n";
  }
  for (const auto& g : c.gates()) {
    os << to_string(g.kind);
    for (int t : g.targets) os << ' ' << t;
    os << " |";
    for (const auto& ctl : g.controls) os << ' ' << ctl.wire << (ctl.on_one ? '+' : '-');
    os << "\n";
  }
  return os.str();
}

namespace detail {

inline std::vector<int> wire_range(int first, int count) {
  std::vector<int> w(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) w[static_cast<std::size_t>(i)] = first + i;
  return w;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Builders

/// Image backup: CNOT each source wire onto a zeroed backup wire.
/// Groups: "source", "backup".
inline Circuit build_qib(int width) {
  require(width >= 1, ErrorKind::InvalidArgument, "QIB width must be at least 1");
  Circuit c(2 * width);
  for (int i = 0; i < width; ++i) c.cnot(pos(i), width + i);
  c.name_group("source", detail::wire_range(0, width));
  c.name_group("backup", detail::wire_range(width, width));
  return c;
}

/// Equality comparator: flag ^= [a == b]. The ancilla register holds a xor b
/// while the flag is set and is uncomputed afterwards.
/// Groups: "a", "b", "ancilla", "flag".
inline Circuit build_qe(int width) {
  require(width >= 1, ErrorKind::InvalidArgument, "QE width must be at least 1");
  Circuit c(3 * width + 1);
  const int anc = 2 * width, flag = 3 * width;
  auto diff = [&] {
    for (int i = 0; i < width; ++i) {
      c.cnot(pos(i), anc + i);
      c.cnot(pos(width + i), anc + i);
    }
  };
  diff();
  std::vector<Control> all_zero;
  for (int i = 0; i < width; ++i) all_zero.push_back(neg(anc + i));
  c.mcx(all_zero, flag);
  diff();
  c.name_group("a", detail::wire_range(0, width));
  c.name_group("b", detail::wire_range(width, width));
  c.name_group("ancilla", detail::wire_range(anc, width));
  c.name_group("flag", {flag});
  return c;
}

/// Block splicing for four binary blocks of side 2^m.
///
/// Wires: color0..color3 (the four blocks' color qubits, sharing the position
/// registers "y" and "x" of m wires each), the extension position wires
/// "y_ext"/"x_ext", and a zeroed output color wire "out". For quadrant k the
/// extension pair is compared against the constant k (a QE against a classical
/// value collapses to polarity controls) and block quadrant_order[k]'s color is
/// copied into "out". The identity order gives 00 -> top-left, 01 -> top-right,
/// 10 -> bottom-left, 11 -> bottom-right.
inline Circuit build_qbs(int m, std::array<int, 4> quadrant_order = {0, 1, 2, 3}) {
  require(m >= 0 && m <= 8, ErrorKind::InvalidArgument, "QBS block exponent must lie in [0,8]");
  const int y0 = 4, x0 = 4 + m, y_ext = 4 + 2 * m, x_ext = y_ext + 1, out = y_ext + 2;
  Circuit c(out + 1);
  for (int k = 0; k < 4; ++k) {
    require(quadrant_order[k] >= 0 && quadrant_order[k] < 4, ErrorKind::InvalidArgument,
            "quadrant order entries must lie in [0,3]");
    c.mcx({Control{y_ext, (k >> 1) == 1}, Control{x_ext, (k & 1) == 1}, pos(quadrant_order[k])}, out);
  }
  for (int k = 0; k < 4; ++k) c.name_group("color" + std::to_string(k), {k});
  c.name_group("y", detail::wire_range(y0, m));
  c.name_group("x", detail::wire_range(x0, m));
  c.name_group("y_ext", {y_ext});
  c.name_group("x_ext", {x_ext});
  c.name_group("out", {out});
  return c;
}

/// out ^= ab xor bc xor ca. Groups: "in" (3 wires), "out".
inline Circuit build_majority3() {
  Circuit c(4);
  c.toffoli(pos(0), pos(1), 3);
  c.toffoli(pos(1), pos(2), 3);
  c.toffoli(pos(0), pos(2), 3);
  c.name_group("in", {0, 1, 2});
  c.name_group("out", {3});
  return c;
}

/// Shared wire layout of the per-pixel embedding/extraction slices.
struct PixelSliceLayout {
  static constexpr int msb7 = 0, msb6 = 1, msb5 = 2, msb4 = 3;
  static constexpr int watermark = 4;  // after embedding: the displaced carrier LSB
  static constexpr int lsb = 5;
  static constexpr int v = 6;          // ancilla, returns to 0
  static constexpr int extracted = 7;  // zeroed output of the extraction slice
  static constexpr int wires = 8;
};

namespace detail {

inline void msb_fan_in(Circuit& c, int eta) {
  using L = PixelSliceLayout;
  c.cnot(pos(L::msb7), L::v).cnot(pos(L::msb6), L::v).cnot(pos(L::msb5), L::v);
  if (eta == 1) c.cnot(pos(L::msb4), L::v);
}

inline void name_slice_groups(Circuit& c) {
  using L = PixelSliceLayout;
  c.name_group("msb", {L::msb7, L::msb6, L::msb5, L::msb4});
  c.name_group("watermark", {L::watermark});
  c.name_group("lsb", {L::lsb});
  c.name_group("v", {L::v});
  c.name_group("extracted", {L::extracted});
}

}  // namespace detail

/// Per-pixel embedding: V from the MSBs, the rule applied to the watermark
/// bit, then the result swapped into the LSB. V is uncomputed.
inline Circuit build_hdwm_pixel(const EmbedParams& p) {
  using L = PixelSliceLayout;
  require(p.eta == 0 || p.eta == 1, ErrorKind::InvalidArgument, "eta must be 0 or 1");
  Circuit c(L::wires);
  detail::msb_fan_in(c, p.eta);
  if (p.tau1) {
    c.cnot(pos(L::v), L::watermark);
    if (p.tau2) c.x(L::watermark);
  }
  c.swap(L::watermark, L::lsb);
  detail::msb_fan_in(c, p.eta);
  detail::name_slice_groups(c);
  return c;
}

/// Per-pixel extraction into the zeroed "extracted" wire. V is uncomputed.
inline Circuit build_hdwm_extract_pixel(const EmbedParams& p) {
  using L = PixelSliceLayout;
  require(p.eta == 0 || p.eta == 1, ErrorKind::InvalidArgument, "eta must be 0 or 1");
  Circuit c(L::wires);
  detail::msb_fan_in(c, p.eta);
  c.cnot(pos(L::lsb), L::extracted);
  if (p.tau1) {
    c.cnot(pos(L::v), L::extracted);
    if (p.tau2) c.x(L::extracted);
  }
  detail::msb_fan_in(c, p.eta);
  detail::name_slice_groups(c);
  return c;
}

/// Concatenation on a shared wire set.
inline Circuit then(const Circuit& first, const Circuit& second) {
  require(first.wire_count() == second.wire_count(), ErrorKind::Structural,
          "cannot concatenate circuits with different wire counts");
  Circuit out = first;
  for (const auto& g : second.gates()) out.add(g);
  return out;
}

}  // namespace qwm::qsim
