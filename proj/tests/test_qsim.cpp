#include <gtest/gtest.h>

#include "qwm/qsim.hpp"
#include "qwm/verify.hpp"

using namespace qwm;
using namespace qwm::qsim;

TEST(Simulate, EmptyCircuitIsIdentity) {
  const Circuit c(3);
  BasisState s(3);
  s.set(1, true);
  EXPECT_EQ(simulate(c, s), s);
}

TEST(Simulate, DoubleXIsIdentity) {
  Circuit c(1);
  c.x(0).x(0);
  BasisState s(1);
  EXPECT_EQ(simulate(c, s), s);
  Circuit once(1);
  once.x(0);
  EXPECT_TRUE(simulate(once, s).get(0));
}

TEST(Simulate, ToffoliTruthTable) {
  Circuit c(3);
  c.toffoli(pos(0), pos(1), 2);
  for (int in = 0; in < 8; ++in) {
    BasisState s(3);
    s.load(std::vector<int>{0, 1, 2}, static_cast<std::uint64_t>(in));
    const auto out = simulate(c, s);
    const bool fire = (in & 3) == 3;
    EXPECT_EQ(out.get(2), ((in >> 2) & 1) != fire);
    EXPECT_EQ(out.get(0), (in & 1) != 0);
    EXPECT_EQ(out.get(1), (in & 2) != 0);
  }
}

TEST(Simulate, NegativeControlsAndSwaps) {
  Circuit c(4);
  c.mcx({neg(0), pos(1)}, 3);
  BasisState s(4);
  s.set(1, true);
  EXPECT_TRUE(simulate(c, s).get(3));
  s.set(0, true);
  EXPECT_FALSE(simulate(c, s).get(3));

  Circuit sw(3);
  sw.fredkin(pos(0), 1, 2);
  BasisState t(3);
  t.set(1, true);
  EXPECT_TRUE(simulate(sw, t).get(1));
  t.set(0, true);
  const auto u = simulate(sw, t);
  EXPECT_FALSE(u.get(1));
  EXPECT_TRUE(u.get(2));
}

TEST(Circuit, RejectsMalformedGates) {
  Circuit c(3);
  EXPECT_THROW(c.cnot(pos(0), 0), Error);
  EXPECT_THROW(c.x(3), Error);
  EXPECT_THROW(c.add({GateKind::TOFFOLI, {2}, {pos(0)}}), Error);
  EXPECT_THROW(c.add({GateKind::SWAP, {1}, {}}), Error);
  EXPECT_THROW(Circuit(0), Error);
  EXPECT_THROW(Circuit(65), Error);
  EXPECT_THROW(c.group("missing"), Error);
}

TEST(Circuit, InverseAndExpansion) {
  Circuit c(4);
  c.mcx({neg(0), pos(1), neg(2)}, 3).cnot(pos(3), 0).swap(1, 2).fredkin(neg(3), 0, 2);
  const auto inv = inverse(c);
  const auto exp = expand_negative_controls(c);
  for (const auto& g : exp.gates())
    for (const auto& ctl : g.controls) EXPECT_TRUE(ctl.on_one);
  for (int i = 0; i < 16; ++i) {
    BasisState s(4);
    s.load(std::vector<int>{0, 1, 2, 3}, static_cast<std::uint64_t>(i));
    EXPECT_EQ(simulate(inv, simulate(c, s)), s);
    EXPECT_EQ(simulate(exp, s), simulate(c, s));
  }
}

TEST(Netlist, Format) {
  Circuit c(3);
  c.x(0).mcx({pos(0), neg(1)}, 2).swap(0, 1);
  c.name_group("in", {0, 1});
  const std::string text = to_netlist(c);
  EXPECT_NE(text.find("# wires 3"), std::string::npos) << text;
  EXPECT_NE(text.find("MCX 2 | 0+ 1-"), std::string::npos) << text;
  EXPECT_NE(text.find("SWAP 0 1"), std::string::npos) << text;
}

TEST(Qib, Examples) {
  const auto c1 = build_qib(1);
  BasisState s(2);
  s.set(0, true);
  const auto out = simulate(c1, s);
  EXPECT_TRUE(out.get(1));
  const auto c8 = build_qib(8);
  BasisState t(16);
  t.load(c8.group("source"), 178);
  EXPECT_EQ(simulate(c8, t).read(c8.group("backup")), 178u);
  t.load(c8.group("backup"), 0x0F);
  EXPECT_EQ(simulate(c8, t).read(c8.group("backup")), 178u ^ 0x0Fu);
}

TEST(Qe, Examples) {
  const auto c = build_qe(3);
  auto run = [&](int a, int b) {
    BasisState s(c.wire_count());
    s.load(c.group("a"), a);
    s.load(c.group("b"), b);
    return simulate(c, s).get(c.group("flag")[0]);
  };
  EXPECT_TRUE(run(5, 5));
  EXPECT_FALSE(run(5, 6));
}

TEST(Qbs, SmallestCase) {
  const auto c = build_qbs(0);
  for (int colors = 0; colors < 16; ++colors)
    for (int q = 0; q < 4; ++q) {
      BasisState s(c.wire_count());
      for (int k = 0; k < 4; ++k) s.set(k, (colors >> k) & 1);
      s.set(c.group("y_ext")[0], q >> 1);
      s.set(c.group("x_ext")[0], q & 1);
      EXPECT_EQ(simulate(c, s).get(c.group("out")[0]), ((colors >> q) & 1) != 0);
    }
}

TEST(Majority3, Examples) {
  const auto c = build_majority3();
  auto run = [&](int bits) {
    BasisState s(4);
    s.load(c.group("in"), static_cast<std::uint64_t>(bits));
    return simulate(c, s).get(3);
  };
  EXPECT_TRUE(run(0b011));
  EXPECT_FALSE(run(0b100));
  for (int b = 0; b < 8; ++b) EXPECT_EQ(run(b), __builtin_popcount(b) >= 2);
}

TEST(HdwmSlice, PlainRuleIsSwapIn) {
  EmbedParams p;
  const auto c = build_hdwm_pixel(p);
  using L = PixelSliceLayout;
  for (int w = 0; w < 2; ++w)
    for (int lsb = 0; lsb < 2; ++lsb) {
      BasisState s(L::wires);
      s.set(L::watermark, w);
      s.set(L::lsb, lsb);
      s.set(L::msb7, true);
      const auto out = simulate(c, s);
      EXPECT_EQ(out.get(L::lsb), w != 0);
      EXPECT_EQ(out.get(L::watermark), lsb != 0);
      EXPECT_FALSE(out.get(L::v));
    }
}

TEST(Verify, AllSuitesPass) {
  for (const auto& rep : run_all_verifications()) {
    EXPECT_TRUE(rep.passed) << rep.name << ": " << rep.counterexample;
    EXPECT_GT(rep.cases, 0u) << rep.name;
  }
}

TEST(Verify, QbsSweepCoversEveryCoordinate) {
  for (int m = 0; m <= 2; ++m) {
    const auto rep = verify_qbs(m);
    EXPECT_TRUE(rep.passed);
    EXPECT_GE(rep.cases, std::uint64_t{1} << (2 * (m + 1)));
  }
}

TEST(Verify, MutatedQuadrantOrderIsCaught) {
  const auto rep = verify_qbs(build_qbs(1, {0, 2, 1, 3}), 1);
  EXPECT_FALSE(rep.passed);
  EXPECT_FALSE(rep.counterexample.empty());
}

TEST(Verify, MajorityIsExhaustive) {
  EXPECT_EQ(verify_majority3().cases, 8u);
}

TEST(Verify, BrokenSliceIsCaught) {
  // Extraction slice without the tau2 inversion must disagree with the rules.
  EmbedParams p{0.5, true, true, 0};
  EmbedParams q{0.5, true, false, 0};
  const auto emb = build_hdwm_pixel(p);
  const auto ext = build_hdwm_extract_pixel(q);
  using L = PixelSliceLayout;
  BasisState s(L::wires);
  s.set(L::watermark, true);
  EXPECT_NE(simulate(then(emb, ext), s).get(L::extracted), true);
}
