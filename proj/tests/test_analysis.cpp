// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <map>
#include <random>

#include "socgen/analysis.hpp"
#include "socgen/blinker.hpp"

using namespace socgen;

namespace {

std::map<std::string, PortDirection> port_map(const LoweredDesign& d) {
  std::map<std::string, PortDirection> out;
  for (const auto& p : d.io_ports) out[d.names[p.signal]] = p.direction;
  return out;
}

}  // namespace

TEST(Drivers, CombAndSyncConflict) {
  Module m;
  Signal x("x", 4);
  m.comb(x.eq(1));
  m.sync(x.eq(2));
  const Fragment f = finalize(m);
  try {
    check_single_driver(collect_drivers(f));
    FAIL() << "expected MultipleDriverError";
  } catch (const MultipleDriverError& e) {
    EXPECT_EQ(e.signal(), "x");
    EXPECT_NE(std::string(e.what()).find("MultipleDriver"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("'x'"), std::string::npos);
  }
}

TEST(Drivers, TwoDomainsConflict) {
  Module m;
  Signal x("x");
  m.clock_domain(ClockDomain("a"));
  m.clock_domain(ClockDomain("b"));
  m.sync("a", {x.eq(1)});
  m.sync("b", {x.eq(0)});
  EXPECT_THROW(lower(finalize(m), {}), MultipleDriverError);
}

TEST(Drivers, SameClassMergesPartialDrives) {
  Module m;
  Signal x("x", 4);
  m.comb(x.slice(0, 2).eq(1));
  m.comb(x.slice(2, 4).eq(2));
  EXPECT_NO_THROW(lower(finalize(m), {x}));
}

// Random assignment sets; the check must fail exactly when some signal has
// more than one driver class.
TEST(Drivers, BruteForceAgainstCount) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    Module m;
    m.clock_domain(ClockDomain("sys"));
    m.clock_domain(ClockDomain("aux"));
    std::vector<Signal> sigs;
    for (int i = 0; i < 4; ++i) sigs.emplace_back("s" + std::to_string(i), 2);
    std::vector<std::set<int>> classes(sigs.size());
    const int n = static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k) {
      const size_t i = rng() % sigs.size();
      const int cls = static_cast<int>(rng() % 3);
      classes[i].insert(cls);
      if (cls == 0) m.comb(sigs[i].eq(1));
      if (cls == 1) m.sync("sys", {sigs[i].eq(1)});
      if (cls == 2) m.sync("aux", {sigs[i].eq(1)});
    }
    bool conflict = false;
    for (const auto& c : classes) conflict |= c.size() > 1;
    const Fragment f = finalize(m);
    if (conflict) {
      EXPECT_THROW(check_single_driver(collect_drivers(f)), MultipleDriverError);
    } else {
      EXPECT_NO_THROW(check_single_driver(collect_drivers(f)));
    }
  }
}

TEST(Directions, BlinkerLedOnly) {
  Blinker b(4);
  const LoweredDesign d = lower(finalize(b), {b.led});
  const auto ports = port_map(d);
  const std::map<std::string, PortDirection> expected{
      {"led", PortDirection::Out}, {"sys_clk", PortDirection::In}, {"sys_rst", PortDirection::In}};
  EXPECT_EQ(ports, expected);
  EXPECT_EQ(d.names[d.io_ports[0].signal], "led");
}

TEST(Directions, ReadOnlyAndUnusedAreInputs) {
  Module m;
  Signal a("a", 3), y("y", 3), unused("unused");
  m.comb(y.eq(a));
  const Fragment f = finalize(m);
  const auto io = infer_io_directions(f, {a, y, unused});
  ASSERT_EQ(io.size(), 3u);
  EXPECT_EQ(io[0].direction, PortDirection::In);
  EXPECT_EQ(io[1].direction, PortDirection::Out);
  EXPECT_EQ(io[2].direction, PortDirection::In);
}

TEST(Directions, InstanceInout) {
  Module m;
  Signal pad("pad"), o("o");
  m.special(ExternalInstance{"IOBUF", "buf", {}, {{"IO", PortDirection::InOut, pad}, {"O", PortDirection::Out, o}}});
  const auto io = infer_io_directions(finalize(m), {pad, o});
  EXPECT_EQ(io[0].direction, PortDirection::InOut);
  EXPECT_EQ(io[1].direction, PortDirection::Out);
}

TEST(Names, CollisionsGetSuffixes) {
  NameTable t;
  EXPECT_EQ(t.assign(1, "x"), "x");
  EXPECT_EQ(t.assign(2, "x"), "x_0");
  EXPECT_EQ(t.assign(3, "x"), "x_1");
  EXPECT_EQ(t.assign(1, "other"), "x");
  EXPECT_EQ(t.reserve("x"), "x_2");
}

TEST(Names, ReservedWordsAndSanitizing) {
  NameTable t;
  EXPECT_EQ(t.assign(1, "module"), "module_s");
  EXPECT_EQ(t.assign(2, "reg"), "reg_s");
  EXPECT_EQ(t.assign(3, "a.b c"), "a_b_c");
  EXPECT_EQ(t.assign(4, "9lives"), "_9lives");
  EXPECT_EQ(sanitize_identifier(""), "sig");
}

TEST(Names, LoweredOrderIsDeterministic) {
  Module m;
  Signal a("v", 2), b("v", 2), c("v", 2);
  m.comb(c.eq(a + b));
  const LoweredDesign d = lower(finalize(m), {c});
  EXPECT_EQ(d.names[c], "v");
  EXPECT_EQ(d.names[a], "v_0");
  EXPECT_EQ(d.names[b], "v_1");
}

TEST(Lower, UndeclaredDomains) {
  Module m;
  Signal x("x");
  m.sync("pix", {x.eq(~x)});
  const Fragment f = finalize(m);
  EXPECT_THROW(lower(f, {x}), UnresolvedDomainError);
  LowerOptions opts;
  opts.external_domains = {"pix"};
  const LoweredDesign d = lower(f, {x}, opts);
  const auto ports = port_map(d);
  EXPECT_EQ(ports.count("pix_clk"), 1u);
  EXPECT_EQ(ports.count("pix_rst"), 1u);
}

TEST(Lower, CombGroupsShareTargets) {
  Module m;
  Signal a("a"), b("b"), c("c"), sel("sel");
  m.comb(a.eq(sel));
  m.comb(If(sel, {b.eq(1)}));
  m.comb(b.eq(c));
  const LoweredDesign d = lower(finalize(m), {a, b, sel, c});
  ASSERT_EQ(d.comb_groups.size(), 2u);
  EXPECT_EQ(d.comb_groups[0].targets.size(), 1u);
  EXPECT_EQ(d.comb_groups[1].targets.size(), 1u);
  // default assignment first, then both original statements
  EXPECT_EQ(d.comb_groups[1].body.size(), 3u);
}

TEST(Lower, SyncResetClause) {
  Blinker b(4);
  const LoweredDesign d = lower(finalize(b), {b.led});
  ASSERT_EQ(d.sync_processes.size(), 1u);
  const auto& body = d.sync_processes[0].body;
  ASSERT_EQ(body.size(), 1u);
  const auto& top = std::get<IfStmt>(body[0].node);
  EXPECT_EQ(top.then_body.size(), 2u);
  EXPECT_EQ(d.role(b.counter), SignalRole::Sync);
  EXPECT_EQ(d.role(b.toggle), SignalRole::Comb);
  EXPECT_EQ(d.role(b.led), SignalRole::Sync);
}

TEST(InferShape, MatchesConstructionShape) {
  Signal a("a", 5, true), b("b", 3);
  const Expr e = mux(a < b, a * b, (a + b) << 2);
  const ShapeEnv env = shape_env({a, b});
  EXPECT_EQ(infer_shape(e, env), e.shape());
  EXPECT_THROW(infer_shape(e, shape_env({a})), AnalysisError);
}
