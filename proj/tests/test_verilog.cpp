// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <regex>

#include "socgen/blinker.hpp"
#include "socgen/keywords.hpp"
#include "socgen/verilog.hpp"

using namespace socgen;

namespace {

EmittedModule blinker_module(int64_t preload) {
  Blinker b(preload);
  return emit_verilog(lower(finalize(b), {b.led}), "top");
}

size_t count(const std::string& text, const std::string& needle) {
  size_t n = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(EmitExpression, SizedConstantsAndParentheses) {
  Blinker b(5'000'000);
  const LoweredDesign d = lower(finalize(b), {b.led});
  EXPECT_EQ(emit_expression(b.counter == 0, d.names), "(counter == 23'd0)");
  EXPECT_EQ(emit_expression(~b.led, d.names), "(~led)");
}

TEST(EmitExpression, ConcatIsMsbFirst) {
  NameTable names;
  Signal a("a"), b("b");
  names.assign(a.id(), "a");
  names.assign(b.id(), "b");
  EXPECT_EQ(emit_expression(cat({a, b}), names), "{b, a}");
}

TEST(EmitExpression, OperandsWidenedExplicitly) {
  NameTable names;
  Signal a("a", 4), b("b", 4), s("s", 4, true);
  for (const auto& x : {a, b, s}) names.assign(x.id(), x.name_hint());
  EXPECT_EQ(emit_expression(a + b, names), "({1'd0, a} + {1'd0, b})");
  EXPECT_EQ(emit_expression(a - b, names), "($signed({1'd0, a}) - $signed({1'd0, b}))");
  EXPECT_EQ(emit_expression(s + a, names), "((s + 6'sd0) + $signed({2'd0, a}))");
  EXPECT_EQ(emit_expression(s >> 1, names), "(s >>> 1'd1)");
  EXPECT_EQ(emit_expression(Const(-3) + s, names), "((-5'sd3) + (s + 5'sd0))");
}

TEST(EmitExpression, CompoundSliceNeedsTemporary) {
  NameTable names;
  Signal a("a", 4), b("b", 4);
  names.assign(a.id(), "a");
  names.assign(b.id(), "b");
  EXPECT_THROW(emit_expression((a + b).slice(1, 3), names), AnalysisError);
  std::vector<TempAssign> temps;
  EXPECT_EQ(emit_expression((a + b).slice(1, 3), names, &temps), "tmp[2:1]");
  ASSERT_EQ(temps.size(), 1u);
  EXPECT_EQ(temps[0].shape, (Shape{5, false}));
}

TEST(EmitVerilog, BlinkerStructure) {
  const EmittedModule m = blinker_module(5'000'000);
  ASSERT_EQ(m.port_table.size(), 3u);
  EXPECT_EQ(m.port_table[0].name, "led");
  EXPECT_EQ(m.port_table[0].direction, PortDirection::Out);
  EXPECT_EQ(m.port_table[0].width, 1);
  EXPECT_EQ(m.port_table[1].name, "sys_clk");
  EXPECT_EQ(m.port_table[2].name, "sys_rst");
  EXPECT_EQ(m.text.rfind("// Generated by socgen ", 0), 0u);
  EXPECT_NE(m.text.find("module top(\n\toutput reg led,\n\tinput wire sys_clk,\n\tinput wire sys_rst\n);"),
            std::string::npos);
  EXPECT_EQ(count(m.text, "always @(*)"), 1u);
  EXPECT_EQ(count(m.text, "always @(posedge sys_clk)"), 1u);
  EXPECT_NE(m.text.find("if (sys_rst) begin"), std::string::npos);
  EXPECT_NE(m.text.find("toggle = (counter == 23'd0);"), std::string::npos);
  EXPECT_NE(m.text.find("counter <= 23'd5000000;"), std::string::npos);
  EXPECT_NE(m.text.find("reg [22:0] counter = 23'd0;"), std::string::npos);
  EXPECT_TRUE(m.text.size() > 0 && m.text.substr(m.text.size() - 10) == "endmodule\n");
}

TEST(EmitVerilog, EmptyDesign) {
  Module m;
  const EmittedModule e = emit_verilog(lower(finalize(m), {}), "m");
  EXPECT_NE(e.text.find("module m();\n"), std::string::npos);
  EXPECT_NE(e.text.find("endmodule"), std::string::npos);
  EXPECT_EQ(count(e.text, "always"), 0u);
}

TEST(EmitVerilog, MemoryInlineInit) {
  Module m;
  Signal adr("adr", 2), dat("dat", 8);
  m.special(Memory{"mem", 8, 4, {1, 2, 3, 4}, {MemoryPort{adr, dat}}});
  const EmittedModule e = emit_verilog(lower(finalize(m), {adr, dat}), "m");
  EXPECT_NE(e.text.find("reg [7:0] mem[0:3];"), std::string::npos);
  EXPECT_EQ(count(e.text, "\tmem["), 4u);
  EXPECT_NE(e.text.find("mem[3] = 8'h4;"), std::string::npos);
  EXPECT_NE(e.text.find("dat <= mem[adr];"), std::string::npos);
  EXPECT_EQ(e.text.find("readmemh"), std::string::npos);
}

TEST(EmitVerilog, ExternalInstance) {
  Module m;
  Signal i("i"), o("o", 8);
  m.special(ExternalInstance{"BUFG", "bufg", {{"WIDTH", int64_t{8}}, {"MODE", std::string("fast")}},
                             {{"I", PortDirection::In, ~i}, {"O", PortDirection::Out, o}}});
  const EmittedModule e = emit_verilog(lower(finalize(m), {i, o}), "m");
  EXPECT_NE(e.text.find("BUFG #(\n\t.WIDTH(8),\n\t.MODE(\"fast\")\n) bufg (\n\t.I((~i)),\n\t.O(o)\n);"),
            std::string::npos)
      << e.text;
  EXPECT_NE(e.text.find("output wire [7:0] o"), std::string::npos);
}

TEST(EmitVerilog, ReservedNamesEscaped) {
  Module m;
  Signal in("input"), out("output");
  m.comb(out.eq(in));
  const EmittedModule e = emit_verilog(lower(finalize(m), {in, out}), "m");
  EXPECT_NE(e.text.find("input wire input_s"), std::string::npos);
  EXPECT_NE(e.text.find("output_s = input_s;"), std::string::npos);
}

TEST(EmitVerilog, Deterministic) {
  EXPECT_EQ(blinker_module(1234).text, blinker_module(1234).text);
}

// Every identifier-like token is a keyword, a declared name, or part of a
// sized literal.
TEST(EmitVerilog, IdentifiersAreDeclared) {
  Module m;
  Signal a("a", 4, true), b("b", 4), y("y", 6), sel("sel", 2);
  m.comb(Case(sel, {{0, {y.eq(a + b)}}, {1, {y.eq((a * b).slice(2, 8))}}}, {y.eq(cat({a[0], b}))}));
  const EmittedModule e = emit_verilog(lower(finalize(m), {a, b, y, sel}), "top");
  const std::regex token(R"(\$?[A-Za-z_][A-Za-z0-9_]*)");
  const std::regex literal(R"(\d+'s?[dhb][0-9a-fA-F]+)");
  std::string stripped = std::regex_replace(e.text, literal, " ");
  std::string body = stripped.substr(stripped.find("module"));
  for (auto it = std::sregex_iterator(body.begin(), body.end(), token); it != std::sregex_iterator(); ++it) {
    const std::string t = it->str();
    if (t == "top" || t == "$signed" || t == "$unsigned" || is_verilog_keyword(t)) continue;
    EXPECT_TRUE(e.identifiers.count(t)) << t;
  }
}

TEST(EmitVerilog, NoWideUnsizedConstants) {
  const EmittedModule m = blinker_module(5'000'000);
  const std::regex unsized(R"([^'\w](\d{11,}))");
  EXPECT_FALSE(std::regex_search(m.text, unsized));
}
