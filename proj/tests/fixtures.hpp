// SPDX-License-Identifier: Apache-2.0
//
// Small designs shared by the unit tests and the acceptance runner.
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "socgen/platform.hpp"
#include "socgen/verilog.hpp"

namespace fixtures {

// Only the pins printed in the board listing, plus a clock pin.
inline socgen::Platform board_pins(socgen::Dialect dialect) {
  using namespace socgen;
  std::vector<IoEntry> io;
  io.push_back({"user_led", 0, Pins("H17"), {}});
  io.push_back({"user_led", 1, Pins("K15"), {}});
  io.push_back({"serial", 0, std::vector<Subsignal>{{"tx", Pins("D4"), {}}, {"rx", Pins("C4"), {}}},
                {IOStandard{"LVCMOS33"}}});
  io.push_back({"clk100", 0, Pins("E3"), {}});
  return Platform("board", "xc7a100t-CSG324-1", std::move(io), dialect, "clk100", 10.0);
}

// Requests every pin of board_pins(), wires serial rx to tx and blinks the
// leds; returns the constraint text.
inline std::string board_pins_constraints(socgen::Dialect dialect) {
  using namespace socgen;
  Platform p = board_pins(dialect);
  const Signal led0 = p.request("user_led");
  const Signal led1 = p.request("user_led");
  const Resource serial = p.request("serial");
  const Signal clk = p.request("clk100");
  p.add_period_constraint(clk, p.default_clk_period());
  Module m;
  ClockDomain& sys = m.clock_domain(ClockDomain("sys", false));
  m.comb(sys.clk.eq(clk));
  m.comb(serial["tx"].eq(serial["rx"]));
  m.sync(led0.eq(~led0));
  m.comb(led1.eq(led0));
  const LoweredDesign d = lower(finalize(m), {led0, led1, serial["tx"], serial["rx"], clk});
  return p.emit_constraints(emit_verilog(d, "top").port_table);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fixtures
