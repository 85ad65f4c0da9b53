// SPDX-License-Identifier: Apache-2.0
//
// Built-in example designs and the batch build that turns one of them into
// Verilog, constraints and a CSR map, optionally simulating it.
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "socgen/blinker.hpp"
#include "socgen/platform.hpp"
#include "socgen/sim.hpp"
#include "socgen/soc.hpp"
#include "socgen/verilog.hpp"

namespace socgen {

struct BuildConfig {
  std::string design = "blinky";
  std::filesystem::path output_dir = "build";
  std::string platform = "nexys4ddr-like";
  std::optional<Dialect> dialect;
  double sys_clk_freq = 100e6;
  double period = 0.1;
  std::optional<std::filesystem::path> rom_init;
  uint32_t rom_size = 0x8000;
  std::optional<uint64_t> simulate;
  bool trace = false;
};

/// "blinky" and "minisoc".
std::vector<std::string> builtin_designs();

/// Blinker on the first user LED, clocked from the platform default clock.
class BlinkyTop : public Module {
 public:
  BlinkyTop(Platform& platform, int64_t preload);

  std::shared_ptr<soc::Crg> crg;
  std::shared_ptr<Blinker> blinker;
  Signal led;

  std::vector<Signal> boundary() const;
};

/// An elaborated design with everything needed to emit or simulate it.
struct Elaborated {
  std::string design;
  Platform platform;
  std::shared_ptr<Module> top;
  std::vector<Signal> boundary;
  LoweredDesign lowered;
  EmittedModule verilog;
  std::string constraints;
  std::optional<soc::SocMap> map;

  BlinkyTop* blinky() const { return dynamic_cast<BlinkyTop*>(top.get()); }
  soc::Soc* minisoc() const { return dynamic_cast<soc::Soc*>(top.get()); }
};

/// Checks the configuration and elaborates the selected design. Throws
/// socgen::Error subclasses.
Elaborated elaborate(const BuildConfig& config);

struct SimulationReport {
  uint64_t cycles = 0;
  int checks = 0;
  /// Blinky only: led toggle instants and the spacing between them.
  std::vector<uint64_t> toggles;
  std::optional<uint64_t> toggle_period;
};

/// Runs the design's built-in stimulus for `cycles` ticks of "sys".
/// Throws ExpectationError on a mismatch.
SimulationReport simulate(const Elaborated& e, uint64_t cycles,
                          std::ostream* vcd = nullptr);

/// Writes the artifacts, prints a summary to `out` and one line per
/// diagnostic to `err`. Returns the process exit status.
int run_build(const BuildConfig& config, std::ostream& out, std::ostream& err);

}  // namespace socgen
