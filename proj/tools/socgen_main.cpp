// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include <CLI11.hpp>

#include "socgen/build.hpp"

int main(int argc, char** argv) {
  socgen::BuildConfig config;
  std::string dialect;
  std::string rom_init;
  uint64_t simulate = 0;

  CLI::App app{"Elaborates a built-in design to Verilog, constraints and a CSR map"};
  app.set_version_flag("--version", std::string("socgen ") + SOCGEN_VERSION);
  app.add_option("--design", config.design, "Design to build")
      ->check(CLI::IsMember(socgen::builtin_designs()))
      ->capture_default_str();
  app.add_option("--output-dir", config.output_dir, "Directory for the generated files")->capture_default_str();
  app.add_option("--platform", config.platform, "Target board")
      ->check(CLI::IsMember(socgen::builtin_platforms()))
      ->capture_default_str();
  app.add_option("--dialect", dialect, "Constraint dialect override")->check(CLI::IsMember({"xdc", "lpf"}));
  app.add_option("--sys-clk-freq", config.sys_clk_freq, "System clock frequency in Hz")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--period", config.period, "Blink period in seconds (blinky)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--rom-init", rom_init, "Raw binary ROM image (minisoc)")->check(CLI::ExistingFile);
  app.add_option("--rom-size", config.rom_size, "ROM size in bytes (minisoc)")->capture_default_str();
  auto* sim_opt = app.add_option("--simulate", simulate, "Run the built-in stimulus for N cycles");
  app.add_flag("--trace", config.trace, "Write a VCD trace of the simulation");

  CLI11_PARSE(app, argc, argv);

  if (!dialect.empty()) config.dialect = socgen::parse_dialect(dialect);
  if (!rom_init.empty()) config.rom_init = rom_init;
  if (sim_opt->count()) config.simulate = simulate;
  return socgen::run_build(config, std::cout, std::cerr);
}
