// SPDX-License-Identifier: Apache-2.0
#include "socgen/build.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

namespace socgen {

namespace fs = std::filesystem;

std::vector<std::string> builtin_designs() { return {"blinky", "minisoc"}; }

BlinkyTop::BlinkyTop(Platform& platform, int64_t preload) {
  crg = submodule("crg", std::make_shared<soc::Crg>(platform));
  blinker = submodule("blinker", std::make_shared<Blinker>(preload));
  led = platform.request("user_led").signal();
  comb(led.eq(blinker->led));
}

std::vector<Signal> BlinkyTop::boundary() const {
  auto out = crg->pads();
  out.push_back(led);
  return out;
}

namespace {

std::vector<uint8_t> read_binary(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read rom image '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Counting bytes, so the first word reads 0x03020100.
std::vector<uint8_t> default_rom_image() {
  std::vector<uint8_t> bytes(64);
  for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<uint8_t>(i);
  return bytes;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
}

}  // namespace

Elaborated elaborate(const BuildConfig& config) {
  const auto designs = builtin_designs();
  if (std::find(designs.begin(), designs.end(), config.design) == designs.end()) {
    throw ConfigError(fmt::format("unknown design '{}' (available: blinky, minisoc)", config.design));
  }
  if (!(config.sys_clk_freq > 0)) throw ConfigError("sys clock frequency must be positive");
  Platform platform = make_platform(config.platform);
  if (config.dialect) platform.set_dialect(*config.dialect);

  std::shared_ptr<Module> top;
  std::vector<Signal> boundary;
  std::optional<soc::SocMap> map;
  if (config.design == "blinky") {
    if (!(config.period > 0)) throw ConfigError("blink period must be positive");
    auto blinky = std::make_shared<BlinkyTop>(platform, blinker_preload(config.sys_clk_freq, config.period));
    boundary = blinky->boundary();
    top = blinky;
  } else {
    soc::SocConfig sc;
    sc.sys_clk_freq = config.sys_clk_freq;
    sc.rom_size = config.rom_size;
    sc.rom_init = config.rom_init ? read_binary(*config.rom_init) : default_rom_image();
    if (!config.rom_init && sc.rom_init.size() > sc.rom_size) sc.rom_init.resize(sc.rom_size);
    auto soc = std::make_shared<soc::Soc>(platform, sc);
    boundary = soc->boundary();
    map = soc->map;
    top = soc;
  }

  LoweredDesign lowered = lower(finalize(*top), boundary);
  EmittedModule verilog = emit_verilog(lowered, config.design);
  std::string constraints = platform.emit_constraints(verilog.port_table);
  return Elaborated{config.design, std::move(platform), std::move(top), std::move(boundary), std::move(lowered),
                    std::move(verilog), std::move(constraints), std::move(map)};
}

SimulationReport simulate(const Elaborated& e, uint64_t cycles, std::ostream* vcd) {
  sim::Simulator s(e.lowered);
  if (vcd) s.trace(*vcd);
  SimulationReport report;
  auto fail = [&](const std::string& what, uint64_t expected, uint64_t got) {
    return ExpectationError(fmt::format("expectation failed at cycle {}: {} expected {}, got {}", s.cycle(), what,
                                        expected, got));
  };

  if (const BlinkyTop* b = e.blinky()) {
    if (b->crg->rst_pad) s.write(*b->crg->rst_pad, 1);
    const int64_t preload = b->blinker->preload;
    const std::string& name = s.design().names[b->led];
    int64_t counter = 0;
    uint64_t led = 0;
    uint64_t previous = s.read(b->led);
    for (uint64_t t = 0; t < cycles; ++t) {
      s.tick();
      if (counter == 0) {
        led ^= 1;
        counter = preload;
      } else {
        --counter;
      }
      const uint64_t got = s.read(b->led);
      ++report.checks;
      if (got != led) throw fail(name, led, got);
      if (got != previous) report.toggles.push_back(s.cycle());
      previous = got;
    }
    if (report.toggles.size() >= 2) report.toggle_period = report.toggles[1] - report.toggles[0];
  } else if (const soc::Soc* soc = e.minisoc()) {
    if (soc->crg->rst_pad) s.write(*soc->crg->rst_pad, 1);
    soc::BusMaster bus(s, soc->bus);
    constexpr uint64_t kAccessCycles = 2;
    auto room = [&] { return s.cycle() + kAccessCycles <= cycles; };
    if (soc->rom) {
      const auto words = soc::rom_words(soc->rom->init, soc->rom->size);
      const uint32_t depth = soc->rom->size / 4;
      for (uint32_t w = 0; w < std::min<uint32_t>(16, depth) && room(); ++w) {
        const uint64_t expected = w < words.size() ? words[w] : 0;
        const uint32_t got = bus.read(soc::kRomOrigin + 4 * w);
        ++report.checks;
        if (got != expected) throw fail(fmt::format("rom word {}", w), expected, got);
      }
    }
    for (const auto& placed : soc->registers) {
      if (placed.reg.mode != soc::CsrMode::ReadWrite) continue;
      if (!room()) break;
      const uint64_t mask = placed.reg.size >= 32 ? 0xFFFFFFFFu : (uint64_t{1} << placed.reg.size) - 1;
      const uint32_t value = 0xA5C3F00Du ^ (placed.address * 2654435761u);
      bus.write(placed.address, value);
      if (!room()) break;
      const uint32_t got = bus.read(placed.address);
      ++report.checks;
      if (got != (value & mask)) throw fail(placed.peripheral + "_" + placed.reg.name, value & mask, got);
    }
    while (s.cycle() < cycles) s.tick();
  }
  report.cycles = s.cycle();
  return report;
}

namespace {

void print_summary(const Elaborated& e, std::ostream& out) {
  out << fmt::format("design {} on {} ({})\n", e.design, e.platform.name(), e.platform.device());
  std::string ports;
  for (const auto& p : e.verilog.port_table) {
    ports += fmt::format("{}{} {}", ports.empty() ? "" : ", ", to_string(p.direction), p.name);
  }
  out << fmt::format("  ports: {}", e.verilog.port_table.size());
  if (e.verilog.port_table.size() <= 8) out << " (" << ports << ")";
  out << "\n";
  if (e.map) {
    std::string regions;
    for (const auto& r : e.map->regions) {
      regions += fmt::format("{}{} 0x{:08x}+{}", regions.empty() ? "" : ", ", r.name, r.origin, r.length);
    }
    out << fmt::format("  regions: {}\n", regions.empty() ? "none" : regions);
    out << fmt::format("  csr registers: {}\n", e.map->registers.size());
  }
}

void run_verilog_check(const fs::path& file) {
  const char* checker = std::getenv("SOCGEN_VERILOG_CHECK");
  if (!checker || !*checker) return;
  const std::string command = fmt::format("{} '{}'", checker, file.string());
  const int status = std::system(command.c_str());
  if (status != 0) {
    throw ConfigError(fmt::format("verilog check '{}' rejected {} (status {})", checker, file.string(), status));
  }
}

}  // namespace

int run_build(const BuildConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Elaborated e = elaborate(config);
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw ConfigError(fmt::format("cannot create '{}': {}", config.output_dir.string(), ec.message()));

    print_summary(e, out);
    const fs::path verilog = config.output_dir / (e.design + ".v");
    const fs::path constraints =
        config.output_dir / fmt::format("{}.{}", e.design, constraint_extension(e.platform.dialect()));
    write_file(verilog, e.verilog.text);
    out << "  wrote " << verilog.string() << "\n";
    write_file(constraints, e.constraints);
    out << "  wrote " << constraints.string() << "\n";
    if (e.map) {
      const fs::path csv = config.output_dir / "csr.csv";
      write_file(csv, soc::emit_csr_map(*e.map));
      out << "  wrote " << csv.string() << "\n";
    }
    run_verilog_check(verilog);

    if (config.simulate || config.trace) {
      const uint64_t cycles = config.simulate.value_or(64);
      std::optional<std::ofstream> vcd;
      const fs::path vcd_path = config.output_dir / (e.design + ".vcd");
      if (config.trace) {
        vcd.emplace(vcd_path, std::ios::binary);
        if (!*vcd) throw ConfigError(fmt::format("cannot write '{}'", vcd_path.string()));
      }
      const SimulationReport r = simulate(e, cycles, vcd ? &*vcd : nullptr);
      std::string detail = fmt::format("{} checks", r.checks);
      if (e.blinky()) {
        detail += fmt::format(", led toggled {} times", r.toggles.size());
        if (r.toggle_period) detail += fmt::format(", toggle period {} cycles", *r.toggle_period);
      }
      out << fmt::format("  simulation: {} cycles, {}: pass\n", r.cycles, detail);
      if (vcd) {
        vcd->close();
        out << "  wrote " << vcd_path.string() << "\n";
      }
    }
    return 0;
  } catch (const Error& ex) {
    err << "error[" << ex.category() << "]: " << ex.what() << "\n";
  } catch (const std::exception& ex) {
    err << "error[internal]: " << ex.what() << "\n";
  }
  return 1;
}

}  // namespace socgen
