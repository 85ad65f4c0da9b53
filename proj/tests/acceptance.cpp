// SPDX-License-Identifier: Apache-2.0
//
// Acceptance runner: one PASS, FAIL or SKIP line per criterion. Exits
// nonzero when any criterion fails.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "soc_harness.hpp"
#include "socgen/analysis.hpp"
#include "socgen/build.hpp"

using namespace socgen;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Skip {
  std::string reason;
};

template <typename... Args>
void require(bool ok, fmt::format_string<Args...> what, Args&&... args) {
  if (!ok) throw Failure(fmt::format(what, std::forward<Args>(args)...));
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("socgen_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

int build_quietly(const BuildConfig& c) {
  std::ostringstream out, err;
  const int status = run_build(c, out, err);
  if (status != 0) throw Failure(fmt::format("build of {} on {} failed: {}", c.design, c.platform, err.str()));
  return status;
}

std::string blinker_fidelity() {
  BuildConfig c;
  const Elaborated e = elaborate(c);
  const Blinker& b = *e.blinky()->blinker;
  require(b.preload == 5'000'000, "preload {}", b.preload);
  require(b.counter.width() == 23, "counter width {}", b.counter.width());
  require(e.verilog.text.find("23'd5000000") != std::string::npos, "preload constant missing from Verilog");

  Blinker scaled(blinker_preload(100, 0.08));
  require(scaled.preload == 4, "scaled preload {}", scaled.preload);
  sim::Simulator s(finalize(scaled), {scaled.led});
  const int ticks = 40;
  const auto expected = oracle::blinker_leds(scaled.preload, ticks);
  std::vector<int> toggles;
  uint64_t previous = s.read(scaled.led);
  for (int t = 1; t <= ticks; ++t) {
    s.tick();
    const uint64_t led = s.read(scaled.led);
    require(led == static_cast<uint64_t>(expected[t - 1]), "led {} at tick {}", led, t);
    if (led != previous) toggles.push_back(t);
    previous = led;
  }
  for (size_t i = 1; i < toggles.size(); ++i) {
    require(toggles[i] - toggles[i - 1] == 5, "toggle spacing {}", toggles[i] - toggles[i - 1]);
  }
  require(toggles.size() >= 4, "only {} toggles", toggles.size());
  return fmt::format("preload 5000000, width 23, period 5 over {} ticks", ticks);
}

std::string width_soundness() {
  const BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::And, BinaryOp::Or,
                          BinaryOp::Xor, BinaryOp::Shl, BinaryOp::Shr, BinaryOp::Eq, BinaryOp::Ne,
                          BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt, BinaryOp::Ge};
  uint64_t evaluations = 0;
  for (int wa = 1; wa <= 5; ++wa) {
    for (int sa = 0; sa < 2; ++sa) {
      const Signal a("a", wa, sa);
      for (const int64_t x : oracle::all_values(wa, sa)) {
        const Shape n = (~Expr(a)).shape(), g = (-Expr(a)).shape();
        require(oracle::in_range(oracle::bitwise_not(x, wa, sa), n.width, n.is_signed), "~ {} escapes", x);
        require(oracle::in_range(-x, g.width, g.is_signed), "- {} escapes", x);
        evaluations += 2;
      }
      for (int wb = 1; wb <= 5; ++wb) {
        for (int sb = 0; sb < 2; ++sb) {
          const Signal b("b", wb, sb), sel("sel");
          Module m;
          std::vector<Signal> outs;
          for (const BinaryOp op : ops) {
            const Expr e = binary(op, a, b);
            outs.emplace_back("y", e.width(), e.shape().is_signed);
            m.comb(outs.back().eq(e));
          }
          const Expr picked = mux(sel, a, b);
          outs.emplace_back("m", picked.width(), picked.shape().is_signed);
          m.comb(outs.back().eq(picked));
          std::vector<Signal> boundary{a, b, sel};
          boundary.insert(boundary.end(), outs.begin(), outs.end());
          sim::Simulator s(finalize(m), boundary);
          for (const int64_t x : oracle::all_values(wa, sa)) {
            for (const int64_t y : oracle::all_values(wb, sb)) {
              s.write(a, static_cast<uint64_t>(x));
              s.write(b, static_cast<uint64_t>(y));
              for (size_t i = 0; i < std::size(ops); ++i) {
                const int64_t want = oracle::binary(ops[i], x, y, wb);
                const Shape shape = outs[i].shape();
                require(oracle::in_range(want, shape.width, shape.is_signed), "{} {},{} exceeds {}{} (widths {}{} {}{})",
                        to_string(ops[i]), x, y, shape.is_signed ? "s" : "u", shape.width, wa, sa, wb, sb);
                const int64_t got = s.read_signed(outs[i]);
                require(got == want, "{} {},{} simulated {} instead of {}", to_string(ops[i]), x, y, got, want);
              }
              for (const int64_t choice : {x, y}) {
                s.write(sel, choice == x);
                const Shape shape = outs.back().shape();
                require(oracle::in_range(choice, shape.width, shape.is_signed), "mux {} exceeds shape", choice);
                require(s.read_signed(outs.back()) == choice, "mux {} simulated wrong", choice);
              }
              evaluations += std::size(ops) + 2;
            }
          }
        }
      }
    }
  }
  return fmt::format("{} evaluations inside their shapes", evaluations);
}

std::string direction_inference() {
  Blinker b(4);
  const LoweredDesign d = lower(finalize(b), {b.led});
  std::map<std::string, PortDirection> ports;
  for (const auto& p : d.io_ports) ports[d.names[p.signal]] = p.direction;
  const std::map<std::string, PortDirection> expected{
      {"led", PortDirection::Out}, {"sys_clk", PortDirection::In}, {"sys_rst", PortDirection::In}};
  require(ports == expected, "blinker ports differ ({} ports)", ports.size());

  Module m;
  Signal a("a", 3), y("y", 3);
  m.comb(y.eq(a + 1));
  const auto io = infer_io_directions(finalize(m), {a, y});
  require(io.size() == 2 && io[0].direction == PortDirection::In && io[1].direction == PortDirection::Out,
          "read-only signal not inferred as input");
  return "{led: out, sys_clk: in, sys_rst: in}, read-only in";
}

std::string multiple_driver() {
  Module m;
  Signal x("x", 4);
  m.comb(x.eq(1));
  m.sync(x.eq(2));
  try {
    lower(finalize(m), {x});
  } catch (const MultipleDriverError& e) {
    require(e.signal() == "x", "diagnostic names '{}'", e.signal());
    const std::string what = e.what();
    require(what.find("MultipleDriver") != std::string::npos && what.find("'x'") != std::string::npos,
            "message '{}'", what);
    return what;
  }
  throw Failure("comb and sync drivers accepted");
}

struct Swap : Module {
  Signal a{"a", 16}, b{"b", 16}, ia{"ia", 16}, ib{"ib", 16}, load{"load"};
  Swap() { sync(If(load, {a.eq(ia), b.eq(ib)}).Else({a.eq(b), b.eq(a)})); }
};

std::string simulator_atomicity() {
  std::mt19937 rng(2024);
  for (int i = 0; i < 100; ++i) {
    Swap sw;
    sim::Simulator s(finalize(sw), {sw.ia, sw.ib, sw.load, sw.a, sw.b});
    const uint64_t x = rng() & 0xffff, y = rng() & 0xffff;
    s.write(sw.ia, x);
    s.write(sw.ib, y);
    s.write(sw.load, 1);
    s.tick();
    s.write(sw.load, 0);
    require(s.read(sw.a) == x && s.read(sw.b) == y, "load failed for pair {}", i);
    s.tick();
    require(s.read(sw.a) == y && s.read(sw.b) == x, "swap of {:#x},{:#x} not atomic", x, y);
  }
  return "100 random pairs swapped in one tick";
}

std::string determinism() {
  int files = 0;
  for (const std::string design : builtin_designs()) {
    for (const auto& board : builtin_platforms()) {
      BuildConfig c;
      c.design = design;
      c.platform = board;
      c.output_dir = scratch("det_a");
      build_quietly(c);
      BuildConfig d = c;
      d.output_dir = scratch("det_b");
      build_quietly(d);
      for (const auto& entry : fs::directory_iterator(c.output_dir)) {
        const fs::path other = d.output_dir / entry.path().filename();
        require(fs::exists(other), "{} missing from second build", other.string());
        require(fixtures::read_file(entry.path().string()) == fixtures::read_file(other.string()), "{} differs",
                entry.path().filename().string());
        ++files;
      }
    }
  }
  return fmt::format("{} files identical across builds", files);
}

std::string constraint_emission() {
  for (const Dialect dialect : {Dialect::Xdc, Dialect::Lpf}) {
    const std::string golden =
        fixtures::read_file(fmt::format("{}/board_pins.{}", SOCGEN_GOLDEN_DIR, constraint_extension(dialect)));
    require(!golden.empty(), "golden file missing");
    require(fixtures::board_pins_constraints(dialect) == golden, "{} output differs from golden",
            constraint_extension(dialect));
  }
  return "xdc and lpf match golden files";
}

std::string csr_round_trip() {
  int checks = 0;
  for (const auto& board : builtin_platforms()) {
    fixtures::SocHarness h(soc::SocConfig{}, board);
    std::mt19937 rng(8);
    for (const auto& placed : h.soc->registers) {
      require(placed.address % 4 == 0, "{} unaligned", placed.reg.name);
      require(placed.address >= soc::kCsrOrigin && placed.address + 4u * placed.reg.words() <=
                                                      uint64_t{soc::kCsrOrigin} + soc::kCsrLength,
              "{} outside the CSR window", placed.reg.name);
      if (placed.reg.mode != soc::CsrMode::ReadWrite) continue;
      for (int trial = 0; trial < 4; ++trial) {
        const uint32_t value = rng();
        const uint64_t mask = placed.reg.size >= 32 ? 0xFFFFFFFFu : (uint64_t{1} << placed.reg.size) - 1;
        h.bus->write(placed.address, value);
        const uint32_t got = h.bus->read(placed.address);
        require(got == (value & mask), "{}_{} read {:#x} after writing {:#x}", placed.peripheral, placed.reg.name,
                got, value);
        ++checks;
      }
    }
    const soc::SocMap parsed = soc::parse_csr_map(soc::emit_csr_map(h.soc->map));
    require(parsed == h.soc->map, "csr.csv does not parse back to the same map");
    for (const auto& r : parsed.registers) {
      require(r.address % 4 == 0 && r.address >= soc::kCsrOrigin &&
                  uint64_t{r.address} + 4u * r.words <= uint64_t{soc::kCsrOrigin} + soc::kCsrLength,
              "csv register {} misplaced", r.name);
    }
  }
  return fmt::format("{} bus round trips, csv parses back", checks);
}

std::string rom_boot() {
  soc::SocConfig c;
  c.with_timer = c.with_uart = c.with_gpio = false;
  c.rom_size = 0x8000;
  for (int i = 0; i < 64; ++i) c.rom_init.push_back(static_cast<uint8_t>(0xC3 ^ (i * 29)));
  fixtures::SocHarness h(c);
  const auto expected = oracle::le_words(c.rom_init);
  for (uint32_t w = 0; w < 16; ++w) {
    const uint32_t got = h.bus->read(soc::kRomOrigin + 4 * w);
    require(got == expected[w], "word {} read {:#010x}, expected {:#010x}", w, got, expected[w]);
  }
  return "16 little-endian words from a 0x8000-byte ROM";
}

std::string timer_periodicity() {
  for (int64_t reload = 0; reload <= 8; ++reload) {
    Module top;
    auto timer = std::make_shared<soc::Timer>(8);
    top.add_submodule("timer", timer);
    sim::Simulator s(finalize(top), {timer->load.signal, timer->reload.signal, timer->en.signal,
                                     timer->update_value.re, timer->value.signal});
    const int64_t load = 6;
    s.write(timer->load.signal, load);
    s.write(timer->reload.signal, reload);
    s.tick();
    s.write(timer->en.signal, 1);
    std::vector<int64_t> seen;
    for (int t = 0; t < 48; ++t) {
      s.tick();
      seen.push_back(static_cast<int64_t>(s.read(timer->counter)));
    }
    require(seen == oracle::timer_values(load, reload, 48), "reload {} diverges from the software counter", reload);
    const std::vector<int64_t> tail(seen.begin() + load + 1, seen.end());
    require(oracle::period_of(tail) == static_cast<size_t>(reload + 1), "reload {} has period {}", reload,
            oracle::period_of(tail));
  }
  return "periods 1..9 for reload 0..8";
}

// Feeds `words` into a 16->8->16 chain with random stalls; an output held
// under backpressure must not change.
std::vector<uint64_t> convert_chain(const std::vector<uint64_t>& words, uint32_t seed) {
  Module top;
  auto down = std::make_shared<soc::StreamConverter>(16, 8, "down");
  auto up = std::make_shared<soc::StreamConverter>(8, 16, "up");
  top.add_submodule("down", down);
  top.add_submodule("up", up);
  top.comb({up->sink.valid.eq(down->source.valid), up->sink.data.eq(down->source.data),
            down->source.ready.eq(up->sink.ready)});
  const auto& in = down->sink;
  const auto& out = up->source;
  sim::Simulator s(finalize(top), {in.valid, in.data, in.ready, out.valid, out.data, out.ready});
  std::mt19937 rng(seed);
  std::vector<uint64_t> got;
  size_t next = 0;
  bool offering = false;
  std::optional<uint64_t> stalled;
  for (int cycle = 0; cycle < 20 * static_cast<int>(words.size()) && got.size() < words.size(); ++cycle) {
    if (!offering && next < words.size() && rng() % 4) offering = true;
    s.write(in.valid, offering);
    s.write(in.data, offering ? words[next] : 0);
    s.write(out.ready, rng() % 3 != 0);
    const bool valid = s.read(out.valid);
    if (stalled) require(valid && s.read(out.data) == *stalled, "held output changed at cycle {}", cycle);
    stalled.reset();
    if (valid && s.read(out.ready)) {
      got.push_back(s.read(out.data));
    } else if (valid) {
      stalled = s.read(out.data);
    }
    if (offering && s.read(in.ready)) {
      ++next;
      offering = false;
    }
    s.tick();
  }
  return got;
}

std::string cdc_and_conversion() {
  Signal src("src");
  soc::Synchronizer sync(src);
  sim::Simulator s(finalize(sync), {src, sync.output});
  s.tick(3);
  require(s.read(sync.output) == 0, "synchronizer output set before the step");
  s.write(src, 1);
  int latency = 0;
  while (!s.read(sync.output) && latency < 10) {
    s.tick();
    ++latency;
  }
  require(latency == 2, "synchronizer latency {}", latency);

  std::mt19937_64 rng(1000);
  std::vector<uint64_t> words(1000);
  for (auto& w : words) w = rng() & 0xffff;
  const auto got = convert_chain(words, 77);
  require(got.size() == words.size(), "{} of {} words came out", got.size(), words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    require(got[i] == words[i], "word {} became {:#x}, sent {:#x}", i, got[i], words[i]);
  }
  return "latency 2, 1000 words through 16->8->16 unchanged";
}

std::string external_check() {
  const char* checker = std::getenv("SOCGEN_VERILOG_CHECK");
  if (!checker || !*checker) throw Skip{"SOCGEN_VERILOG_CHECK is not set"};
  int files = 0;
  for (const std::string design : builtin_designs()) {
    for (const auto& board : builtin_platforms()) {
      BuildConfig c;
      c.design = design;
      c.platform = board;
      c.output_dir = scratch("check_" + design + "_" + board);
      build_quietly(c);  // runs the checker on the emitted Verilog
      ++files;
    }
  }
  return fmt::format("{} emitted files accepted by {}", files, checker);
}

struct Criterion {
  std::string name;
  std::function<std::string()> check;
  std::optional<std::chrono::milliseconds> budget;
};

}  // namespace

int main() {
  using namespace std::chrono;
  const std::vector<Criterion> criteria{
      {"blinker fidelity", blinker_fidelity, seconds(1)},
      {"width soundness", width_soundness, minutes(2)},
      {"direction inference", direction_inference, {}},
      {"multiple-driver rejection", multiple_driver, {}},
      {"simulator atomicity", simulator_atomicity, {}},
      {"determinism", determinism, {}},
      {"constraint emission", constraint_emission, {}},
      {"csr round trip", csr_round_trip, {}},
      {"rom boot path", rom_boot, {}},
      {"timer periodicity", timer_periodicity, {}},
      {"cdc and width conversion", cdc_and_conversion, {}},
      {"external verilog check", external_check, {}},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = steady_clock::now();
    std::string status = "PASS", detail;
    try {
      detail = c.check();
      const auto elapsed = duration_cast<milliseconds>(steady_clock::now() - start);
      if (c.budget && elapsed > *c.budget) {
        status = "FAIL";
        detail = fmt::format("took {} ms, budget {} ms", elapsed.count(), c.budget->count());
      }
    } catch (const Skip& s) {
      status = "SKIP";
      detail = s.reason;
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = e.what();
    }
    if (status == "FAIL") ++failed;
    const auto elapsed = duration_cast<milliseconds>(steady_clock::now() - start);
    std::cout << fmt::format("{:>2} {:<4} {}: {} ({} ms)", i + 1, status, c.name, detail, elapsed.count())
              << std::endl;
  }
  std::cout << (failed ? fmt::format("{} criteria failed", failed) : std::string("all criteria met")) << std::endl;
  return failed ? 1 : 0;
}
