// SPDX-License-Identifier: Apache-2.0
#include "socgen/soc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace socgen::soc {

namespace {

Expr any_of(const std::vector<Expr>& terms) {
  if (terms.empty()) return Const(0);
  Expr acc = terms[0];
  for (size_t i = 1; i < terms.size(); ++i) acc = acc | terms[i];
  return acc;
}

}  // namespace

const char* to_string(CsrMode mode) { return mode == CsrMode::ReadWrite ? "rw" : "ro"; }

CsrRegister csr_storage(const std::string& prefix, const std::string& name, int size, int64_t reset) {
  if (size < 1) throw ConstructionError(fmt::format("csr register '{}' needs a positive size", name));
  const std::string base = prefix.empty() ? name : prefix + "_" + name;
  return {name, size, CsrMode::ReadWrite, Signal(base, size, false, reset), Signal(base + "_re"),
          Signal(base + "_rd")};
}

CsrRegister csr_status(const std::string& name, const Signal& status) {
  return {name, status.width(), CsrMode::ReadOnly, status, Signal(status.name_hint() + "_re"),
          Signal(status.name_hint() + "_rd")};
}

SystemBus::SystemBus(const std::string& prefix)
    : adr(prefix + "_adr", 30),
      dat_w(prefix + "_dat_w", 32),
      dat_r(prefix + "_dat_r", 32),
      sel(prefix + "_sel", 4),
      we(prefix + "_we"),
      cyc(prefix + "_cyc"),
      stb(prefix + "_stb"),
      ack(prefix + "_ack") {}

std::vector<Signal> SystemBus::signals() const { return {adr, dat_w, sel, we, cyc, stb, dat_r, ack}; }

CsrBus::CsrBus(const std::string& prefix)
    : adr(prefix + "_adr", kCsrAddressWidth),
      we(prefix + "_we"),
      re(prefix + "_re"),
      dat_w(prefix + "_dat_w", 32),
      dat_r(prefix + "_dat_r", 32) {}

CsrBank::CsrBank(std::vector<CsrRegister> registers, int base_word, const CsrBus& bus, int data_width)
    : dat_r(fmt::format("csrbank{}_dat_r", base_word), data_width) {
  if (data_width < 1 || data_width > bus.dat_w.width()) {
    throw ConstructionError(fmt::format("csr data width {} does not fit the {}-bit bus", data_width,
                                        bus.dat_w.width()));
  }
  std::set<std::string> names;
  int word = base_word;
  for (auto& r : registers) {
    if (!names.insert(r.name).second) throw ConstructionError(fmt::format("duplicate csr register '{}'", r.name));
    placements_.push_back({r, word});
    word += r.words(data_width);
  }
  words_ = word - base_word;
  if (word > (1 << bus.adr.width())) {
    throw ConstructionError(fmt::format("csr bank at word {} runs past the csr address space", base_word));
  }

  StatementList body{dat_r.eq(0)};
  std::vector<CaseArm> arms;
  for (const auto& p : placements_) {
    body.push_back(p.reg.re.eq(0));
    body.push_back(p.reg.rd.eq(0));
    const int n = p.reg.words(data_width);
    for (int j = 0; j < n; ++j) {
      const int lo = (n - 1 - j) * data_width;
      const int hi = std::min(p.reg.size, lo + data_width);
      const Expr chunk = p.reg.signal.slice(lo, hi);
      const bool last = j == n - 1;
      StatementList arm{dat_r.eq(chunk)};
      StatementList on_write;
      if (p.reg.mode == CsrMode::ReadWrite) {
        on_write.push_back(chunk.eq(bus.dat_w.slice(0, hi - lo)));
        if (last) on_write.push_back(p.reg.re.eq(1));
      }
      if (!on_write.empty()) arm.push_back(If(bus.we, std::move(on_write)));
      if (last) arm.push_back(If(bus.re, {p.reg.rd.eq(1)}));
      arms.push_back({p.word + j, std::move(arm)});
    }
  }
  if (!arms.empty()) body.push_back(Case(bus.adr, std::move(arms)));
  sync(std::move(body));
}

CsrBridge::CsrBridge(const SystemBus& slave, const CsrBus& csr) {
  const Expr request = slave.cyc & slave.stb & ~slave.ack;
  comb({csr.adr.eq(slave.adr.slice(0, csr.adr.width())), csr.dat_w.eq(slave.dat_w),
        csr.we.eq(request & slave.we), csr.re.eq(request & ~slave.we), slave.dat_r.eq(csr.dat_r)});
  sync(slave.ack.eq(request));
}

void check_regions(const std::vector<MemoryRegion>& regions) {
  for (size_t i = 0; i < regions.size(); ++i) {
    const auto& a = regions[i];
    if (a.origin % 4 || a.length % 4) {
      throw ConstructionError(fmt::format("region '{}' is not word-aligned", a.name));
    }
    if (uint64_t{a.origin} + a.length > (uint64_t{1} << 32)) {
      throw ConstructionError(fmt::format("region '{}' runs past the 32-bit address space", a.name));
    }
    for (size_t j = 0; j < i; ++j) {
      const auto& b = regions[j];
      const uint64_t a_end = uint64_t{a.origin} + a.length;
      const uint64_t b_end = uint64_t{b.origin} + b.length;
      if (a.origin < b_end && b.origin < a_end && a.length && b.length) {
        throw OverlapError(fmt::format("region '{}' [0x{:08x}, 0x{:08x}) overlaps '{}' [0x{:08x}, 0x{:08x})", a.name,
                                       a.origin, a_end, b.name, b.origin, b_end));
      }
    }
  }
}

BusDecoder::BusDecoder(const SystemBus& master, std::vector<std::pair<MemoryRegion, SystemBus>> slaves) {
  std::vector<MemoryRegion> regions;
  for (const auto& [r, _] : slaves) regions.push_back(r);
  check_regions(regions);

  std::vector<Signal> selects;
  std::vector<Expr> acks;
  for (const auto& [r, s] : slaves) {
    const uint64_t lo = r.origin / 4;
    const uint64_t hi = (uint64_t{r.origin} + r.length) / 4;
    std::vector<Expr> bounds;
    if (lo > 0) bounds.push_back(master.adr >= Const(static_cast<int64_t>(lo)));
    if (hi < (uint64_t{1} << master.adr.width())) bounds.push_back(master.adr < Const(static_cast<int64_t>(hi)));
    Signal sel(r.name + "_sel");
    Expr hit = bounds.empty() ? Const(1) : bounds[0];
    if (bounds.size() == 2) hit = bounds[0] & bounds[1];
    comb({sel.eq(hit), s.adr.eq(master.adr), s.dat_w.eq(master.dat_w), s.sel.eq(master.sel), s.we.eq(master.we),
          s.cyc.eq(master.cyc & sel), s.stb.eq(master.stb)});
    selects.push_back(sel);
    acks.push_back(s.ack);
  }

  Signal unmapped("bus_unmapped");
  Signal err_ack("bus_err_ack");
  comb(unmapped.eq(~any_of({selects.begin(), selects.end()})));
  sync(err_ack.eq(master.cyc & master.stb & unmapped & ~err_ack));
  acks.push_back(err_ack);

  Expr data = Const(0xFFFFFFFF, {32, false});
  for (size_t i = slaves.size(); i-- > 0;) data = mux(selects[i], slaves[i].second.dat_r, data);
  comb({master.ack.eq(any_of(acks)), master.dat_r.eq(data)});
}

std::vector<uint64_t> rom_words(const std::vector<uint8_t>& init, uint32_t size) {
  if (init.size() > size) {
    throw RomOverflowError(fmt::format("rom init of {} bytes exceeds the rom size of {} bytes", init.size(), size));
  }
  std::vector<uint64_t> words((init.size() + 3) / 4, 0);
  for (size_t i = 0; i < init.size(); ++i) words[i / 4] |= uint64_t{init[i]} << (8 * (i % 4));
  return words;
}

IntegratedRom::IntegratedRom(const std::vector<uint8_t>& init_, uint32_t size) : size(size), init(init_) {
  if (size == 0 || size % 4) throw ConstructionError(fmt::format("rom size {} is not a positive multiple of 4", size));
  auto words = rom_words(init, size);
  const int depth = static_cast<int>(size / 4);
  const int aw = bits_for(depth - 1);
  Signal adr("rom_adr", aw);
  Signal dat("rom_dat", 32);
  comb({adr.eq(bus.adr.slice(0, aw)), bus.dat_r.eq(dat)});
  special(Memory{"rom", 32, depth, std::move(words), {MemoryPort{adr, dat, std::nullopt, std::nullopt}}});
  sync(bus.ack.eq(bus.cyc & bus.stb & ~bus.ack));
}

Synchronizer::Synchronizer(const Expr& input, const std::string& domain, int stages, int64_t reset) {
  if (stages < 2) throw ConstructionError(fmt::format("a synchronizer needs at least 2 stages, got {}", stages));
  const Shape shape = input.shape();
  StatementList body;
  for (int i = 0; i < stages; ++i) {
    chain.emplace_back(fmt::format("multireg{}", i), shape.width, shape.is_signed, reset);
    body.push_back(chain[i].eq(i == 0 ? input : Expr(chain[i - 1])));
  }
  output = chain.back();
  sync(domain, std::move(body));
}

StreamEndpoint::StreamEndpoint(const std::string& prefix, int width)
    : valid(prefix + "_valid"), ready(prefix + "_ready"), data(prefix + "_data", width) {}

StreamConverter::StreamConverter(int sink_width, int source_width, const std::string& prefix)
    : sink(prefix + "_sink", sink_width), source(prefix + "_source", source_width) {
  const int k = sink_width;
  const int m = source_width;
  if (k % m && m % k) throw ConstructionError(fmt::format("width ratio {}:{} is not integral", k, m));
  if (k == m) {
    ratio = 1;
    comb({source.valid.eq(sink.valid), source.data.eq(sink.data), sink.ready.eq(source.ready)});
    return;
  }
  if (k > m) {
    ratio = k / m;
    Signal chunk(prefix + "_chunk", bits_for(ratio - 1));
    const Expr last = chunk == ratio - 1;
    std::vector<CaseArm> arms;
    for (int i = 0; i < ratio; ++i) arms.push_back({i, {source.data.eq(sink.data.slice(i * m, (i + 1) * m))}});
    comb({source.valid.eq(sink.valid), sink.ready.eq(source.ready & last), Case(chunk, std::move(arms))});
    sync(If(source.valid & source.ready, {If(last, {chunk.eq(0)}).Else({chunk.eq(chunk + 1)})}));
    return;
  }
  ratio = m / k;
  Signal chunk(prefix + "_chunk", bits_for(ratio - 1));
  Signal full(prefix + "_full");
  Signal buffer(prefix + "_buffer", m);
  comb({source.valid.eq(full), source.data.eq(buffer), sink.ready.eq(~full | source.ready)});
  std::vector<CaseArm> arms;
  for (int i = 0; i < ratio; ++i) arms.push_back({i, {buffer.slice(i * k, (i + 1) * k).eq(sink.data)}});
  sync({If(full & source.ready, {full.eq(0)}),
        If(sink.valid & sink.ready, {Case(chunk, std::move(arms)),
                                     If(chunk == ratio - 1, {chunk.eq(0), full.eq(1)}).Else({chunk.eq(chunk + 1)})})});
}

Timer::Timer(int width, const std::string& name)
    : Peripheral(name),
      load(csr_storage(name, "load", width)),
      reload(csr_storage(name, "reload", width)),
      en(csr_storage(name, "en", 1)),
      update_value(csr_storage(name, "update_value", 1)),
      value(csr_status("value", Signal(name + "_value", width))),
      counter(name + "_counter", width) {
  csrs = {load, reload, en, update_value, value};
  sync({If(en.signal, {If(counter == 0, {counter.eq(reload.signal)}).Else({counter.eq(counter - 1)})})
            .Else({counter.eq(load.signal)}),
        If(update_value.re, {value.signal.eq(counter)})});
}

GpioOut::GpioOut(std::vector<Signal> pads_, const std::string& name) : Peripheral(name), pads(std::move(pads_)) {
  if (pads.empty()) throw ConstructionError(fmt::format("gpio '{}' has no pads", name));
  out = csr_storage(name, "out", static_cast<int>(pads.size()));
  csrs = {out};
  for (size_t i = 0; i < pads.size(); ++i) comb(pads[i].eq(out.signal[static_cast<int>(i)]));
}

GpioIn::GpioIn(std::vector<Signal> pads_, const std::string& name) : Peripheral(name), pads(std::move(pads_)) {
  if (pads.empty()) throw ConstructionError(fmt::format("gpio '{}' has no pads", name));
  auto sync = std::make_shared<Synchronizer>(cat({pads.begin(), pads.end()}));
  submodule("sync", sync);
  in = csr_status("in", sync->output);
  csrs = {in};
}

Uart::Uart(Signal tx_, Signal rx_, int64_t divisor_reset, const std::string& name)
    : Peripheral(name),
      rxtx(csr_storage(name, "rxtx", 8)),
      txfull(csr_status("txfull", Signal(name + "_txfull"))),
      rxdata(csr_status("rxdata", Signal(name + "_rxdata", 8))),
      rxempty(csr_status("rxempty", Signal(name + "_rxempty", 1, false, 1))),
      divisor(csr_storage(name, "divisor", 16, divisor_reset)),
      tx(std::move(tx_)),
      rx(std::move(rx_)) {
  if (divisor_reset < 1) throw ConstructionError(fmt::format("uart divisor must be at least 1, got {}", divisor_reset));
  csrs = {rxtx, txfull, rxdata, rxempty, divisor};
  const Signal& d = divisor.signal;

  // Transmitter: start bit, eight data bits LSB first, stop bit.
  const Signal& tx_busy = txfull.signal;
  Signal tx_shift(name + "_tx_shift", 10);
  Signal tx_bits(name + "_tx_bits", 4);
  Signal tx_phase(name + "_tx_phase", 16);
  comb(tx.eq(mux(tx_busy, tx_shift[0], 1)));
  sync(If(tx_busy, {If(tx_phase == 0, {tx_phase.eq(d - 1), tx_shift.eq(tx_shift >> 1), tx_bits.eq(tx_bits - 1),
                                        If(tx_bits == 1, {tx_busy.eq(0)})})
                        .Else({tx_phase.eq(tx_phase - 1)})})
           .Elif(rxtx.re, {tx_shift.eq(cat({Const(0, {1, false}), rxtx.signal, Const(1, {1, false})})),
                           tx_bits.eq(10), tx_phase.eq(d - 1), tx_busy.eq(1)}));

  // Receiver: samples mid-bit after a two-register synchronizer.
  Signal rx_meta(name + "_rx_meta", 1, false, 1);
  Signal rx_sync(name + "_rx_sync", 1, false, 1);
  Signal rx_busy(name + "_rx_busy");
  Signal rx_bits(name + "_rx_bits", 4);
  Signal rx_phase(name + "_rx_phase", 18);
  Signal rx_shift(name + "_rx_shift", 8);
  sync({rx_meta.eq(rx), rx_sync.eq(rx_meta), If(rxdata.rd, {rxempty.signal.eq(1)}),
        If(rx_busy, {If(rx_phase == 0, {rx_phase.eq(d - 1),
                                        If(rx_bits == 8, {rx_busy.eq(0), rxdata.signal.eq(rx_shift),
                                                          rxempty.signal.eq(0)})
                                            .Else({rx_shift.eq(cat({rx_shift.slice(1, 8), rx_sync})),
                                                   rx_bits.eq(rx_bits + 1)})})
                         .Else({rx_phase.eq(rx_phase - 1)})})
            .Elif(rx_sync == 0, {rx_busy.eq(1), rx_bits.eq(0), rx_phase.eq(((d - 1) >> 1) + d - 1)})});
}

namespace {

Signal request_clock(Platform& p) {
  if (p.default_clk_name().empty()) {
    throw PlatformError(fmt::format("platform '{}' has no default clock", p.name()));
  }
  return p.request(p.default_clk_name()).signal();
}

}  // namespace

Crg::Crg(Platform& platform) : clk_pad(request_clock(platform)) {
  cd_sys = clock_domain(ClockDomain("sys"));
  comb(cd_sys.clk.eq(clk_pad));
  platform.add_period_constraint(clk_pad, platform.default_clk_period());
  if (!platform.reset_name.empty()) {
    rst_pad = platform.request(platform.reset_name).signal();
    comb(cd_sys.rst.eq(~*rst_pad));
  }
}

std::vector<Signal> Crg::pads() const {
  std::vector<Signal> out{clk_pad};
  if (rst_pad) out.push_back(*rst_pad);
  return out;
}

std::string emit_csr_map(const SocMap& map) {
  std::string out;
  for (const auto& r : map.regions) {
    out += fmt::format("memory_region,{},0x{:08x},{},{}\n", r.name, r.origin, r.length, r.kind);
  }
  for (const auto& b : map.bases) out += fmt::format("csr_base,{},0x{:08x},,\n", b.name, b.address);
  for (const auto& r : map.registers) {
    out += fmt::format("csr_register,{},0x{:08x},{},{}\n", r.name, r.address, r.words, to_string(r.mode));
  }
  return out;
}

namespace {

template <typename T>
T parse_number(const std::string& text, int base, int line) {
  std::string_view digits = text;
  if (base == 16) {
    if (digits.substr(0, 2) != "0x") throw ConstructionError(fmt::format("csr map line {}: expected 0x prefix", line));
    digits.remove_prefix(2);
  }
  T value{};
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (ec != std::errc() || end != digits.data() + digits.size() || digits.empty()) {
    throw ConstructionError(fmt::format("csr map line {}: bad number '{}'", line, text));
  }
  return value;
}

}  // namespace

SocMap parse_csr_map(const std::string& text) {
  SocMap map;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream fields(line);
    while (std::getline(fields, field, ',')) f.push_back(field);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 5) throw ConstructionError(fmt::format("csr map line {}: expected 5 fields", number));
    if (f[0] == "memory_region") {
      map.regions.push_back({f[1], parse_number<uint32_t>(f[2], 16, number), parse_number<uint32_t>(f[3], 10, number),
                             f[4]});
    } else if (f[0] == "csr_base") {
      if (!f[3].empty() || !f[4].empty()) throw ConstructionError(fmt::format("csr map line {}: trailing data", number));
      map.bases.push_back({f[1], parse_number<uint32_t>(f[2], 16, number)});
    } else if (f[0] == "csr_register") {
      CsrMode mode;
      if (f[4] == "rw") {
        mode = CsrMode::ReadWrite;
      } else if (f[4] == "ro") {
        mode = CsrMode::ReadOnly;
      } else {
        throw ConstructionError(fmt::format("csr map line {}: unknown mode '{}'", number, f[4]));
      }
      map.registers.push_back({f[1], parse_number<uint32_t>(f[2], 16, number), parse_number<int>(f[3], 10, number),
                               mode});
    } else {
      throw ConstructionError(fmt::format("csr map line {}: unknown record '{}'", number, f[0]));
    }
  }
  return map;
}

namespace {

std::vector<Signal> request_all(Platform& p, const std::string& name) {
  std::vector<Signal> pads;
  if (!p.has(name)) return pads;
  const auto count = std::count_if(p.io().begin(), p.io().end(), [&](const IoEntry& e) { return e.name == name; });
  for (long i = 0; i < count; ++i) pads.push_back(p.request(name).signal());
  return pads;
}

}  // namespace

Soc::Soc(Platform& platform, const SocConfig& config) {
  crg = submodule("crg", std::make_shared<Crg>(platform));
  boundary_ = crg->pads();

  std::vector<std::pair<MemoryRegion, SystemBus>> slaves;
  if (config.rom_size > 0) {
    rom = submodule("rom", std::make_shared<IntegratedRom>(config.rom_init, config.rom_size));
    map.regions.push_back({"rom", kRomOrigin, config.rom_size, "rom"});
    slaves.emplace_back(map.regions.back(), rom->bus);
  } else if (!config.rom_init.empty()) {
    throw RomOverflowError(fmt::format("rom init of {} bytes given without a rom", config.rom_init.size()));
  }

  std::vector<std::shared_ptr<Peripheral>> peripherals;
  if (config.with_timer) peripherals.push_back(timer = std::make_shared<Timer>());
  if (config.with_uart) {
    if (!(config.sys_clk_freq > 0) || config.uart_baud < 1) throw ConstructionError("uart needs a positive clock and baud rate");
    const Resource serial = platform.request("serial");
    const int64_t divisor =
        std::clamp<int64_t>(std::llround(config.sys_clk_freq / static_cast<double>(config.uart_baud)), 1, 0xFFFF);
    peripherals.push_back(uart = std::make_shared<Uart>(serial["tx"], serial["rx"], divisor));
    boundary_.push_back(uart->tx);
    boundary_.push_back(uart->rx);
  }
  if (config.with_gpio) {
    auto led_pads = request_all(platform, "user_led");
    if (!led_pads.empty()) peripherals.push_back(leds = std::make_shared<GpioOut>(led_pads));
    auto sw_pads = request_all(platform, "user_sw");
    if (!sw_pads.empty()) peripherals.push_back(switches = std::make_shared<GpioIn>(sw_pads));
    boundary_.insert(boundary_.end(), led_pads.begin(), led_pads.end());
    boundary_.insert(boundary_.end(), sw_pads.begin(), sw_pads.end());
  }

  if (!peripherals.empty()) {
    if (peripherals.size() * kCsrStride > kCsrLength) throw OverlapError("too many peripherals for the csr window");
    const CsrBus csr("csr");
    const SystemBus csr_slave("csr_bus");
    map.regions.push_back({"csr", kCsrOrigin, kCsrLength, "csr"});
    slaves.emplace_back(map.regions.back(), csr_slave);
    submodule("csr_bridge", std::make_shared<CsrBridge>(csr_slave, csr));
    std::vector<Expr> bank_data;
    for (size_t i = 0; i < peripherals.size(); ++i) {
      const auto& periph = peripherals[i];
      const int base_word = static_cast<int>(i * kCsrStride / 4);
      auto bank = std::make_shared<CsrBank>(periph->csrs, base_word, csr);
      if (bank->words() > static_cast<int>(kCsrStride / 4)) {
        throw OverlapError(fmt::format("csr registers of '{}' exceed {} bytes", periph->name, kCsrStride));
      }
      submodule(periph->name, periph);
      submodule(periph->name + "_csr", bank);
      bank_data.push_back(bank->dat_r);
      map.bases.push_back({periph->name, kCsrOrigin + static_cast<uint32_t>(i) * kCsrStride});
      for (const auto& p : bank->placements()) {
        const uint32_t address = kCsrOrigin + static_cast<uint32_t>(p.word) * 4;
        map.registers.push_back({periph->name + "_" + p.reg.name, address, p.reg.words(), p.reg.mode});
        registers.push_back({periph->name, p.reg, address});
      }
    }
    comb(csr.dat_r.eq(any_of(bank_data)));
  }

  check_regions(map.regions);
  submodule("decoder", std::make_shared<BusDecoder>(bus, slaves));
  const auto bus_signals = bus.signals();
  boundary_.insert(boundary_.end(), bus_signals.begin(), bus_signals.end());
}

BusMaster::BusMaster(sim::Simulator& sim, SystemBus bus, int timeout)
    : sim_(sim), bus_(std::move(bus)), timeout_(timeout) {}

uint32_t BusMaster::read(uint32_t address) { return transfer(address, false, 0); }

void BusMaster::write(uint32_t address, uint32_t data) { transfer(address, true, data); }

uint32_t BusMaster::transfer(uint32_t address, bool we, uint32_t data) {
  if (address % 4) throw SimulationError(fmt::format("unaligned bus access at 0x{:08x}", address));
  sim_.write(bus_.adr, address >> 2);
  sim_.write(bus_.dat_w, data);
  sim_.write(bus_.sel, 0xF);
  sim_.write(bus_.we, we);
  sim_.write(bus_.cyc, 1);
  sim_.write(bus_.stb, 1);
  for (int i = 0; !sim_.read(bus_.ack); ++i) {
    if (i == timeout_) {
      throw SimulationError(
          fmt::format("bus access at 0x{:08x} not acknowledged within {} cycles", address, timeout_));
    }
    sim_.tick();
  }
  const auto result = static_cast<uint32_t>(sim_.read(bus_.dat_r));
  sim_.tick();
  sim_.write(bus_.cyc, 0);
  sim_.write(bus_.stb, 0);
  sim_.write(bus_.we, 0);
  return result;
}

}  // namespace socgen::soc
