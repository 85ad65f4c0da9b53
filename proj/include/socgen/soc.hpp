// SPDX-License-Identifier: Apache-2.0
//
// SoC integration: CSR registers and banks, a memory-mapped system bus with
// decoder and CSR bridge, CDC and stream width conversion, timer, GPIO, UART
// and integrated ROM peripherals, the SoC builder and the csr.csv map.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "socgen/fhdl.hpp"
#include "socgen/platform.hpp"
#include "socgen/sim.hpp"

namespace socgen::soc {

constexpr uint32_t kRomOrigin = 0x00000000;
constexpr uint32_t kCsrOrigin = 0x82000000;
constexpr uint32_t kCsrLength = 0x10000;
/// Bytes of CSR space per peripheral.
constexpr uint32_t kCsrStride = 0x800;
constexpr int kCsrAddressWidth = 14;  // word address inside the CSR window

enum class CsrMode { ReadWrite, ReadOnly };
const char* to_string(CsrMode mode);

struct CsrRegister {
  std::string name;
  int size;
  CsrMode mode;
  /// Storage register for read-write, the sampled signal for read-only.
  Signal signal;
  /// Pulses the cycle after the last word is written.
  Signal re;
  /// Pulses the cycle after the last word is read.
  Signal rd;

  int words(int data_width = 32) const { return (size + data_width - 1) / data_width; }
};

/// Read-write register; `prefix` is prepended to the signal names.
CsrRegister csr_storage(const std::string& prefix, const std::string& name, int size, int64_t reset = 0);
/// Read-only register exposing `status`.
CsrRegister csr_status(const std::string& name, const Signal& status);

struct SystemBus {
  explicit SystemBus(const std::string& prefix = "bus");

  Signal adr;  // word address
  Signal dat_w;
  Signal dat_r;
  Signal sel;
  Signal we;
  Signal cyc;
  Signal stb;
  Signal ack;

  /// Master-driven signals first, then dat_r and ack.
  std::vector<Signal> signals() const;
};

struct CsrBus {
  explicit CsrBus(const std::string& prefix = "csr");

  Signal adr;
  Signal we;
  Signal re;
  Signal dat_w;
  Signal dat_r;
};

/// Register bank at `base_word` of the CSR window. The most significant
/// chunk of a multi-word register sits at the lowest address; `dat_r` is
/// registered and zero when no register of the bank is addressed.
class CsrBank : public Module {
 public:
  CsrBank(std::vector<CsrRegister> registers, int base_word, const CsrBus& bus, int data_width = 32);

  struct Placement {
    CsrRegister reg;
    int word;  // first word inside the CSR window
  };

  Signal dat_r;
  const std::vector<Placement>& placements() const { return placements_; }
  int words() const { return words_; }

 private:
  std::vector<Placement> placements_;
  int words_ = 0;
};

/// One bus transaction becomes one CSR word access; ack follows one cycle
/// later. Byte selects are ignored.
class CsrBridge : public Module {
 public:
  CsrBridge(const SystemBus& slave, const CsrBus& csr);
};

struct MemoryRegion {
  std::string name;
  uint32_t origin;
  uint32_t length;
  std::string kind;  // rom, ram or csr

  friend bool operator==(const MemoryRegion&, const MemoryRegion&) = default;
};

/// Throws OverlapError for intersecting regions and ConstructionError for
/// misaligned ones.
void check_regions(const std::vector<MemoryRegion>& regions);

/// Routes by address range. Unmapped accesses ack after one cycle with
/// all-ones data.
class BusDecoder : public Module {
 public:
  BusDecoder(const SystemBus& master, std::vector<std::pair<MemoryRegion, SystemBus>> slaves);
};

/// Little-endian words over `init`, the last one zero-padded. Throws
/// RomOverflowError when `init` does not fit in `size` bytes.
std::vector<uint64_t> rom_words(const std::vector<uint8_t>& init, uint32_t size);

class IntegratedRom : public Module {
 public:
  IntegratedRom(const std::vector<uint8_t>& init, uint32_t size);

  SystemBus bus{"rom"};
  uint32_t size;
  std::vector<uint8_t> init;
};

/// Register chain in `domain`; `output` follows `input` after `stages` ticks.
class Synchronizer : public Module {
 public:
  Synchronizer(const Expr& input, const std::string& domain = "sys", int stages = 2, int64_t reset = 0);

  Signal output;
  std::vector<Signal> chain;
};

struct StreamEndpoint {
  StreamEndpoint(const std::string& prefix, int width);

  Signal valid;
  Signal ready;
  Signal data;
};

/// Splits or packs words between widths with an integral ratio, least
/// significant chunk first.
class StreamConverter : public Module {
 public:
  StreamConverter(int sink_width, int source_width, const std::string& prefix = "conv");

  StreamEndpoint sink;
  StreamEndpoint source;
  int ratio;
};

class Peripheral : public Module {
 public:
  explicit Peripheral(std::string name) : name(std::move(name)) {}

  std::string name;
  std::vector<CsrRegister> csrs;
};

/// Down-counter. Disabled it holds `load`; enabled it decrements and
/// restarts from `reload` after reaching zero. A write to update_value
/// latches the count into `value`.
class Timer : public Peripheral {
 public:
  explicit Timer(int width = 32, const std::string& name = "timer");

  CsrRegister load, reload, en, update_value, value;
  Signal counter;
};

class GpioOut : public Peripheral {
 public:
  GpioOut(std::vector<Signal> pads, const std::string& name = "leds");

  CsrRegister out;
  std::vector<Signal> pads;
};

class GpioIn : public Peripheral {
 public:
  GpioIn(std::vector<Signal> pads, const std::string& name = "switches");

  CsrRegister in;
  std::vector<Signal> pads;
};

/// 8N1 serial port. Writing rxtx sends a byte (dropped while txfull);
/// rxdata holds the last received byte and reading it sets rxempty.
/// divisor is the number of clock cycles per bit.
class Uart : public Peripheral {
 public:
  Uart(Signal tx, Signal rx, int64_t divisor, const std::string& name = "uart");

  CsrRegister rxtx, txfull, rxdata, rxempty, divisor;
  Signal tx;
  Signal rx;
};

/// Binds the platform default clock to "sys"; an active-low board reset
/// drives the domain reset, otherwise the reset is a top-level input.
class Crg : public Module {
 public:
  explicit Crg(Platform& platform);

  ClockDomain cd_sys;
  Signal clk_pad;
  std::optional<Signal> rst_pad;

  std::vector<Signal> pads() const;
};

struct CsrBase {
  std::string name;
  uint32_t address;

  friend bool operator==(const CsrBase&, const CsrBase&) = default;
};

struct CsrMapRegister {
  std::string name;  // <peripheral>_<register>
  uint32_t address;
  int words;
  CsrMode mode;

  friend bool operator==(const CsrMapRegister&, const CsrMapRegister&) = default;
};

struct SocMap {
  std::vector<MemoryRegion> regions;
  std::vector<CsrBase> bases;
  std::vector<CsrMapRegister> registers;

  friend bool operator==(const SocMap&, const SocMap&) = default;
};

std::string emit_csr_map(const SocMap& map);
/// Inverse of emit_csr_map; throws ConstructionError on malformed input.
SocMap parse_csr_map(const std::string& text);

struct SocConfig {
  bool with_timer = true;
  bool with_uart = true;
  bool with_gpio = true;
  std::vector<uint8_t> rom_init;
  uint32_t rom_size = 0x8000;
  double sys_clk_freq = 100e6;
  int64_t uart_baud = 115200;
};

class Soc : public Module {
 public:
  Soc(Platform& platform, const SocConfig& config);

  struct PlacedRegister {
    std::string peripheral;
    CsrRegister reg;
    uint32_t address;
  };

  SystemBus bus{"bus"};
  SocMap map;
  std::vector<PlacedRegister> registers;
  std::shared_ptr<Crg> crg;
  std::shared_ptr<Timer> timer;
  std::shared_ptr<Uart> uart;
  std::shared_ptr<GpioOut> leds;
  std::shared_ptr<GpioIn> switches;
  std::shared_ptr<IntegratedRom> rom;

  /// Platform pads followed by the bus master port.
  std::vector<Signal> boundary() const { return boundary_; }

 private:
  std::vector<Signal> boundary_;
};

/// Drives a SystemBus master port of a simulated design.
class BusMaster {
 public:
  BusMaster(sim::Simulator& sim, SystemBus bus, int timeout = 64);

  uint32_t read(uint32_t address);
  void write(uint32_t address, uint32_t data);

 private:
  uint32_t transfer(uint32_t address, bool we, uint32_t data);

  sim::Simulator& sim_;
  SystemBus bus_;
  int timeout_;
};

}  // namespace socgen::soc
