// SPDX-License-Identifier: Apache-2.0
//
// Board descriptions: named pin groups, pin requests that mint top-level
// signals, period constraints and constraint-file emission.
#pragma once

#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "socgen/fhdl.hpp"
#include "socgen/verilog.hpp"

namespace socgen {

struct Pins {
  Pins(std::initializer_list<std::string> pins) : names(pins) {}
  /// Space-separated pin list, e.g. Pins("H17 K15").
  explicit Pins(const std::string& pins);
  explicit Pins(const char* pins) : Pins(std::string(pins)) {}

  std::vector<std::string> names;
};

struct IOStandard {
  std::string name;
};

/// Free-form "KEY=VALUE" attribute passed through to the constraint file.
struct Misc {
  std::string text;
};

using IoAttribute = std::variant<IOStandard, Misc>;

struct Subsignal {
  std::string name;
  Pins pins;
  std::vector<IoAttribute> attributes;
};

struct IoEntry {
  std::string name;
  int index;
  std::variant<Pins, std::vector<Subsignal>> elements;
  std::vector<IoAttribute> attributes;
};

enum class Dialect { Xdc, Lpf };

const char* to_string(Dialect d);
/// "xdc" or "lpf"; throws PlatformError otherwise.
Dialect parse_dialect(const std::string& text);
/// File extension without the dot.
const char* constraint_extension(Dialect d);

/// Result of a request: a single signal for plain pins, or named
/// subsignals.
class Resource {
 public:
  explicit Resource(Signal s) : signal_(std::move(s)) {}
  explicit Resource(std::map<std::string, Signal> subsignals) : subsignals_(std::move(subsignals)) {}

  bool is_record() const { return !signal_.has_value(); }
  const Signal& signal() const;
  const Signal& operator[](const std::string& sub) const;
  const std::map<std::string, Signal>& subsignals() const { return subsignals_; }
  operator const Signal&() const { return signal(); }  // NOLINT(google-explicit-constructor)

 private:
  std::optional<Signal> signal_;
  std::map<std::string, Signal> subsignals_;
};

class Platform {
 public:
  Platform(std::string name, std::string device, std::vector<IoEntry> io, Dialect dialect,
           std::string default_clk_name, double default_clk_period_ns);

  /// Lowest unrequested index when `index` is omitted.
  Resource request(const std::string& name, std::optional<int> index = std::nullopt);
  bool has(const std::string& name) const;

  void add_period_constraint(const Signal& s, double period_ns);

  /// Constraint file text for the port names in `ports`.
  std::string emit_constraints(const std::vector<PortEntry>& ports) const;

  const std::string& name() const { return name_; }
  const std::string& device() const { return device_; }
  Dialect dialect() const { return dialect_; }
  void set_dialect(Dialect d) { dialect_ = d; }
  const std::string& default_clk_name() const { return default_clk_name_; }
  double default_clk_period() const { return default_clk_period_; }
  void set_default_clk_period(double ns) { default_clk_period_ = ns; }
  const std::vector<IoEntry>& io() const { return io_; }

  /// Name of an active-low board reset, empty when the board has none.
  std::string reset_name;

 private:
  struct Binding {
    Signal signal;
    int bit;
    std::string pin;
    std::optional<std::string> iostandard;
    std::vector<std::string> misc;
    size_t order;  // position in the io table, then subsignal, then bit
  };

  std::string name_;
  std::string device_;
  std::vector<IoEntry> io_;
  Dialect dialect_;
  std::string default_clk_name_;
  double default_clk_period_;
  std::vector<std::pair<std::string, int>> requested_;
  std::vector<Binding> bindings_;
  std::vector<std::pair<Signal, double>> periods_;
};

/// Built-in boards: "nexys4ddr-like" and "versa-ecp5-like".
Platform make_platform(const std::string& name);
std::vector<std::string> builtin_platforms();

/// "10.0" for integral values, the shortest round-trip form otherwise.
std::string format_ns(double ns);
/// Integer form when integral.
std::string format_mhz(double mhz);

}  // namespace socgen
