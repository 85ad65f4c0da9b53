// SPDX-License-Identifier: Apache-2.0
//
// Two-phase cycle simulator: combinational logic is settled to a fixed point
// between clock edges, and each tick commits a domain's synchronous updates
// at once.
#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "socgen/analysis.hpp"
#include "socgen/vcd.hpp"

namespace socgen::sim {

struct Write {
  Signal signal;
  uint64_t value;
};
struct Tick {
  std::string domain = "sys";
  int count = 1;
};
struct Expect {
  Signal signal;
  uint64_t expected;
};
/// Records the signal's current value in the trace.
struct Observe {
  Signal signal;
};

using Action = std::variant<Write, Tick, Expect, Observe>;
using Stimulus = std::vector<Action>;

struct Observation {
  uint64_t cycle;
  std::string signal;
  uint64_t value;

  friend bool operator==(const Observation&, const Observation&) = default;
};

class Simulator {
 public:
  explicit Simulator(LoweredDesign design);
  Simulator(const Fragment& f, const std::vector<Signal>& boundary, const LowerOptions& options = {});
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  /// Sets a boundary input; the value is masked to the signal width.
  void write(const Signal& s, uint64_t value);
  /// Settled value as raw bits.
  uint64_t read(const Signal& s);
  /// Settled value interpreted with the signal's signedness.
  int64_t read_signed(const Signal& s);
  /// Value of an arbitrary expression over signals of the design.
  int64_t evaluate(const Expr& e);

  void tick(const std::string& domain = "sys", int count = 1);
  void tick(int count) { tick("sys", count); }
  uint64_t cycle(const std::string& domain = "sys") const;
  /// Total ticks over all domains.
  uint64_t time() const;

  std::vector<Observation> run(const Stimulus& stimulus);

  /// Starts writing a VCD trace of every named signal to `out`.
  void trace(std::ostream& out);

  const LoweredDesign& design() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace socgen::sim
