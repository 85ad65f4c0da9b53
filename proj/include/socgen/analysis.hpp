// SPDX-License-Identifier: Apache-2.0
//
// Static semantics over finalized fragments: shape inference, driver
// collection, boundary direction inference and lowering to a form that the
// Verilog emitter and the simulator both consume.
#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "socgen/fhdl.hpp"

namespace socgen {

using ShapeEnv = std::unordered_map<uint64_t, Shape>;

/// Shape environment built from the signals' declared shapes.
ShapeEnv shape_env(const std::vector<Signal>& signals);

/// Recomputes the shape of `e` from `env`; throws AnalysisError for a
/// signal missing from `env`.
Shape infer_shape(const Expr& e, const ShapeEnv& env);

struct DriverInfo {
  Signal signal;
  /// "comb", "sync:<domain>" or "special".
  std::set<std::string> classes;
};

using DriverMap = std::map<uint64_t, DriverInfo>;

DriverMap collect_drivers(const Fragment& f);

/// Throws MultipleDriverError for the first signal with more than one class.
void check_single_driver(const DriverMap& drivers);

struct IoPort {
  Signal signal;
  PortDirection direction;
};

std::vector<IoPort> infer_io_directions(const Fragment& f, const std::vector<Signal>& boundary);

/// Collision-free identifier allocation.
class NameTable {
 public:
  /// Binds a name derived from `hint` to the signal id. Idempotent.
  const std::string& assign(uint64_t id, std::string_view hint);
  /// Allocates a fresh name not bound to any signal.
  std::string reserve(std::string_view hint);

  bool contains(uint64_t id) const { return by_id_.count(id) != 0; }
  const std::string& name_of(uint64_t id) const;
  const std::string& operator[](const Signal& s) const { return name_of(s.id()); }
  const std::set<std::string>& used() const { return used_; }

 private:
  std::string fresh(std::string_view hint);

  std::unordered_map<uint64_t, std::string> by_id_;
  std::set<std::string> used_;
};

/// Turns arbitrary text into a legal identifier (before collision handling).
std::string sanitize_identifier(std::string_view hint);

enum class SignalRole {
  Input,     // module input port
  Comb,      // assigned in a combinational group
  Sync,      // assigned by a clocked process
  Memory,    // memory read data register
  Instance,  // driven by an external instance output
  Constant,  // never driven; holds its reset value
  InOut,
};

struct CombGroup {
  std::vector<Signal> targets;
  /// Reset-value defaults for every target followed by the original statements.
  StatementList body;
};

struct SyncProcess {
  ClockDomain domain;
  std::vector<Signal> driven;
  /// For reset_synchronous domains: If(rst, resets).Else(original).
  StatementList body;
};

struct LowerOptions {
  /// Domains that may be referenced without a ClockDomain declaration; their
  /// clock and reset become input ports.
  std::vector<std::string> external_domains;
};

struct LoweredDesign {
  Fragment fragment;
  std::vector<IoPort> io_ports;
  NameTable names;
  /// Every signal of the design in naming order (ports first).
  std::vector<Signal> signals;
  std::unordered_map<uint64_t, SignalRole> roles;
  std::vector<ClockDomain> domains;
  std::vector<CombGroup> comb_groups;
  std::vector<SyncProcess> sync_processes;
  std::vector<Special> specials;

  SignalRole role(const Signal& s) const { return roles.at(s.id()); }
  const ClockDomain& domain(const std::string& name) const;
};

/// Runs the driver checks, resolves clock domains (the "sys" domain is
/// created implicitly when referenced but undeclared), names every signal
/// and builds comb groups and sync processes.
LoweredDesign lower(const Fragment& f, const std::vector<Signal>& boundary,
                    const LowerOptions& options = {});

}  // namespace socgen
