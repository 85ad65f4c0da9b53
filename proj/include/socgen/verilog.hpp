// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <vector>

#include "socgen/analysis.hpp"

namespace socgen {

/// Helper variable introduced when an expression cannot be rendered inline
/// (part-selects of compound expressions).
struct TempAssign {
  std::string name;
  Shape shape;
  std::string text;
};

/// Renders `e` fully parenthesized with sized constants. Temporaries are
/// appended to `temps` (allocated from `names`); without `temps` an
/// expression that needs one raises AnalysisError.
std::string emit_expression(const Expr& e, NameTable& names, std::vector<TempAssign>* temps = nullptr);
std::string emit_expression(const Expr& e, const NameTable& names);

struct PortEntry {
  std::string name;
  PortDirection direction;
  int width;
  Signal signal;
};

struct EmittedModule {
  std::string module_name;
  std::string text;
  std::vector<PortEntry> port_table;
  /// Every identifier the module declares.
  std::set<std::string> identifiers;
};

EmittedModule emit_verilog(const LoweredDesign& d, const std::string& module_name);

/// Version string written into generated headers.
const char* socgen_version();

}  // namespace socgen
