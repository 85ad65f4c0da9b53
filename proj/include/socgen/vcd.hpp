// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace socgen {

/// Minimal four-section VCD writer: header, variable declarations, initial
/// dump and value changes. Only changed values are written.
class VcdWriter {
 public:
  explicit VcdWriter(std::ostream& out, std::string timescale = "1ns", std::string scope = "top");

  /// Declares a variable; only valid before the first sample.
  int declare(const std::string& name, int width);
  void set(int handle, uint64_t value);
  /// Writes `#time` and every value that changed since the previous sample.
  /// The first call also emits the header and `$dumpvars`.
  void sample(uint64_t time);

  static std::string identifier_code(int index);

 private:
  struct Var {
    std::string name;
    std::string code;
    int width;
    uint64_t value = 0;
    std::optional<uint64_t> dumped = std::nullopt;
  };

  void header();
  void write_value(const Var& v);

  std::ostream& out_;
  std::string timescale_;
  std::string scope_;
  std::vector<Var> vars_;
  bool started_ = false;
};

}  // namespace socgen
