// SPDX-License-Identifier: Apache-2.0
#include "socgen/vcd.hpp"

#include <fmt/format.h>

#include "socgen/error.hpp"

namespace socgen {

VcdWriter::VcdWriter(std::ostream& out, std::string timescale, std::string scope)
    : out_(out), timescale_(std::move(timescale)), scope_(std::move(scope)) {}

std::string VcdWriter::identifier_code(int index) {
  // Base-94 over the printable range '!'..'~'.
  std::string code;
  do {
    code.push_back(static_cast<char>('!' + index % 94));
    index /= 94;
  } while (index > 0);
  return code;
}

int VcdWriter::declare(const std::string& name, int width) {
  if (started_) throw SimulationError("VCD variables must be declared before the first sample");
  vars_.push_back({name, identifier_code(static_cast<int>(vars_.size())), width, 0, std::nullopt});
  return static_cast<int>(vars_.size()) - 1;
}

void VcdWriter::set(int handle, uint64_t value) { vars_.at(static_cast<size_t>(handle)).value = value; }

void VcdWriter::header() {
  out_ << "$version socgen $end\n";
  out_ << "$timescale " << timescale_ << " $end\n";
  out_ << "$scope module " << scope_ << " $end\n";
  for (const auto& v : vars_) {
    out_ << fmt::format("$var wire {} {} {} $end\n", v.width, v.code, v.name);
  }
  out_ << "$upscope $end\n$enddefinitions $end\n";
}

void VcdWriter::write_value(const Var& v) {
  if (v.width == 1) {
    out_ << (v.value & 1) << v.code << '\n';
    return;
  }
  std::string bits;
  for (int i = v.width - 1; i >= 0; --i) bits.push_back(((v.value >> i) & 1) ? '1' : '0');
  const auto first = bits.find('1');
  bits = first == std::string::npos ? "0" : bits.substr(first);
  out_ << 'b' << bits << ' ' << v.code << '\n';
}

void VcdWriter::sample(uint64_t time) {
  if (!started_) {
    header();
    started_ = true;
    out_ << "#" << time << "\n$dumpvars\n";
    for (auto& v : vars_) {
      write_value(v);
      v.dumped = v.value;
    }
    out_ << "$end\n";
    return;
  }
  bool stamped = false;
  for (auto& v : vars_) {
    if (v.dumped == v.value) continue;
    if (!stamped) {
      out_ << "#" << time << '\n';
      stamped = true;
    }
    write_value(v);
    v.dumped = v.value;
  }
}

}  // namespace socgen
