// SPDX-License-Identifier: Apache-2.0
#include "socgen/platform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>

namespace socgen {

Pins::Pins(const std::string& pins) {
  std::istringstream in(pins);
  std::string p;
  while (in >> p) names.push_back(p);
}

const char* to_string(Dialect d) { return d == Dialect::Xdc ? "xdc" : "lpf"; }

Dialect parse_dialect(const std::string& text) {
  if (text == "xdc") return Dialect::Xdc;
  if (text == "lpf") return Dialect::Lpf;
  throw PlatformError(fmt::format("unknown constraint dialect '{}' (expected xdc or lpf)", text));
}

const char* constraint_extension(Dialect d) { return to_string(d); }

const Signal& Resource::signal() const {
  if (!signal_) throw PlatformError("resource has subsignals; select one by name");
  return *signal_;
}

const Signal& Resource::operator[](const std::string& sub) const {
  auto it = subsignals_.find(sub);
  if (it == subsignals_.end()) throw PlatformError(fmt::format("resource has no subsignal '{}'", sub));
  return it->second;
}

Platform::Platform(std::string name, std::string device, std::vector<IoEntry> io, Dialect dialect,
                   std::string default_clk_name, double default_clk_period_ns)
    : name_(std::move(name)),
      device_(std::move(device)),
      io_(std::move(io)),
      dialect_(dialect),
      default_clk_name_(std::move(default_clk_name)),
      default_clk_period_(default_clk_period_ns) {
  std::vector<std::pair<std::string, int>> keys;
  for (const auto& e : io_) {
    const auto key = std::make_pair(e.name, e.index);
    if (std::find(keys.begin(), keys.end(), key) != keys.end()) {
      throw PlatformError(fmt::format("duplicate io entry ({}, {})", e.name, e.index));
    }
    keys.push_back(key);
    auto check = [&](const Pins& p) {
      if (p.names.empty()) throw PlatformError(fmt::format("io entry ({}, {}) has an empty pin list", e.name, e.index));
    };
    std::visit([&](const auto& el) {
      if constexpr (std::is_same_v<std::decay_t<decltype(el)>, Pins>) {
        check(el);
      } else {
        for (const auto& s : el) check(s.pins);
      }
    }, e.elements);
  }
  if (!default_clk_name_.empty() && !has(default_clk_name_)) {
    throw PlatformError(fmt::format("default clock '{}' is not in the io table", default_clk_name_));
  }
}

bool Platform::has(const std::string& name) const {
  return std::any_of(io_.begin(), io_.end(), [&](const IoEntry& e) { return e.name == name; });
}

namespace {

struct Attrs {
  std::optional<std::string> iostandard;
  std::vector<std::string> misc;
};

void apply(Attrs& a, const std::vector<IoAttribute>& list) {
  for (const auto& attr : list) {
    if (const auto* s = std::get_if<IOStandard>(&attr)) {
      a.iostandard = s->name;
    } else {
      a.misc.push_back(std::get<Misc>(attr).text);
    }
  }
}

}  // namespace

Resource Platform::request(const std::string& name, std::optional<int> index) {
  std::vector<size_t> candidates;
  for (size_t i = 0; i < io_.size(); ++i) {
    if (io_[i].name == name) candidates.push_back(i);
  }
  if (candidates.empty()) throw PlatformError(fmt::format("platform '{}' has no io named '{}'", name_, name));
  auto taken = [&](int idx) {
    return std::find(requested_.begin(), requested_.end(), std::make_pair(name, idx)) != requested_.end();
  };

  size_t chosen = io_.size();
  if (index) {
    for (size_t c : candidates) {
      if (io_[c].index == *index) chosen = c;
    }
    if (chosen == io_.size()) throw PlatformError(fmt::format("io '{}' has no index {}", name, *index));
    if (taken(*index)) throw PlatformError(fmt::format("io ({}, {}) was already requested", name, *index));
  } else {
    for (size_t c : candidates) {
      if (taken(io_[c].index)) continue;
      if (chosen == io_.size() || io_[c].index < io_[chosen].index) chosen = c;
    }
    if (chosen == io_.size()) throw PlatformError(fmt::format("every index of io '{}' is already requested", name));
  }

  const IoEntry& e = io_[chosen];
  requested_.emplace_back(e.name, e.index);
  const std::string base = candidates.size() > 1 ? fmt::format("{}{}", e.name, e.index) : e.name;
  Attrs entry_attrs;
  apply(entry_attrs, e.attributes);

  auto bind = [&](const Signal& s, const Pins& pins, const Attrs& attrs, size_t sub) {
    for (size_t bit = 0; bit < pins.names.size(); ++bit) {
      bindings_.push_back({s, static_cast<int>(bit), pins.names[bit], attrs.iostandard, attrs.misc,
                           (chosen << 32) | (sub << 16) | bit});
    }
  };

  if (const auto* pins = std::get_if<Pins>(&e.elements)) {
    Signal s(base, static_cast<int>(pins->names.size()));
    bind(s, *pins, entry_attrs, 0);
    return Resource(s);
  }
  std::map<std::string, Signal> record;
  const auto& subs = std::get<std::vector<Subsignal>>(e.elements);
  for (size_t i = 0; i < subs.size(); ++i) {
    Signal s(base + "_" + subs[i].name, static_cast<int>(subs[i].pins.names.size()));
    Attrs attrs = entry_attrs;
    apply(attrs, subs[i].attributes);
    bind(s, subs[i].pins, attrs, i);
    record.emplace(subs[i].name, s);
  }
  return Resource(std::move(record));
}

void Platform::add_period_constraint(const Signal& s, double period_ns) {
  if (!(period_ns > 0)) throw PlatformError(fmt::format("clock period must be positive, got {}", period_ns));
  const bool known = std::any_of(bindings_.begin(), bindings_.end(),
                                 [&](const Binding& b) { return b.signal.same_as(s); });
  if (!known) {
    throw PlatformError(fmt::format("period constraint on '{}', which was not requested from the platform",
                                    s.name_hint()));
  }
  for (const auto& [sig, ns] : periods_) {
    if (!sig.same_as(s)) continue;
    if (ns != period_ns) {
      throw PlatformError(fmt::format("conflicting period constraints on '{}': {} ns and {} ns", s.name_hint(),
                                      format_ns(ns), format_ns(period_ns)));
    }
    return;
  }
  periods_.emplace_back(s, period_ns);
}

std::string format_ns(double ns) {
  if (std::floor(ns) == ns && std::fabs(ns) < 1e15) return fmt::format("{:.1f}", ns);
  return fmt::format("{}", ns);
}

std::string format_mhz(double mhz) {
  if (std::floor(mhz) == mhz && std::fabs(mhz) < 1e15) return fmt::format("{}", static_cast<int64_t>(mhz));
  return fmt::format("{}", mhz);
}

std::string Platform::emit_constraints(const std::vector<PortEntry>& ports) const {
  std::unordered_map<uint64_t, const PortEntry*> by_id;
  for (const auto& p : ports) by_id.emplace(p.signal.id(), &p);
  auto port_of = [&](const Signal& s) -> const PortEntry& {
    auto it = by_id.find(s.id());
    if (it == by_id.end()) {
      throw PlatformError(fmt::format("requested signal '{}' is not a port of the design", s.name_hint()));
    }
    return *it->second;
  };

  std::vector<const Binding*> order;
  for (const auto& b : bindings_) order.push_back(&b);
  std::stable_sort(order.begin(), order.end(), [](const Binding* a, const Binding* b) { return a->order < b->order; });

  std::string out;
  for (const Binding* b : order) {
    const PortEntry& p = port_of(b->signal);
    const std::string port = p.width == 1 ? p.name : fmt::format("{}[{}]", p.name, b->bit);
    if (dialect_ == Dialect::Xdc) {
      std::string dict = "PACKAGE_PIN " + b->pin;
      if (b->iostandard) dict += " IOSTANDARD " + *b->iostandard;
      for (const auto& m : b->misc) {
        std::string kv = m;
        std::replace(kv.begin(), kv.end(), '=', ' ');
        dict += " " + kv;
      }
      out += fmt::format("set_property -dict {{ {} }} [get_ports {{{}}}]\n", dict, port);
    } else {
      out += fmt::format("LOCATE COMP \"{}\" SITE \"{}\";\n", port, b->pin);
      if (b->iostandard || !b->misc.empty()) {
        std::string line = fmt::format("IOBUF PORT \"{}\"", port);
        if (b->iostandard) line += " IO_TYPE=" + *b->iostandard;
        for (const auto& m : b->misc) line += " " + m;
        out += line + ";\n";
      }
    }
  }
  for (const auto& [sig, ns] : periods_) {
    const PortEntry& p = port_of(sig);
    if (dialect_ == Dialect::Xdc) {
      out += fmt::format("create_clock -name {0} -period {1} [get_ports {{{0}}}]\n", p.name, format_ns(ns));
    } else {
      out += fmt::format("FREQUENCY PORT \"{}\" {} MHZ;\n", p.name, format_mhz(1000.0 / ns));
    }
  }
  return out;
}

std::vector<std::string> builtin_platforms() { return {"nexys4ddr-like", "versa-ecp5-like"}; }

Platform make_platform(const std::string& name) {
  if (name == "nexys4ddr-like") {
    // Only H17, K15, D4, C4 and LVCMOS33 are real board values; the
    // remaining sites are placeholders.
    std::vector<IoEntry> io;
    io.push_back({"clk100", 0, Pins("E3"), {IOStandard{"LVCMOS33"}}});
    io.push_back({"cpu_reset", 0, Pins("C12"), {IOStandard{"LVCMOS33"}}});
    const char* leds[] = {"H17", "K15", "J13", "N14", "R18", "V17", "U17", "U16",
                          "V16", "T15", "U14", "T16", "V15", "V14", "V12", "V11"};
    for (int i = 0; i < 16; ++i) io.push_back({"user_led", i, Pins(leds[i]), {IOStandard{"LVCMOS33"}}});
    const char* sws[] = {"J15", "L16", "M13", "R15"};
    for (int i = 0; i < 4; ++i) io.push_back({"user_sw", i, Pins(sws[i]), {IOStandard{"LVCMOS33"}}});
    io.push_back({"serial", 0,
                  std::vector<Subsignal>{{"tx", Pins("D4"), {}}, {"rx", Pins("C4"), {}}},
                  {IOStandard{"LVCMOS33"}}});
    Platform p("nexys4ddr-like", "xc7a100t-CSG324-1", std::move(io), Dialect::Xdc, "clk100", 10.0);
    p.reset_name = "cpu_reset";
    return p;
  }
  if (name == "versa-ecp5-like") {
    // Every site on this board is a placeholder.
    std::vector<IoEntry> io;
    io.push_back({"clk100", 0, Pins("P3"), {IOStandard{"LVDS"}}});
    io.push_back({"rst_n", 0, Pins("T1"), {IOStandard{"LVCMOS33"}}});
    const char* leds[] = {"E16", "D17", "D18", "E18", "F17", "F18", "E17", "F16"};
    for (int i = 0; i < 8; ++i) io.push_back({"user_led", i, Pins(leds[i]), {IOStandard{"LVCMOS25"}}});
    const char* sws[] = {"H2", "K3", "G3", "F2"};
    for (int i = 0; i < 4; ++i) io.push_back({"user_sw", i, Pins(sws[i]), {IOStandard{"LVCMOS15"}}});
    io.push_back({"serial", 0,
                  std::vector<Subsignal>{{"tx", Pins("A11"), {}}, {"rx", Pins("C11"), {}}},
                  {IOStandard{"LVCMOS33"}}});
    Platform p("versa-ecp5-like", "LFE5UM5G-45F-8BG381C", std::move(io), Dialect::Lpf, "clk100", 10.0);
    p.reset_name = "rst_n";
    return p;
  }
  throw PlatformError(fmt::format("unknown platform '{}' (available: nexys4ddr-like, versa-ecp5-like)", name));
}

}  // namespace socgen
