// SPDX-License-Identifier: Apache-2.0
#include "socgen/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "socgen/keywords.hpp"

namespace socgen {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

ShapeEnv shape_env(const std::vector<Signal>& signals) {
  ShapeEnv env;
  for (const auto& s : signals) env.emplace(s.id(), s.shape());
  return env;
}

Shape infer_shape(const Expr& e, const ShapeEnv& env) {
  return std::visit(
      overloaded{
          [](const detail::ConstNode& c) { return c.shape; },
          [&](const detail::SignalNode& s) {
            auto it = env.find(s.signal.id());
            if (it == env.end()) {
              throw AnalysisError(fmt::format("unknown signal '{}'", s.signal.name_hint()));
            }
            return it->second;
          },
          [&](const detail::UnaryNode& u) { return unary_shape(u.op, infer_shape(u.operand, env)); },
          [&](const detail::BinaryNode& b) {
            std::optional<int64_t> shift_constant;
            if (const auto* c = std::get_if<detail::ConstNode>(&b.rhs.node().v)) shift_constant = c->value;
            return binary_shape(b.op, infer_shape(b.lhs, env), infer_shape(b.rhs, env), shift_constant);
          },
          [&](const detail::MuxNode& m) {
            infer_shape(m.cond, env);
            return mux_shape(infer_shape(m.if_true, env), infer_shape(m.if_false, env));
          },
          [&](const detail::SliceNode& s) {
            infer_shape(s.operand, env);
            return Shape{s.high - s.low, false};
          },
          [&](const detail::ConcatNode& c) {
            int w = 0;
            for (const auto& p : c.parts) w += infer_shape(p, env).width;
            return Shape{w, false};
          },
          [&](const detail::ReplicateNode& r) {
            return Shape{infer_shape(r.operand, env).width * r.count, false};
          },
      },
      e.node().v);
}

// ---------------------------------------------------------------------------
// Drivers

DriverMap collect_drivers(const Fragment& f) {
  DriverMap map;
  auto mark = [&](const Signal& s, const std::string& cls) {
    auto [it, _] = map.try_emplace(s.id(), DriverInfo{s, {}});
    it->second.classes.insert(cls);
  };
  for (const auto& s : assigned_signals(f.comb)) mark(s, "comb");
  for (const auto& [domain, stmts] : f.sync) {
    for (const auto& s : assigned_signals(stmts)) mark(s, "sync:" + domain);
  }
  for (const auto& sp : f.specials) {
    std::visit(overloaded{
                   [&](const Memory& m) {
                     for (const auto& p : m.ports) mark(p.dat_r, "special");
                   },
                   [&](const ExternalInstance& inst) {
                     for (const auto& c : inst.connections) {
                       if (c.direction == PortDirection::In) continue;
                       for (const auto& s : target_signals(c.value)) mark(s, "special");
                     }
                   },
               },
               sp);
  }
  return map;
}

void check_single_driver(const DriverMap& drivers) {
  for (const auto& [_, info] : drivers) {
    if (info.classes.size() > 1) {
      std::string classes;
      for (const auto& c : info.classes) {
        if (!classes.empty()) classes += ", ";
        classes += c;
      }
      throw MultipleDriverError(info.signal.name_hint(),
                                fmt::format("MultipleDriver: signal '{}' is driven by {{{}}}",
                                            info.signal.name_hint(), classes));
    }
  }
}

std::vector<IoPort> infer_io_directions(const Fragment& f, const std::vector<Signal>& boundary) {
  const DriverMap drivers = collect_drivers(f);
  std::unordered_set<uint64_t> inout;
  for (const auto& sp : f.specials) {
    if (const auto* inst = std::get_if<ExternalInstance>(&sp)) {
      for (const auto& c : inst->connections) {
        if (c.direction != PortDirection::InOut) continue;
        for (const auto& s : target_signals(c.value)) inout.insert(s.id());
      }
    }
  }
  std::vector<IoPort> ports;
  std::unordered_set<uint64_t> seen;
  for (const auto& s : boundary) {
    if (!seen.insert(s.id()).second) continue;
    PortDirection dir = PortDirection::In;
    if (inout.count(s.id())) {
      dir = PortDirection::InOut;
    } else if (drivers.count(s.id())) {
      dir = PortDirection::Out;
    }
    ports.push_back({s, dir});
  }
  return ports;
}

// ---------------------------------------------------------------------------
// Names

std::string sanitize_identifier(std::string_view hint) {
  std::string out;
  out.reserve(hint.size());
  for (char c : hint) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    out.push_back(ok ? c : '_');
  }
  if (out.empty()) out = "sig";
  if (out[0] >= '0' && out[0] <= '9') out.insert(out.begin(), '_');
  if (is_verilog_keyword(out)) out += "_s";
  return out;
}

std::string NameTable::fresh(std::string_view hint) {
  const std::string base = sanitize_identifier(hint);
  std::string name = base;
  for (int n = 0; used_.count(name) || is_verilog_keyword(name); ++n) {
    name = fmt::format("{}_{}", base, n);
  }
  used_.insert(name);
  return name;
}

const std::string& NameTable::assign(uint64_t id, std::string_view hint) {
  auto it = by_id_.find(id);
  if (it != by_id_.end()) return it->second;
  return by_id_.emplace(id, fresh(hint)).first->second;
}

std::string NameTable::reserve(std::string_view hint) { return fresh(hint); }

const std::string& NameTable::name_of(uint64_t id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw AnalysisError(fmt::format("signal #{} has no lowered name", id));
  return it->second;
}

// ---------------------------------------------------------------------------
// Lowering

const ClockDomain& LoweredDesign::domain(const std::string& name) const {
  for (const auto& d : domains) {
    if (d.name == name) return d;
  }
  throw UnresolvedDomainError(fmt::format("UnresolvedDomain: clock domain '{}' is not declared", name));
}

namespace {

struct UnionFind {
  std::vector<size_t> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<CombGroup> group_comb(const StatementList& comb) {
  const size_t n = comb.size();
  UnionFind uf(n);
  std::vector<std::vector<Signal>> targets(n);
  std::unordered_map<uint64_t, size_t> owner;
  for (size_t i = 0; i < n; ++i) {
    targets[i] = assigned_signals(StatementList{comb[i]});
    for (const auto& s : targets[i]) {
      auto [it, inserted] = owner.emplace(s.id(), i);
      if (!inserted) uf.unite(it->second, i);
    }
  }
  std::vector<CombGroup> groups;
  std::unordered_map<size_t, size_t> group_of_root;
  std::vector<std::unordered_set<uint64_t>> seen;
  std::vector<StatementList> bodies;
  for (size_t i = 0; i < n; ++i) {
    if (targets[i].empty()) continue;
    const size_t root = uf.find(i);
    auto [it, inserted] = group_of_root.emplace(root, groups.size());
    if (inserted) {
      groups.emplace_back();
      seen.emplace_back();
      bodies.emplace_back();
    }
    const size_t g = it->second;
    for (const auto& s : targets[i]) {
      if (seen[g].insert(s.id()).second) groups[g].targets.push_back(s);
    }
    bodies[g].push_back(comb[i]);
  }
  for (size_t g = 0; g < groups.size(); ++g) {
    StatementList body;
    for (const auto& t : groups[g].targets) body.push_back(t.eq(Const(t.reset(), t.shape())));
    for (auto& s : bodies[g]) body.push_back(std::move(s));
    groups[g].body = std::move(body);
  }
  return groups;
}

}  // namespace

LoweredDesign lower(const Fragment& f, const std::vector<Signal>& boundary, const LowerOptions& options) {
  const DriverMap drivers = collect_drivers(f);
  check_single_driver(drivers);

  LoweredDesign d;
  d.fragment = f;
  d.specials = f.specials;

  // Clock domains: declared ones first, then implicit ones in name order.
  d.domains = f.clock_domains;
  std::set<std::string> referenced;
  for (const auto& [name, stmts] : f.sync) {
    if (!stmts.empty()) referenced.insert(name);
  }
  for (const auto& sp : f.specials) {
    if (const auto* m = std::get_if<Memory>(&sp)) {
      for (const auto& p : m->ports) referenced.insert(p.domain);
    }
  }
  for (const auto& name : referenced) {
    const bool declared = std::any_of(d.domains.begin(), d.domains.end(),
                                      [&](const ClockDomain& cd) { return cd.name == name; });
    if (declared) continue;
    const bool external = name == "sys" || std::find(options.external_domains.begin(),
                                                     options.external_domains.end(),
                                                     name) != options.external_domains.end();
    if (!external) {
      throw UnresolvedDomainError(
          fmt::format("UnresolvedDomain: synchronous logic in undeclared clock domain '{}'", name));
    }
    d.domains.emplace_back(name);
  }

  // Ports: boundary in the given order, then undriven domain clocks/resets.
  d.io_ports = infer_io_directions(f, boundary);
  std::unordered_set<uint64_t> in_ports;
  for (const auto& p : d.io_ports) in_ports.insert(p.signal.id());
  for (const auto& cd : d.domains) {
    if (!drivers.count(cd.clk.id()) && in_ports.insert(cd.clk.id()).second) {
      d.io_ports.push_back({cd.clk, PortDirection::In});
    }
    if (cd.reset_synchronous && !drivers.count(cd.rst.id()) && in_ports.insert(cd.rst.id()).second) {
      d.io_ports.push_back({cd.rst, PortDirection::In});
    }
  }

  // Naming order: ports, then the fragment's signals, then domain signals.
  std::unordered_set<uint64_t> listed;
  auto add_signal = [&](const Signal& s) {
    if (!listed.insert(s.id()).second) return;
    d.signals.push_back(s);
    d.names.assign(s.id(), s.name_hint());
  };
  for (const auto& p : d.io_ports) add_signal(p.signal);
  for (const auto& s : f.signals) add_signal(s);
  for (const auto& cd : d.domains) {
    add_signal(cd.clk);
    add_signal(cd.rst);
  }

  // Roles.
  for (const auto& s : d.signals) d.roles[s.id()] = SignalRole::Constant;
  for (const auto& [id, info] : drivers) {
    const std::string& cls = *info.classes.begin();
    if (cls == "comb") {
      d.roles[id] = SignalRole::Comb;
    } else if (cls.rfind("sync:", 0) == 0) {
      d.roles[id] = SignalRole::Sync;
    } else {
      d.roles[id] = SignalRole::Instance;
    }
  }
  for (const auto& sp : f.specials) {
    if (const auto* m = std::get_if<Memory>(&sp)) {
      for (const auto& p : m->ports) d.roles[p.dat_r.id()] = SignalRole::Memory;
    }
  }
  for (const auto& p : d.io_ports) {
    if (p.direction == PortDirection::In) d.roles[p.signal.id()] = SignalRole::Input;
    if (p.direction == PortDirection::InOut) d.roles[p.signal.id()] = SignalRole::InOut;
  }

  d.comb_groups = group_comb(f.comb);

  for (const auto& cd : d.domains) {
    auto it = f.sync.find(cd.name);
    if (it == f.sync.end() || it->second.empty()) continue;
    SyncProcess proc{cd, assigned_signals(it->second), {}};
    if (cd.reset_synchronous) {
      StatementList resets;
      for (const auto& s : proc.driven) resets.push_back(s.eq(Const(s.reset(), s.shape())));
      proc.body.push_back(If(cd.rst, std::move(resets)).Else(it->second));
    } else {
      proc.body = it->second;
    }
    d.sync_processes.push_back(std::move(proc));
  }
  return d;
}

}  // namespace socgen
