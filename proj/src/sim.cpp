// SPDX-License-Identifier: Apache-2.0
#include "socgen/sim.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

namespace socgen::sim {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr int kMaxSimWidth = 127;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

u128 mask128(int width) { return width >= 128 ? ~u128{0} : (u128{1} << width) - 1; }
uint64_t mask64(int width) { return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1; }

i128 interpret(uint64_t raw, Shape shape) {
  if (shape.is_signed && shape.width < 128 && ((raw >> (shape.width - 1)) & 1)) {
    return static_cast<i128>(static_cast<u128>(raw) | ~mask128(shape.width));
  }
  return static_cast<i128>(raw);
}

struct Node {
  enum Kind : uint8_t { Const, Sig, Not, Neg, Bin, Mux, Slice, Cat, Rep } kind;
  BinaryOp op = BinaryOp::Add;
  Shape shape;
  i128 value = 0;
  int slot = -1;
  int a = -1, b = -1, c = -1;
  int low = 0, count = 0;
  std::vector<int> parts;
};

struct TargetPiece {
  int slot;
  int low;
  int width;
};

struct Stmt {
  enum Kind : uint8_t { Assign, If, Case } kind = Assign;
  std::vector<TargetPiece> targets;
  int expr = -1;  // value, condition or selector
  int selector_width = 0;
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
  std::vector<std::pair<uint64_t, std::vector<Stmt>>> arms;
};

struct Group {
  std::vector<Stmt> body;
  std::vector<int> targets;
};

struct MemPort {
  int adr, dat_r, we = -1, dat_w = -1;
};

struct Mem {
  int width;
  std::vector<uint64_t> data;
  std::map<std::string, std::vector<MemPort>> ports;  // by domain
};

}  // namespace

struct Simulator::Impl {
  LoweredDesign d;
  std::vector<Node> nodes;
  std::unordered_map<const void*, int> memo;
  std::vector<Expr> memo_keepalive;
  std::unordered_map<uint64_t, int> slot_of;
  std::vector<Shape> shapes;
  std::vector<uint64_t> values;
  std::vector<uint64_t> scratch;
  std::vector<int> owner;  // comb group owning each slot, -1 otherwise
  std::vector<Group> groups;
  std::vector<std::vector<int>> readers;  // slot -> comb groups reading it
  std::map<std::string, std::pair<std::vector<Stmt>, std::vector<int>>> sync;  // body, driven slots
  std::vector<Mem> memories;
  std::vector<bool> writable;
  std::vector<char> dirty;
  bool any_dirty = false;
  size_t loop_bound = 2;
  std::map<std::string, uint64_t> cycles;
  uint64_t time = 0;

  std::unique_ptr<VcdWriter> vcd;
  std::vector<std::pair<int, int>> vcd_vars;  // (slot, handle)
  std::map<int, int> vcd_clock_slots;         // slot -> handle

  explicit Impl(LoweredDesign design) : d(std::move(design)) {
    for (const auto& s : d.signals) {
      slot_of.emplace(s.id(), static_cast<int>(shapes.size()));
      shapes.push_back(s.shape());
      values.push_back(d.role(s) == SignalRole::Input ? 0 : mask_to(s.reset(), s.width()));
      writable.push_back(d.role(s) == SignalRole::Input);
    }
    owner.assign(shapes.size(), -1);
    readers.resize(shapes.size());

    size_t comb_signals = 0;
    for (const auto& g : d.comb_groups) {
      const int gi = static_cast<int>(groups.size());
      Group cg;
      for (const auto& t : g.targets) {
        const int slot = slot_for(t);
        cg.targets.push_back(slot);
        owner[static_cast<size_t>(slot)] = gi;
        ++comb_signals;
      }
      cg.body = compile_list(g.body);
      groups.push_back(std::move(cg));
    }
    loop_bound = comb_signals + 2;
    for (size_t gi = 0; gi < groups.size(); ++gi) {
      std::vector<int> reads;
      collect_reads(groups[gi].body, reads);
      std::sort(reads.begin(), reads.end());
      reads.erase(std::unique(reads.begin(), reads.end()), reads.end());
      for (int r : reads) {
        if (owner[static_cast<size_t>(r)] != static_cast<int>(gi)) readers[static_cast<size_t>(r)].push_back(static_cast<int>(gi));
      }
    }

    for (const auto& cd : d.domains) cycles.emplace(cd.name, 0);
    for (const auto& sp : d.sync_processes) {
      auto& entry = sync[sp.domain.name];
      entry.first = compile_list(sp.body);
      for (const auto& s : sp.driven) entry.second.push_back(slot_for(s));
    }
    for (const auto& special : d.specials) {
      if (const auto* m = std::get_if<Memory>(&special)) {
        Mem mem{m->width, std::vector<uint64_t>(static_cast<size_t>(m->depth), 0), {}};
        for (size_t i = 0; i < m->init.size() && i < mem.data.size(); ++i) mem.data[i] = m->init[i] & mask64(m->width);
        for (const auto& p : m->ports) {
          d.domain(p.domain);
          MemPort mp{slot_for(p.adr), slot_for(p.dat_r)};
          if (p.we) mp.we = slot_for(*p.we);
          if (p.dat_w) mp.dat_w = slot_for(*p.dat_w);
          mem.ports[p.domain].push_back(mp);
        }
        memories.push_back(std::move(mem));
      }
    }

    scratch = values;
    dirty.assign(groups.size(), 1);
    any_dirty = !groups.empty();
    settle();
  }

  static uint64_t mask_to(int64_t v, int width) { return static_cast<uint64_t>(v) & mask64(width); }

  int slot_for(const Signal& s) const {
    auto it = slot_of.find(s.id());
    if (it == slot_of.end()) {
      throw SimulationError(fmt::format("signal '{}' is not part of the simulated design", s.name_hint()));
    }
    return it->second;
  }

  // -- compilation ---------------------------------------------------------

  int compile(const Expr& e) {
    auto it = memo.find(e.identity());
    if (it != memo.end()) return it->second;
    if (e.width() > kMaxSimWidth) {
      throw SimulationError(fmt::format("expression of width {} exceeds the simulator limit of {} bits",
                                        e.width(), kMaxSimWidth));
    }
    Node n;
    n.shape = e.shape();
    std::visit(overloaded{
                   [&](const detail::ConstNode& c) {
                     n.kind = Node::Const;
                     n.value = c.value;
                   },
                   [&](const detail::SignalNode& s) {
                     n.kind = Node::Sig;
                     n.slot = slot_for(s.signal);
                   },
                   [&](const detail::UnaryNode& u) {
                     n.kind = u.op == UnaryOp::Not ? Node::Not : Node::Neg;
                     n.a = compile(u.operand);
                   },
                   [&](const detail::BinaryNode& b) {
                     n.kind = Node::Bin;
                     n.op = b.op;
                     n.a = compile(b.lhs);
                     n.b = compile(b.rhs);
                   },
                   [&](const detail::MuxNode& m) {
                     n.kind = Node::Mux;
                     n.a = compile(m.cond);
                     n.b = compile(m.if_true);
                     n.c = compile(m.if_false);
                   },
                   [&](const detail::SliceNode& s) {
                     n.kind = Node::Slice;
                     n.a = compile(s.operand);
                     n.low = s.low;
                   },
                   [&](const detail::ConcatNode& c) {
                     n.kind = Node::Cat;
                     for (const auto& p : c.parts) n.parts.push_back(compile(p));
                   },
                   [&](const detail::ReplicateNode& r) {
                     n.kind = Node::Rep;
                     n.a = compile(r.operand);
                     n.count = r.count;
                   },
               },
               e.node().v);
    nodes.push_back(std::move(n));
    const int index = static_cast<int>(nodes.size()) - 1;
    memo.emplace(e.identity(), index);
    memo_keepalive.push_back(e);
    return index;
  }

  void compile_target(const Expr& t, std::vector<TargetPiece>& out) {
    std::visit(overloaded{
                   [&](const detail::SignalNode& s) { out.push_back({slot_for(s.signal), 0, s.signal.width()}); },
                   [&](const detail::SliceNode& s) {
                     const auto& sig = std::get<detail::SignalNode>(s.operand.node().v).signal;
                     out.push_back({slot_for(sig), s.low, s.high - s.low});
                   },
                   [&](const detail::ConcatNode& c) {
                     for (const auto& p : c.parts) compile_target(p, out);
                   },
                   [&](const auto&) { throw SimulationError("assignment to a non-assignable expression"); },
               },
               t.node().v);
  }

  std::vector<Stmt> compile_list(const StatementList& list) {
    std::vector<Stmt> out;
    for (const auto& s : list) {
      std::visit(overloaded{
                     [&](const Assign& a) {
                       Stmt st;
                       st.kind = Stmt::Assign;
                       compile_target(a.target, st.targets);
                       st.expr = compile(a.value);
                       out.push_back(std::move(st));
                     },
                     [&](const IfStmt& i) {
                       Stmt st;
                       st.kind = Stmt::If;
                       st.expr = compile(i.cond);
                       st.then_body = compile_list(i.then_body);
                       st.else_body = compile_list(i.else_body);
                       out.push_back(std::move(st));
                     },
                     [&](const CaseStmt& c) {
                       Stmt st;
                       st.kind = Stmt::Case;
                       st.expr = compile(c.selector);
                       st.selector_width = c.selector.width();
                       for (const auto& arm : c.arms) {
                         st.arms.emplace_back(mask_to(arm.value, st.selector_width), compile_list(arm.body));
                       }
                       st.else_body = compile_list(c.default_body);
                       out.push_back(std::move(st));
                     },
                 },
                 s.node);
    }
    return out;
  }

  void collect_node_reads(int index, std::vector<int>& out) const {
    const Node& n = nodes[static_cast<size_t>(index)];
    if (n.kind == Node::Sig) out.push_back(n.slot);
    for (int child : {n.a, n.b, n.c}) {
      if (child >= 0) collect_node_reads(child, out);
    }
    for (int p : n.parts) collect_node_reads(p, out);
  }

  void collect_reads(const std::vector<Stmt>& body, std::vector<int>& out) const {
    for (const auto& s : body) {
      collect_node_reads(s.expr, out);
      collect_reads(s.then_body, out);
      collect_reads(s.else_body, out);
      for (const auto& [_, arm] : s.arms) collect_reads(arm, out);
    }
  }

  // -- evaluation ----------------------------------------------------------

  // Reads see the committed values, except the current comb group's own
  // targets which are read from the in-progress scratch copy.
  int current_group = -1;

  uint64_t raw(int slot) const {
    const auto s = static_cast<size_t>(slot);
    if (current_group >= 0 && owner[s] == current_group) return scratch[s];
    return values[s];
  }

  i128 eval(int index) const {
    const Node& n = nodes[static_cast<size_t>(index)];
    switch (n.kind) {
      case Node::Const:
        return n.value;
      case Node::Sig:
        return interpret(raw(n.slot), n.shape);
      case Node::Not: {
        const i128 v = ~eval(n.a);
        return n.shape.is_signed ? v : static_cast<i128>(static_cast<u128>(v) & mask128(n.shape.width));
      }
      case Node::Neg:
        return -eval(n.a);
      case Node::Mux:
        return eval(n.a) != 0 ? eval(n.b) : eval(n.c);
      case Node::Slice: {
        const i128 v = eval(n.a) >> n.low;
        return static_cast<i128>(static_cast<u128>(v) & mask128(n.shape.width));
      }
      case Node::Cat: {
        u128 acc = 0;
        int offset = 0;
        for (int p : n.parts) {
          const Node& pn = nodes[static_cast<size_t>(p)];
          acc |= (static_cast<u128>(eval(p)) & mask128(pn.shape.width)) << offset;
          offset += pn.shape.width;
        }
        return static_cast<i128>(acc);
      }
      case Node::Rep: {
        const int w = nodes[static_cast<size_t>(n.a)].shape.width;
        const u128 part = static_cast<u128>(eval(n.a)) & mask128(w);
        u128 acc = 0;
        for (int i = 0; i < n.count; ++i) acc |= part << (i * w);
        return static_cast<i128>(acc);
      }
      case Node::Bin:
        break;
    }
    const i128 a = eval(n.a);
    const i128 b = eval(n.b);
    switch (n.op) {
      case BinaryOp::Add: return a + b;
      case BinaryOp::Sub: return a - b;
      case BinaryOp::Mul: return a * b;
      case BinaryOp::And: return a & b;
      case BinaryOp::Or: return a | b;
      case BinaryOp::Xor: return a ^ b;
      case BinaryOp::Shl:
      case BinaryOp::Shr: {
        const Shape bs = nodes[static_cast<size_t>(n.b)].shape;
        const u128 amount = static_cast<u128>(b) & mask128(bs.width);
        const int sh = amount > 127 ? 127 : static_cast<int>(amount);
        if (n.op == BinaryOp::Shl) return static_cast<i128>(static_cast<u128>(a) << sh);
        if (amount > 127) return a < 0 ? -1 : 0;
        return a >> sh;
      }
      case BinaryOp::Eq: return a == b;
      case BinaryOp::Ne: return a != b;
      case BinaryOp::Lt: return a < b;
      case BinaryOp::Le: return a <= b;
      case BinaryOp::Gt: return a > b;
      case BinaryOp::Ge: return a >= b;
    }
    return 0;
  }

  void exec(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
      switch (s.kind) {
        case Stmt::Assign: {
          const u128 bits = static_cast<u128>(eval(s.expr));
          int offset = 0;
          for (const auto& t : s.targets) {
            const uint64_t piece = static_cast<uint64_t>((bits >> offset) & mask128(t.width));
            const uint64_t m = mask64(t.width) << t.low;
            auto& slot = scratch[static_cast<size_t>(t.slot)];
            slot = (slot & ~m) | ((piece << t.low) & m);
            offset += t.width;
          }
          break;
        }
        case Stmt::If:
          exec(eval(s.expr) != 0 ? s.then_body : s.else_body);
          break;
        case Stmt::Case: {
          const auto sel = static_cast<uint64_t>(static_cast<u128>(eval(s.expr)) & mask128(s.selector_width));
          const std::vector<Stmt>* chosen = &s.else_body;
          for (const auto& [value, arm] : s.arms) {
            if (value == sel) {
              chosen = &arm;
              break;
            }
          }
          exec(*chosen);
          break;
        }
      }
    }
  }

  void mark_changed(int slot) {
    for (int g : readers[static_cast<size_t>(slot)]) {
      dirty[static_cast<size_t>(g)] = 1;
      any_dirty = true;
    }
  }

  void settle() {
    size_t passes = 0;
    std::vector<int> changed;
    while (any_dirty) {
      if (++passes > loop_bound) {
        throw CombLoopError(fmt::format(
            "CombLoop: combinational logic did not settle within {} iterations at cycle {}", loop_bound, time));
      }
      std::vector<char> run = std::move(dirty);
      dirty.assign(groups.size(), 0);
      any_dirty = false;
      changed.clear();
      for (size_t g = 0; g < groups.size(); ++g) {
        if (!run[g]) continue;
        current_group = static_cast<int>(g);
        exec(groups[g].body);
      }
      current_group = -1;
      for (size_t g = 0; g < groups.size(); ++g) {
        if (!run[g]) continue;
        for (int t : groups[g].targets) {
          const auto s = static_cast<size_t>(t);
          if (scratch[s] != values[s]) {
            values[s] = scratch[s];
            changed.push_back(t);
          }
        }
      }
      for (int t : changed) mark_changed(t);
    }
  }

  void tick_once(const std::string& domain) {
    settle();
    if (vcd) dump_vcd(10 * time + 5, false, domain);
    std::vector<std::pair<int, uint64_t>> commits;
    auto it = sync.find(domain);
    if (it != sync.end()) {
      exec(it->second.first);
      for (int s : it->second.second) {
        commits.emplace_back(s, scratch[static_cast<size_t>(s)]);
        scratch[static_cast<size_t>(s)] = values[static_cast<size_t>(s)];
      }
    }
    for (auto& mem : memories) {
      auto pit = mem.ports.find(domain);
      if (pit == mem.ports.end()) continue;
      for (const auto& p : pit->second) {
        const uint64_t adr = values[static_cast<size_t>(p.adr)];
        commits.emplace_back(p.dat_r, adr < mem.data.size() ? mem.data[adr] & mask64(shapes[static_cast<size_t>(p.dat_r)].width) : 0);
      }
      for (const auto& p : pit->second) {
        if (p.we < 0 || p.dat_w < 0 || values[static_cast<size_t>(p.we)] == 0) continue;
        const uint64_t adr = values[static_cast<size_t>(p.adr)];
        if (adr < mem.data.size()) mem.data[adr] = values[static_cast<size_t>(p.dat_w)] & mask64(mem.width);
      }
    }
    for (const auto& [slot, v] : commits) {
      const auto s = static_cast<size_t>(slot);
      if (values[s] != v) {
        values[s] = v;
        scratch[s] = v;
        mark_changed(slot);
      }
    }
    ++time;
    ++cycles[domain];
    settle();
    if (vcd) dump_vcd(10 * time, true, domain);
  }

  void dump_vcd(uint64_t t, bool edge, const std::string& domain) {
    for (const auto& [slot, handle] : vcd_vars) vcd->set(handle, values[static_cast<size_t>(slot)]);
    for (const auto& [slot, handle] : vcd_clock_slots) vcd->set(handle, 0);
    if (edge) {
      const int clk = slot_for(d.domain(domain).clk);
      auto c = vcd_clock_slots.find(clk);
      if (c != vcd_clock_slots.end()) vcd->set(c->second, 1);
    }
    vcd->sample(t);
  }
};

Simulator::Simulator(LoweredDesign design) : impl_(std::make_unique<Impl>(std::move(design))) {}

Simulator::Simulator(const Fragment& f, const std::vector<Signal>& boundary, const LowerOptions& options)
    : Simulator(lower(f, boundary, options)) {}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

void Simulator::write(const Signal& s, uint64_t value) {
  const int slot = impl_->slot_for(s);
  const auto i = static_cast<size_t>(slot);
  if (!impl_->writable[i]) {
    throw SimulationError(fmt::format("cannot write '{}': only boundary inputs may be written",
                                      impl_->d.names.name_of(s.id())));
  }
  const uint64_t v = value & mask64(s.width());
  if (impl_->values[i] == v) return;
  impl_->values[i] = v;
  impl_->scratch[i] = v;
  impl_->mark_changed(slot);
}

uint64_t Simulator::read(const Signal& s) {
  impl_->settle();
  return impl_->values[static_cast<size_t>(impl_->slot_for(s))];
}

int64_t Simulator::read_signed(const Signal& s) {
  return static_cast<int64_t>(interpret(read(s), s.shape()));
}

int64_t Simulator::evaluate(const Expr& e) {
  impl_->settle();
  const int index = impl_->compile(e);
  return static_cast<int64_t>(impl_->eval(index));
}

void Simulator::tick(const std::string& domain, int count) {
  impl_->d.domain(domain);
  for (int i = 0; i < count; ++i) impl_->tick_once(domain);
}

uint64_t Simulator::cycle(const std::string& domain) const {
  auto it = impl_->cycles.find(domain);
  if (it == impl_->cycles.end()) {
    throw UnresolvedDomainError(fmt::format("UnresolvedDomain: clock domain '{}' is not declared", domain));
  }
  return it->second;
}

uint64_t Simulator::time() const { return impl_->time; }

std::vector<Observation> Simulator::run(const Stimulus& stimulus) {
  std::vector<Observation> trace;
  for (const auto& action : stimulus) {
    std::visit(overloaded{
                   [&](const Write& w) { write(w.signal, w.value); },
                   [&](const Tick& t) { tick(t.domain, t.count); },
                   [&](const Expect& e) {
                     const uint64_t actual = read(e.signal);
                     const std::string& name = impl_->d.names.name_of(e.signal.id());
                     if (actual != e.expected) {
                       throw ExpectationError(fmt::format("expectation failed at cycle {}: {} expected {}, got {}",
                                                          impl_->time, name, e.expected, actual));
                     }
                     trace.push_back({impl_->time, name, actual});
                   },
                   [&](const Observe& o) {
                     trace.push_back({impl_->time, impl_->d.names.name_of(o.signal.id()), read(o.signal)});
                   },
               },
               action);
  }
  return trace;
}

void Simulator::trace(std::ostream& out) {
  auto& im = *impl_;
  im.vcd = std::make_unique<VcdWriter>(out);
  std::map<int, bool> clocks;
  for (const auto& cd : im.d.domains) clocks[im.slot_for(cd.clk)] = true;
  for (const auto& s : im.d.signals) {
    const int slot = im.slot_for(s);
    const int handle = im.vcd->declare(im.d.names.name_of(s.id()), s.width());
    if (clocks.count(slot)) {
      im.vcd_clock_slots.emplace(slot, handle);
    } else {
      im.vcd_vars.emplace_back(slot, handle);
    }
  }
  im.settle();
  for (const auto& [slot, handle] : im.vcd_vars) im.vcd->set(handle, im.values[static_cast<size_t>(slot)]);
  im.vcd->sample(10 * im.time);
}

const LoweredDesign& Simulator::design() const { return impl_->d; }

}  // namespace socgen::sim
