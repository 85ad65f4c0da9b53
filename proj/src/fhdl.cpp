// SPDX-License-Identifier: Apache-2.0
#include "socgen/fhdl.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

namespace socgen {

namespace {

std::atomic<uint64_t> next_signal_id{1};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int signed_bits_for(int64_t value) {
  // Smallest w with -2^(w-1) <= value < 2^(w-1).
  for (int w = 1; w < 64; ++w) {
    const int64_t lo = -(int64_t{1} << (w - 1));
    const int64_t hi = (int64_t{1} << (w - 1)) - 1;
    if (value >= lo && value <= hi) return w;
  }
  return 64;
}

}  // namespace

int bits_for(int64_t n) {
  if (n < 0) throw ConstructionError(fmt::format("bits_for: negative argument {}", n));
  int w = 1;
  while (w < 64 && (static_cast<uint64_t>(n) >> w) != 0) ++w;
  return w;
}

Shape shape_of_constant(int64_t value) {
  if (value >= 0) return {bits_for(value), false};
  return {signed_bits_for(value), true};
}

bool fits(int64_t value, Shape shape) {
  if (shape.width >= 64) {
    return shape.is_signed || value >= 0;
  }
  if (shape.is_signed) {
    const int64_t lo = -(int64_t{1} << (shape.width - 1));
    const int64_t hi = (int64_t{1} << (shape.width - 1)) - 1;
    return value >= lo && value <= hi;
  }
  return value >= 0 && value < (int64_t{1} << shape.width);
}

// ---------------------------------------------------------------------------
// Signal

Signal::Signal(std::string name_hint, int width, bool is_signed, int64_t reset) {
  if (width < 1) {
    throw ConstructionError(fmt::format("signal '{}': width must be >= 1, got {}", name_hint, width));
  }
  if (width > 64) {
    throw ConstructionError(fmt::format("signal '{}': widths above 64 bits are not supported", name_hint));
  }
  const Shape shape{width, is_signed};
  if (!fits(reset, shape)) {
    throw ConstructionError(fmt::format("signal '{}': reset value {} does not fit in {} {} bits",
                                        name_hint, reset, width, is_signed ? "signed" : "unsigned"));
  }
  data_ = std::make_shared<const detail::SignalData>(
      detail::SignalData{next_signal_id.fetch_add(1), std::move(name_hint), shape, reset});
}

Signal make_signal(std::string name_hint, WidthSpec width, bool is_signed, int64_t reset) {
  return std::visit(
      overloaded{
          [&](BitWidth w) { return Signal(std::move(name_hint), w.bits, is_signed, reset); },
          [&](MaxValue m) {
            if (m.value <= 0) {
              throw ConstructionError(
                  fmt::format("signal '{}': max must be >= 1, got {}", name_hint, m.value));
            }
            return Signal(std::move(name_hint), bits_for(m.value - 1), false, reset);
          },
          [&](ValueRange r) {
            if (r.lo > r.hi) {
              throw ConstructionError(
                  fmt::format("signal '{}': empty range {}..{}", name_hint, r.lo, r.hi));
            }
            if (r.lo < 0) {
              const int w = std::max(signed_bits_for(r.lo), signed_bits_for(r.hi));
              return Signal(std::move(name_hint), w, true, reset);
            }
            return Signal(std::move(name_hint), bits_for(r.hi), false, reset);
          },
      },
      width);
}

Statement Signal::eq(const Expr& value) const { return socgen::eq(Expr(*this), value); }
Expr Signal::slice(int low, int high) const { return Expr(*this).slice(low, high); }
Expr Signal::operator[](int bit) const { return Expr(*this)[bit]; }

// ---------------------------------------------------------------------------
// Shape rules

namespace {

// Mixed signedness: the unsigned side gains a bit and becomes signed.
std::pair<Shape, Shape> promote(Shape a, Shape b) {
  if (a.is_signed == b.is_signed) return {a, b};
  if (!a.is_signed) a = {a.width + 1, true};
  if (!b.is_signed) b = {b.width + 1, true};
  return {a, b};
}

constexpr int kMaxExprWidth = 1 << 16;

Shape checked(Shape s) {
  if (s.width > kMaxExprWidth) {
    throw ConstructionError(fmt::format("expression width {} exceeds limit {}", s.width, kMaxExprWidth));
  }
  return s;
}

}  // namespace

Shape unary_shape(UnaryOp op, Shape a) {
  switch (op) {
    case UnaryOp::Not:
      return a;
    case UnaryOp::Neg:
      return checked({a.width + 1, true});
  }
  return a;
}

Shape binary_shape(BinaryOp op, Shape a, Shape b, std::optional<int64_t> shift_constant) {
  switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Sub: {
      if (!a.is_signed && !b.is_signed) {
        return checked({std::max(a.width, b.width) + 1, op == BinaryOp::Sub});
      }
      auto [pa, pb] = promote(a, b);
      return checked({std::max(pa.width, pb.width) + 1, true});
    }
    case BinaryOp::Mul:
      return checked({a.width + b.width, a.is_signed || b.is_signed});
    case BinaryOp::And:
    case BinaryOp::Or:
    case BinaryOp::Xor: {
      auto [pa, pb] = promote(a, b);
      return {std::max(pa.width, pb.width), pa.is_signed};
    }
    case BinaryOp::Shl:
      if (shift_constant) return checked({a.width + static_cast<int>(*shift_constant), a.is_signed});
      if (b.width > 16) throw ConstructionError("shift amount wider than 16 bits");
      return checked({a.width + (1 << b.width) - 1, a.is_signed});
    case BinaryOp::Shr:
      return a;
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
      return {1, false};
  }
  return a;
}

Shape mux_shape(Shape t, Shape f) {
  const bool one_signed = t.is_signed != f.is_signed;
  return {std::max(t.width, f.width) + (one_signed ? 1 : 0), t.is_signed || f.is_signed};
}

const char* to_string(UnaryOp op) {
  switch (op) {
    case UnaryOp::Not: return "not";
    case UnaryOp::Neg: return "neg";
  }
  return "?";
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "add";
    case BinaryOp::Sub: return "sub";
    case BinaryOp::Mul: return "mul";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    case BinaryOp::Xor: return "xor";
    case BinaryOp::Shl: return "shl";
    case BinaryOp::Shr: return "shr";
    case BinaryOp::Eq: return "eq";
    case BinaryOp::Ne: return "ne";
    case BinaryOp::Lt: return "lt";
    case BinaryOp::Le: return "le";
    case BinaryOp::Gt: return "gt";
    case BinaryOp::Ge: return "ge";
  }
  return "?";
}

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
      return true;
    default:
      return false;
  }
}

const char* to_string(PortDirection dir) {
  switch (dir) {
    case PortDirection::In: return "in";
    case PortDirection::Out: return "out";
    case PortDirection::InOut: return "inout";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Expressions

namespace {

Expr make(detail::ExprNode node) {
  return Expr(std::make_shared<const detail::ExprNode>(std::move(node)));
}

}  // namespace

Expr::Expr(const Signal& signal)
    : node_(std::make_shared<const detail::ExprNode>(
          detail::ExprNode{detail::SignalNode{signal}, signal.shape()})) {}

std::shared_ptr<const detail::ExprNode> Expr::constant_node(int64_t value) {
  const Shape shape = shape_of_constant(value);
  return std::make_shared<const detail::ExprNode>(detail::ExprNode{detail::ConstNode{value, shape}, shape});
}

Shape Expr::shape() const { return node_->shape; }

Expr Const(int64_t value) { return Expr(value); }

Expr Const(int64_t value, Shape shape) {
  if (shape.width < 1 || shape.width > 64 || !fits(value, shape)) {
    throw ConstructionError(fmt::format("constant {} does not fit in {} {} bits", value, shape.width,
                                        shape.is_signed ? "signed" : "unsigned"));
  }
  return make({detail::ConstNode{value, shape}, shape});
}

Expr Expr::slice(int low, int high) const {
  const int w = width();
  if (low < 0 || low >= high || high > w) {
    throw ConstructionError(fmt::format("slice [{}:{}) out of range for width {}", low, high, w));
  }
  if (const auto* inner = std::get_if<detail::SliceNode>(&node_->v)) {
    return inner->operand.slice(inner->low + low, inner->low + high);
  }
  return make({detail::SliceNode{*this, low, high}, Shape{high - low, false}});
}

bool Expr::is_assignable() const {
  return std::visit(overloaded{
                        [](const detail::SignalNode&) { return true; },
                        [](const detail::SliceNode& s) {
                          return std::holds_alternative<detail::SignalNode>(s.operand.node().v);
                        },
                        [](const detail::ConcatNode& c) {
                          return std::all_of(c.parts.begin(), c.parts.end(),
                                             [](const Expr& p) { return p.is_assignable(); });
                        },
                        [](const auto&) { return false; },
                    },
                    node_->v);
}

Statement Expr::eq(const Expr& value) const { return socgen::eq(*this, value); }

Expr unary(UnaryOp op, const Expr& operand) {
  return make({detail::UnaryNode{op, operand}, unary_shape(op, operand.shape())});
}

Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
  std::optional<int64_t> shift_constant;
  if (op == BinaryOp::Shl || op == BinaryOp::Shr) {
    if (const auto* c = std::get_if<detail::ConstNode>(&rhs.node().v)) {
      if (c->value < 0) throw ConstructionError("negative constant shift amount");
      shift_constant = c->value;
    }
  }
  return make({detail::BinaryNode{op, lhs, rhs}, binary_shape(op, lhs.shape(), rhs.shape(), shift_constant)});
}

Expr mux(const Expr& cond, const Expr& if_true, const Expr& if_false) {
  return make({detail::MuxNode{cond, if_true, if_false}, mux_shape(if_true.shape(), if_false.shape())});
}

Expr cat(std::vector<Expr> parts) {
  if (parts.empty()) throw ConstructionError("cat of zero parts");
  int width = 0;
  for (const auto& p : parts) width += p.width();
  return make({detail::ConcatNode{std::move(parts)}, checked({width, false})});
}

Expr replicate(const Expr& operand, int count) {
  if (count < 1) throw ConstructionError(fmt::format("replicate count must be >= 1, got {}", count));
  return make({detail::ReplicateNode{operand, count}, checked({operand.width() * count, false})});
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.identity() == b.identity()) return true;
  const auto& na = a.node();
  const auto& nb = b.node();
  if (na.v.index() != nb.v.index() || na.shape != nb.shape) return false;
  return std::visit(
      overloaded{
          [&](const detail::ConstNode& x) {
            return x.value == std::get<detail::ConstNode>(nb.v).value;
          },
          [&](const detail::SignalNode& x) {
            return x.signal.same_as(std::get<detail::SignalNode>(nb.v).signal);
          },
          [&](const detail::UnaryNode& x) {
            const auto& y = std::get<detail::UnaryNode>(nb.v);
            return x.op == y.op && structurally_equal(x.operand, y.operand);
          },
          [&](const detail::BinaryNode& x) {
            const auto& y = std::get<detail::BinaryNode>(nb.v);
            return x.op == y.op && structurally_equal(x.lhs, y.lhs) && structurally_equal(x.rhs, y.rhs);
          },
          [&](const detail::MuxNode& x) {
            const auto& y = std::get<detail::MuxNode>(nb.v);
            return structurally_equal(x.cond, y.cond) && structurally_equal(x.if_true, y.if_true) &&
                   structurally_equal(x.if_false, y.if_false);
          },
          [&](const detail::SliceNode& x) {
            const auto& y = std::get<detail::SliceNode>(nb.v);
            return x.low == y.low && x.high == y.high && structurally_equal(x.operand, y.operand);
          },
          [&](const detail::ConcatNode& x) {
            const auto& y = std::get<detail::ConcatNode>(nb.v);
            if (x.parts.size() != y.parts.size()) return false;
            for (size_t i = 0; i < x.parts.size(); ++i) {
              if (!structurally_equal(x.parts[i], y.parts[i])) return false;
            }
            return true;
          },
          [&](const detail::ReplicateNode& x) {
            const auto& y = std::get<detail::ReplicateNode>(nb.v);
            return x.count == y.count && structurally_equal(x.operand, y.operand);
          },
      },
      na.v);
}

void collect_signals(const Expr& e, std::vector<Signal>& out) {
  std::visit(overloaded{
                 [](const detail::ConstNode&) {},
                 [&](const detail::SignalNode& x) { out.push_back(x.signal); },
                 [&](const detail::UnaryNode& x) { collect_signals(x.operand, out); },
                 [&](const detail::BinaryNode& x) {
                   collect_signals(x.lhs, out);
                   collect_signals(x.rhs, out);
                 },
                 [&](const detail::MuxNode& x) {
                   collect_signals(x.cond, out);
                   collect_signals(x.if_true, out);
                   collect_signals(x.if_false, out);
                 },
                 [&](const detail::SliceNode& x) { collect_signals(x.operand, out); },
                 [&](const detail::ConcatNode& x) {
                   for (const auto& p : x.parts) collect_signals(p, out);
                 },
                 [&](const detail::ReplicateNode& x) { collect_signals(x.operand, out); },
             },
             e.node().v);
}

// ---------------------------------------------------------------------------
// Statements

Statement eq(const Expr& target, const Expr& value) {
  if (!target.is_assignable()) {
    throw ConstructionError("assignment target must be a signal, a slice of a signal, or a concatenation of those");
  }
  return Statement{Assign{target, value}};
}

If::If(Expr cond, StatementList then_body) { branches_.emplace_back(std::move(cond), std::move(then_body)); }

If& If::Elif(Expr cond, StatementList body) {
  branches_.emplace_back(std::move(cond), std::move(body));
  return *this;
}

If& If::Else(StatementList body) {
  else_body_ = std::move(body);
  return *this;
}

If::operator Statement() const {
  StatementList tail = else_body_;
  for (auto it = branches_.rbegin(); it != branches_.rend(); ++it) {
    Statement s{IfStmt{it->first, it->second, std::move(tail)}};
    tail = StatementList{std::move(s)};
  }
  return tail.front();
}

Statement Case(const Expr& selector, std::vector<CaseArm> arms, StatementList default_body) {
  std::set<int64_t> seen;
  for (const auto& arm : arms) {
    if (!fits(arm.value, selector.shape())) {
      throw ConstructionError(fmt::format("case constant {} is not representable in the {}-bit selector",
                                          arm.value, selector.width()));
    }
    if (!seen.insert(arm.value).second) {
      throw ConstructionError(fmt::format("duplicate case constant {}", arm.value));
    }
  }
  return Statement{CaseStmt{selector, std::move(arms), std::move(default_body)}};
}

std::vector<Signal> target_signals(const Expr& target) {
  std::vector<Signal> out;
  collect_signals(target, out);
  return out;
}

namespace {

void collect_assigned(const StatementList& statements, std::vector<Signal>& out,
                      std::unordered_set<uint64_t>& seen) {
  for (const auto& s : statements) {
    std::visit(overloaded{
                   [&](const Assign& a) {
                     for (const auto& sig : target_signals(a.target)) {
                       if (seen.insert(sig.id()).second) out.push_back(sig);
                     }
                   },
                   [&](const IfStmt& i) {
                     collect_assigned(i.then_body, out, seen);
                     collect_assigned(i.else_body, out, seen);
                   },
                   [&](const CaseStmt& c) {
                     for (const auto& arm : c.arms) collect_assigned(arm.body, out, seen);
                     collect_assigned(c.default_body, out, seen);
                   },
               },
               s.node);
  }
}

}  // namespace

std::vector<Signal> assigned_signals(const StatementList& statements) {
  std::vector<Signal> out;
  std::unordered_set<uint64_t> seen;
  collect_assigned(statements, out, seen);
  return out;
}

// ---------------------------------------------------------------------------
// Clock domains and specials

ClockDomain::ClockDomain(std::string name_, bool reset_synchronous_)
    : name(std::move(name_)),
      clk(name + "_clk"),
      rst(name + "_rst"),
      reset_synchronous(reset_synchronous_) {
  if (name.empty()) throw ConstructionError("clock domain name must not be empty");
}

void validate_special(const Special& special) {
  std::visit(
      overloaded{
          [](const Memory& m) {
            if (m.width < 1 || m.width > 64) {
              throw ConstructionError(fmt::format("memory '{}': width {} out of range", m.name, m.width));
            }
            if (m.depth < 1) throw ConstructionError(fmt::format("memory '{}': depth must be >= 1", m.name));
            if (static_cast<int64_t>(m.init.size()) > m.depth) {
              throw ConstructionError(fmt::format("memory '{}': {} init words exceed depth {}", m.name,
                                                  m.init.size(), m.depth));
            }
            const uint64_t limit = m.width == 64 ? ~uint64_t{0} : (uint64_t{1} << m.width) - 1;
            for (uint64_t v : m.init) {
              if (v > limit) {
                throw ConstructionError(
                    fmt::format("memory '{}': init value {:#x} wider than {} bits", m.name, v, m.width));
              }
            }
            const int adr_bits = bits_for(m.depth - 1);
            for (const auto& p : m.ports) {
              if (p.adr.width() < adr_bits) {
                throw ConstructionError(fmt::format("memory '{}': address port narrower than {} bits",
                                                    m.name, adr_bits));
              }
              if (p.dat_r.width() != m.width) {
                throw ConstructionError(fmt::format("memory '{}': read port width mismatch", m.name));
              }
              if (p.we.has_value() != p.dat_w.has_value()) {
                throw ConstructionError(fmt::format("memory '{}': write port needs both we and dat_w", m.name));
              }
              if (p.dat_w && p.dat_w->width() != m.width) {
                throw ConstructionError(fmt::format("memory '{}': write port width mismatch", m.name));
              }
            }
          },
          [](const ExternalInstance& inst) {
            if (inst.module_name.empty()) throw ConstructionError("external instance needs a module name");
            for (const auto& c : inst.connections) {
              if (c.direction != PortDirection::In &&
                  !std::holds_alternative<detail::SignalNode>(c.value.node().v)) {
                throw ConstructionError(fmt::format("instance '{}': {} port '{}' must connect to a signal",
                                                    inst.module_name, to_string(c.direction), c.port));
              }
            }
          },
      },
      special);
}

// ---------------------------------------------------------------------------
// Module

void Module::check_open() const {
  if (finalized_) throw ConstructionError("module is finalized; no further content may be added");
}

void Module::comb(Statement statement) {
  check_open();
  comb_.push_back(std::move(statement));
}

void Module::comb(StatementList statements) {
  check_open();
  for (auto& s : statements) comb_.push_back(std::move(s));
}

void Module::sync(Statement statement) { sync("sys", StatementList{std::move(statement)}); }
void Module::sync(StatementList statements) { sync("sys", std::move(statements)); }

void Module::sync(const std::string& domain, StatementList statements) {
  check_open();
  auto it = std::find_if(sync_.begin(), sync_.end(), [&](const auto& p) { return p.first == domain; });
  if (it == sync_.end()) {
    sync_.emplace_back(domain, StatementList{});
    it = std::prev(sync_.end());
  }
  for (auto& s : statements) it->second.push_back(std::move(s));
}

void Module::add_submodule(const std::string& name, std::shared_ptr<Module> module) {
  check_open();
  if (!module) throw ConstructionError(fmt::format("submodule '{}' is null", name));
  for (const auto& [existing, _] : submodules_) {
    if (existing == name) throw ConstructionError(fmt::format("duplicate submodule name '{}'", name));
  }
  submodules_.emplace_back(name, std::move(module));
}

void Module::special(Special special) {
  check_open();
  validate_special(special);
  specials_.push_back(std::move(special));
}

ClockDomain& Module::clock_domain(ClockDomain domain) {
  check_open();
  clock_domains_.push_back(std::move(domain));
  return clock_domains_.back();
}

// ---------------------------------------------------------------------------
// Finalize

class Finalizer {
 public:
  Fragment run(Module& root) {
    visit(root, "top");
    for (Module* m : visited_order_) m->finalized_ = true;
    collect_fragment_signals();
    return std::move(fragment_);
  }

 private:
  void visit(Module& m, const std::string& path) {
    if (!visited_.insert(&m).second) {
      throw ElaborationError(fmt::format("module instance reused in hierarchy at '{}'", path));
    }
    visited_order_.push_back(&m);
    for (const auto& s : m.comb_) fragment_.comb.push_back(s);
    for (const auto& [domain, stmts] : m.sync_) {
      auto& target = fragment_.sync[domain];
      target.insert(target.end(), stmts.begin(), stmts.end());
    }
    for (const auto& sp : m.specials_) fragment_.specials.push_back(sp);
    for (const auto& cd : m.clock_domains_) {
      for (const auto& existing : fragment_.clock_domains) {
        if (existing.name == cd.name) {
          throw ElaborationError(fmt::format("duplicate clock domain '{}'", cd.name));
        }
      }
      fragment_.clock_domains.push_back(cd);
    }
    for (const auto& [name, child] : m.submodules_) visit(*child, path + "." + name);
  }

  void add(const Signal& s) {
    if (seen_.insert(s.id()).second) fragment_.signals.push_back(s);
  }

  void add_expr(const Expr& e) {
    std::vector<Signal> sigs;
    collect_signals(e, sigs);
    for (const auto& s : sigs) add(s);
  }

  void add_statements(const StatementList& list) {
    for (const auto& st : list) {
      std::visit(overloaded{
                     [&](const Assign& a) {
                       add_expr(a.target);
                       add_expr(a.value);
                     },
                     [&](const IfStmt& i) {
                       add_expr(i.cond);
                       add_statements(i.then_body);
                       add_statements(i.else_body);
                     },
                     [&](const CaseStmt& c) {
                       add_expr(c.selector);
                       for (const auto& arm : c.arms) add_statements(arm.body);
                       add_statements(c.default_body);
                     },
                 },
                 st.node);
    }
  }

  void collect_fragment_signals() {
    add_statements(fragment_.comb);
    for (const auto& [_, stmts] : fragment_.sync) add_statements(stmts);
    for (const auto& sp : fragment_.specials) {
      std::visit(overloaded{
                     [&](const Memory& m) {
                       for (const auto& p : m.ports) {
                         add(p.adr);
                         add(p.dat_r);
                         if (p.we) add(*p.we);
                         if (p.dat_w) add(*p.dat_w);
                       }
                     },
                     [&](const ExternalInstance& inst) {
                       for (const auto& c : inst.connections) add_expr(c.value);
                     },
                 },
                 sp);
    }
    for (const auto& cd : fragment_.clock_domains) {
      add(cd.clk);
      add(cd.rst);
    }
  }

  Fragment fragment_;
  std::unordered_set<const Module*> visited_;
  std::vector<Module*> visited_order_;
  std::unordered_set<uint64_t> seen_;
};

Fragment finalize(Module& root) {
  return Finalizer().run(root);
}

}  // namespace socgen
