// SPDX-License-Identifier: Apache-2.0
#include "socgen/verilog.hpp"

#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace socgen {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

uint64_t mask_to(int64_t value, int width) {
  const auto v = static_cast<uint64_t>(value);
  return width >= 64 ? v : v & ((uint64_t{1} << width) - 1);
}

// Sized literal of `value` at `shape`; the value must fit.
std::string literal(int64_t value, Shape shape) {
  if (!shape.is_signed) return fmt::format("{}'d{}", shape.width, value);
  if (value >= 0) return fmt::format("{}'sd{}", shape.width, value);
  const uint64_t magnitude = uint64_t{0} - static_cast<uint64_t>(value);
  if (shape.width <= 64 && magnitude == (uint64_t{1} << (shape.width - 1))) {
    return fmt::format("$signed({}'d{})", shape.width, magnitude);
  }
  return fmt::format("(-{}'sd{})", shape.width, magnitude);
}

std::string range(int width) { return width == 1 ? "" : fmt::format("[{}:0] ", width - 1); }

std::string type_prefix(const char* kind, Shape shape) {
  return fmt::format("{}{} {}", kind, shape.is_signed ? " signed" : "", range(shape.width));
}

struct Rendered {
  std::string text;
  Shape shape;
};

class ExprEmitter {
 public:
  ExprEmitter(NameTable& names, std::vector<TempAssign>* temps) : names_(names), temps_(temps) {}

  Rendered render(const Expr& e) {
    return std::visit(
        overloaded{
            [&](const detail::ConstNode& c) { return Rendered{literal(c.value, c.shape), c.shape}; },
            [&](const detail::SignalNode& s) { return Rendered{names_.name_of(s.signal.id()), e.shape()}; },
            [&](const detail::UnaryNode& u) {
              const Shape r = e.shape();
              const std::string a = convert(u.operand, r);
              return Rendered{fmt::format("({}{})", u.op == UnaryOp::Not ? "~" : "-", a), r};
            },
            [&](const detail::BinaryNode& b) { return render_binary(b, e.shape()); },
            [&](const detail::MuxNode& m) {
              const Shape r = e.shape();
              const std::string c = render(m.cond).text;
              return Rendered{fmt::format("({} ? {} : {})", c, convert(m.if_true, r), convert(m.if_false, r)), r};
            },
            [&](const detail::SliceNode& s) { return render_slice(s.operand, s.low, s.high); },
            [&](const detail::ConcatNode& c) {
              std::string text = "{";
              for (size_t i = c.parts.size(); i-- > 0;) {
                text += render(c.parts[i]).text;
                if (i != 0) text += ", ";
              }
              return Rendered{text + "}", e.shape()};
            },
            [&](const detail::ReplicateNode& r) {
              return Rendered{fmt::format("{{{}{{{}}}}}", r.count, render(r.operand).text), e.shape()};
            },
        },
        e.node().v);
  }

  /// Renders `e` so that its self-determined width and signedness are
  /// exactly `target` while keeping its value; target must be at least as
  /// wide as the expression's own shape (wider by one for unsigned to
  /// signed).
  std::string convert(const Expr& e, Shape target) {
    if (const auto* c = std::get_if<detail::ConstNode>(&e.node().v)) return literal(c->value, target);
    const Rendered r = render(e);
    return convert(r, target);
  }

  std::string convert(const Rendered& r, Shape target) {
    const Shape s = r.shape;
    if (s == target) return r.text;
    const int k = target.width - s.width;
    if (!s.is_signed && !target.is_signed) return fmt::format("{{{}'d0, {}}}", k, r.text);
    if (!s.is_signed && target.is_signed) return fmt::format("$signed({{{}'d0, {}}})", k, r.text);
    if (s.is_signed && target.is_signed) {
      // Signed operands extend with the context, so a signed zero of the
      // target width is enough to fix the expression width.
      return fmt::format("({} + {})", r.text, literal(0, target));
    }
    throw AnalysisError("internal: signed to unsigned conversion requested");
  }

  /// Right-hand side for an assignment to a `width`-bit target.
  std::string assignment_value(const Expr& value, int width) {
    if (const auto* c = std::get_if<detail::ConstNode>(&value.node().v)) {
      const Shape same{width, c->shape.is_signed};
      if (fits(c->value, same)) return literal(c->value, same);
      if (fits(c->value, Shape{width, false})) return literal(c->value, Shape{width, false});
      return fmt::format("{}'d{}", width, mask_to(c->value, width));
    }
    const Rendered r = render(value);
    if (!r.shape.is_signed && r.shape.width < width) return convert(r, Shape{width, false});
    return r.text;
  }

  std::string target(const Expr& t) {
    return std::visit(
        overloaded{
            [&](const detail::SignalNode& s) { return names_.name_of(s.signal.id()); },
            [&](const detail::SliceNode& s) {
              const auto& sig = std::get<detail::SignalNode>(s.operand.node().v).signal;
              return part_select(names_.name_of(sig.id()), sig.width(), s.low, s.high);
            },
            [&](const detail::ConcatNode& c) {
              std::string text = "{";
              for (size_t i = c.parts.size(); i-- > 0;) {
                text += target(c.parts[i]);
                if (i != 0) text += ", ";
              }
              return text + "}";
            },
            [&](const auto&) -> std::string { throw AnalysisError("expression is not assignable"); },
        },
        t.node().v);
  }

 private:
  static std::string part_select(const std::string& name, int width, int low, int high) {
    if (low == 0 && high == width && width == 1) return name;
    if (high - low == 1) return fmt::format("{}[{}]", name, low);
    return fmt::format("{}[{}:{}]", name, high - 1, low);
  }

  Rendered render_slice(const Expr& operand, int low, int high) {
    const Shape r{high - low, false};
    if (const auto* c = std::get_if<detail::ConstNode>(&operand.node().v)) {
      const uint64_t bits = mask_to(c->value, c->shape.width) >> low;
      return {fmt::format("{}'d{}", r.width, mask_to(static_cast<int64_t>(bits), r.width)), r};
    }
    if (const auto* s = std::get_if<detail::SignalNode>(&operand.node().v)) {
      const std::string& name = names_.name_of(s->signal.id());
      if (low == 0 && high == s->signal.width()) {
        return {s->signal.is_signed() ? fmt::format("$unsigned({})", name) : name, r};
      }
      return {part_select(name, s->signal.width(), low, high), r};
    }
    if (temps_ == nullptr) throw AnalysisError("part-select of a compound expression needs a temporary");
    const Rendered inner = render(operand);
    const std::string name = names_.reserve("tmp");
    temps_->push_back({name, inner.shape, inner.text});
    if (low == 0 && high == inner.shape.width) {
      return {inner.shape.is_signed ? fmt::format("$unsigned({})", name) : name, r};
    }
    return {part_select(name, inner.shape.width, low, high), r};
  }

  Rendered render_binary(const detail::BinaryNode& b, Shape r) {
    const char* op = nullptr;
    switch (b.op) {
      case BinaryOp::Add: op = "+"; break;
      case BinaryOp::Sub: op = "-"; break;
      case BinaryOp::Mul: op = "*"; break;
      case BinaryOp::And: op = "&"; break;
      case BinaryOp::Or: op = "|"; break;
      case BinaryOp::Xor: op = "^"; break;
      case BinaryOp::Shl: op = "<<"; break;
      case BinaryOp::Shr: op = r.is_signed ? ">>>" : ">>"; break;
      case BinaryOp::Eq: op = "=="; break;
      case BinaryOp::Ne: op = "!="; break;
      case BinaryOp::Lt: op = "<"; break;
      case BinaryOp::Le: op = "<="; break;
      case BinaryOp::Gt: op = ">"; break;
      case BinaryOp::Ge: op = ">="; break;
    }
    if (b.op == BinaryOp::Shl || b.op == BinaryOp::Shr) {
      return {fmt::format("({} {} {})", convert(b.lhs, r), op, render(b.rhs).text), r};
    }
    Shape common = r;
    if (is_comparison(b.op)) {
      Shape x = b.lhs.shape();
      Shape y = b.rhs.shape();
      if (x.is_signed != y.is_signed) {
        if (!x.is_signed) x = {x.width + 1, true};
        if (!y.is_signed) y = {y.width + 1, true};
      }
      common = {std::max(x.width, y.width), x.is_signed};
    }
    return {fmt::format("({} {} {})", convert(b.lhs, common), op, convert(b.rhs, common)), r};
  }

  NameTable& names_;
  std::vector<TempAssign>* temps_;
};

class ModuleWriter {
 public:
  ModuleWriter(const LoweredDesign& d, std::string module_name)
      : d_(d), names_(d.names), module_name_(std::move(module_name)) {}

  EmittedModule run() {
    EmittedModule out;
    out.module_name = module_name_;
    for (const auto& p : d_.io_ports) {
      out.port_table.push_back({names_.name_of(p.signal.id()), p.direction, p.signal.width(), p.signal});
    }

    // Bodies are rendered first so temporaries are known before the
    // declarations are written.
    std::string body;
    for (const auto& g : d_.comb_groups) {
      std::string block;
      const size_t first_temp = block_temps_.size();
      statements(g.body, 1, "=", block);
      // temporaries get a default so partial branches do not infer latches
      std::string defaults;
      for (size_t i = first_temp; i < block_temps_.size(); ++i) {
        defaults += fmt::format("\t{} = {};\n", block_temps_[i].name, literal(0, block_temps_[i].shape));
      }
      body += "always @(*) begin\n" + defaults + block + "end\n\n";
    }
    for (const auto& sp : d_.sync_processes) {
      std::string block;
      statements(sp.body, 1, "<=", block);
      body += fmt::format("always @(posedge {}) begin\n{}end\n\n", names_.name_of(sp.domain.clk.id()), block);
    }
    std::string specials;
    for (const auto& s : d_.specials) {
      std::visit(overloaded{[&](const Memory& m) { memory(m, specials); },
                            [&](const ExternalInstance& i) { instance(i, specials); }},
                 s);
    }

    std::string text = fmt::format("// Generated by socgen {}\n\n", socgen_version());
    if (d_.io_ports.empty()) {
      text += fmt::format("module {}();\n", module_name_);
    } else {
      text += fmt::format("module {}(\n", module_name_);
      for (size_t i = 0; i < d_.io_ports.size(); ++i) {
        text += "\t" + port_declaration(d_.io_ports[i]) + (i + 1 < d_.io_ports.size() ? ",\n" : "\n");
      }
      text += ");\n";
    }
    text += "\n";

    std::string decls;
    std::string initials;
    std::unordered_set<uint64_t> ports;
    for (const auto& p : d_.io_ports) {
      ports.insert(p.signal.id());
      const bool registered = d_.role(p.signal) == SignalRole::Sync || d_.role(p.signal) == SignalRole::Memory;
      if (p.direction == PortDirection::Out && registered) {
        initials += fmt::format("initial {} = {};\n", names_.name_of(p.signal.id()),
                                literal(p.signal.reset(), p.signal.shape()));
      }
    }
    for (const auto& s : d_.signals) {
      if (ports.count(s.id())) continue;
      decls += internal_declaration(s);
    }
    for (const auto& t : block_temps_) decls += fmt::format("{}{};\n", type_prefix("reg", t.shape), t.name);
    for (const auto& t : wire_temps_) decls += fmt::format("{}{};\n", type_prefix("wire", t.shape), t.name);
    for (const auto& m : memory_decls_) decls += m;
    if (!decls.empty()) text += decls + "\n";
    if (!initials.empty()) text += initials + "\n";
    for (const auto& t : wire_temps_) text += fmt::format("assign {} = {};\n", t.name, t.text);
    if (!wire_temps_.empty()) text += "\n";
    text += body;
    text += specials;
    text += "endmodule\n";

    out.text = std::move(text);
    out.identifiers = names_.used();
    return out;
  }

 private:
  bool is_reg(const Signal& s) const {
    switch (d_.role(s)) {
      case SignalRole::Comb:
      case SignalRole::Sync:
      case SignalRole::Memory:
        return true;
      default:
        return false;
    }
  }

  std::string port_declaration(const IoPort& p) {
    const std::string& name = names_.name_of(p.signal.id());
    switch (p.direction) {
      case PortDirection::In:
        return type_prefix("input wire", p.signal.shape()) + name;
      case PortDirection::InOut:
        return type_prefix("inout wire", p.signal.shape()) + name;
      case PortDirection::Out:
        return type_prefix(is_reg(p.signal) ? "output reg" : "output wire", p.signal.shape()) + name;
    }
    return name;
  }

  std::string internal_declaration(const Signal& s) {
    const std::string& name = names_.name_of(s.id());
    const std::string init = literal(s.reset(), s.shape());
    switch (d_.role(s)) {
      case SignalRole::Comb:
        return fmt::format("{}{};\n", type_prefix("reg", s.shape()), name);
      case SignalRole::Sync:
      case SignalRole::Memory:
        return fmt::format("{}{} = {};\n", type_prefix("reg", s.shape()), name, init);
      case SignalRole::Instance:
      case SignalRole::InOut:
        return fmt::format("{}{};\n", type_prefix("wire", s.shape()), name);
      case SignalRole::Input:
      case SignalRole::Constant:
        break;
    }
    return fmt::format("{}{} = {};\n", type_prefix("wire", s.shape()), name, init);
  }

  static std::string indent(int level) { return std::string(static_cast<size_t>(level), '\t'); }

  // Renders an expression inside a procedural block; temporaries become
  // blocking assignments placed before the statement that uses them.
  std::string block_expr(const Expr& e, int level, std::string& out, bool as_value_of = false,
                         int width = 0) {
    std::vector<TempAssign> temps;
    ExprEmitter em(names_, &temps);
    std::string text = as_value_of ? em.assignment_value(e, width) : em.render(e).text;
    for (const auto& t : temps) {
      out += fmt::format("{}{} = {};\n", indent(level), t.name, t.text);
      block_temps_.push_back(t);
    }
    return text;
  }

  void statements(const StatementList& list, int level, const char* op, std::string& out) {
    for (const auto& s : list) {
      std::visit(
          overloaded{
              [&](const Assign& a) {
                const std::string value = block_expr(a.value, level, out, true, a.target.width());
                ExprEmitter em(names_, nullptr);
                out += fmt::format("{}{} {} {};\n", indent(level), em.target(a.target), op, value);
              },
              [&](const IfStmt& i) {
                const std::string cond = block_expr(i.cond, level, out);
                out += fmt::format("{}if ({}) begin\n", indent(level), cond);
                statements(i.then_body, level + 1, op, out);
                if (!i.else_body.empty()) {
                  out += indent(level) + "end else begin\n";
                  statements(i.else_body, level + 1, op, out);
                }
                out += indent(level) + "end\n";
              },
              [&](const CaseStmt& c) {
                const std::string sel = block_expr(c.selector, level, out);
                const int w = c.selector.width();
                out += fmt::format("{}case ({})\n", indent(level), sel);
                for (const auto& arm : c.arms) {
                  out += fmt::format("{}{}'d{}: begin\n", indent(level + 1), w, mask_to(arm.value, w));
                  statements(arm.body, level + 2, op, out);
                  out += indent(level + 1) + "end\n";
                }
                if (!c.default_body.empty()) {
                  out += indent(level + 1) + "default: begin\n";
                  statements(c.default_body, level + 2, op, out);
                  out += indent(level + 1) + "end\n";
                }
                out += indent(level) + "endcase\n";
              },
          },
          s.node);
    }
  }

  void memory(const Memory& m, std::string& out) {
    const std::string name = names_.reserve(m.name);
    memory_decls_.push_back(fmt::format("reg {}{}[0:{}];\n", range(m.width), name, m.depth - 1));
    out += "initial begin\n";
    if (static_cast<int>(m.init.size()) < m.depth) {
      const std::string i = names_.reserve("i");
      memory_decls_.push_back(fmt::format("integer {};\n", i));
      out += fmt::format("\tfor ({0} = 0; {0} < {1}; {0} = {0} + 1)\n\t\t{2}[{0}] = {3}'d0;\n", i, m.depth, name,
                         m.width);
    }
    for (size_t a = 0; a < m.init.size(); ++a) {
      out += fmt::format("\t{}[{}] = {}'h{:x};\n", name, a, m.width, m.init[a]);
    }
    out += "end\n\n";
    for (const auto& p : m.ports) {
      const ClockDomain& cd = d_.domain(p.domain);
      const std::string& adr = names_.name_of(p.adr.id());
      out += fmt::format("always @(posedge {}) begin\n", names_.name_of(cd.clk.id()));
      if (p.we && p.dat_w) {
        out += fmt::format("\tif ({}) {}[{}] <= {};\n", names_.name_of(p.we->id()), name, adr,
                           names_.name_of(p.dat_w->id()));
      }
      out += fmt::format("\t{} <= {}[{}];\nend\n\n", names_.name_of(p.dat_r.id()), name, adr);
    }
  }

  void instance(const ExternalInstance& inst, std::string& out) {
    const std::string name = names_.reserve(inst.instance_name);
    out += inst.module_name;
    if (!inst.parameters.empty()) {
      out += " #(\n";
      for (size_t i = 0; i < inst.parameters.size(); ++i) {
        const auto& [key, value] = inst.parameters[i];
        std::string v = std::visit(overloaded{
                                       [](int64_t n) {
                                         if (n >= INT32_MIN && n <= INT32_MAX) return fmt::format("{}", n);
                                         return literal(n, Shape{64, true});
                                       },
                                       [](const std::string& s) { return fmt::format("\"{}\"", s); },
                                   },
                                   value);
        out += fmt::format("\t.{}({}){}\n", key, v, i + 1 < inst.parameters.size() ? "," : "");
      }
      out += ")";
    }
    out += fmt::format(" {} (\n", name);
    for (size_t i = 0; i < inst.connections.size(); ++i) {
      const auto& c = inst.connections[i];
      std::string text;
      if (c.direction == PortDirection::In) {
        ExprEmitter em(names_, &wire_temps_);
        text = em.render(c.value).text;
      } else {
        ExprEmitter em(names_, nullptr);
        text = em.target(c.value);
      }
      out += fmt::format("\t.{}({}){}\n", c.port, text, i + 1 < inst.connections.size() ? "," : "");
    }
    out += ");\n\n";
  }

  const LoweredDesign& d_;
  NameTable names_;
  std::string module_name_;
  std::vector<TempAssign> block_temps_;
  std::vector<TempAssign> wire_temps_;
  std::vector<std::string> memory_decls_;
};

}  // namespace

const char* socgen_version() { return SOCGEN_VERSION; }

std::string emit_expression(const Expr& e, NameTable& names, std::vector<TempAssign>* temps) {
  ExprEmitter em(names, temps);
  return em.render(e).text;
}

std::string emit_expression(const Expr& e, const NameTable& names) {
  NameTable copy = names;
  return emit_expression(e, copy, nullptr);
}

EmittedModule emit_verilog(const LoweredDesign& d, const std::string& module_name) {
  return ModuleWriter(d, module_name).run();
}

}  // namespace socgen
