// SPDX-License-Identifier: Apache-2.0
//
// Design description data model: signals, expression trees, statements,
// clock domains, specials and the module hierarchy, plus the finalizer that
// flattens a module tree into a Fragment.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "socgen/error.hpp"

namespace socgen {

struct Shape {
  int width = 1;
  bool is_signed = false;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Smallest width w >= 1 with n < 2^w.
int bits_for(int64_t n);

/// Minimal shape holding `value`; negative values get a sign bit.
Shape shape_of_constant(int64_t value);

/// True if `value` lies in the range of `shape`.
bool fits(int64_t value, Shape shape);

// Width specifications accepted by make_signal.
struct BitWidth {
  int bits;
};
/// Exclusive upper bound; the signal holds 0 .. value-1.
struct MaxValue {
  int64_t value;
};
/// Inclusive range; the signal is signed when `lo` is negative.
struct ValueRange {
  int64_t lo;
  int64_t hi;
};
using WidthSpec = std::variant<BitWidth, MaxValue, ValueRange>;

namespace detail {
struct SignalData {
  uint64_t id;
  std::string name_hint;
  Shape shape;
  int64_t reset;
};
struct ExprNode;
}  // namespace detail

class Expr;
struct Statement;

class Signal {
 public:
  /// A fresh 1-bit unsigned signal.
  Signal() : Signal("sig") {}
  explicit Signal(std::string name_hint, int width = 1, bool is_signed = false,
                  int64_t reset = 0);

  uint64_t id() const { return data_->id; }
  const std::string& name_hint() const { return data_->name_hint; }
  Shape shape() const { return data_->shape; }
  int width() const { return data_->shape.width; }
  bool is_signed() const { return data_->shape.is_signed; }
  int64_t reset() const { return data_->reset; }

  Statement eq(const Expr& value) const;
  Expr slice(int low, int high) const;
  Expr operator[](int bit) const;

  bool same_as(const Signal& other) const { return data_ == other.data_; }

 private:
  std::shared_ptr<const detail::SignalData> data_;
};

Signal make_signal(std::string name_hint, WidthSpec width = BitWidth{1},
                   bool is_signed = false, int64_t reset = 0);

enum class UnaryOp { Not, Neg };
enum class BinaryOp { Add, Sub, Mul, And, Or, Xor, Shl, Shr, Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(UnaryOp op);
const char* to_string(BinaryOp op);
bool is_comparison(BinaryOp op);

/// Immutable operator tree. Copies share the underlying node.
class Expr {
 public:
  Expr(const Signal& signal);  // NOLINT(google-explicit-constructor)
  template <typename T, typename = std::enable_if_t<std::is_integral_v<T> && !std::is_same_v<T, bool>>>
  Expr(T value) : Expr(constant_node(static_cast<int64_t>(value))) {}  // NOLINT
  Expr(bool value) : Expr(constant_node(value ? 1 : 0)) {}             // NOLINT

  Shape shape() const;
  int width() const { return shape().width; }
  const detail::ExprNode& node() const { return *node_; }
  const void* identity() const { return node_.get(); }

  Expr slice(int low, int high) const;
  Expr operator[](int bit) const { return slice(bit, bit + 1); }
  /// Assignment statement; throws if this expression is not assignable.
  Statement eq(const Expr& value) const;

  bool is_assignable() const;

  explicit Expr(std::shared_ptr<const detail::ExprNode> node) : node_(std::move(node)) {}

 private:
  static std::shared_ptr<const detail::ExprNode> constant_node(int64_t value);
  std::shared_ptr<const detail::ExprNode> node_;
};

namespace detail {
struct ConstNode {
  int64_t value;
  Shape shape;
};
struct SignalNode {
  Signal signal;
};
struct UnaryNode {
  UnaryOp op;
  Expr operand;
};
struct BinaryNode {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
struct MuxNode {
  Expr cond;
  Expr if_true;
  Expr if_false;
};
struct SliceNode {
  Expr operand;
  int low;
  int high;
};
struct ConcatNode {
  std::vector<Expr> parts;  // part 0 is least significant
};
struct ReplicateNode {
  Expr operand;
  int count;
};
struct ExprNode {
  std::variant<ConstNode, SignalNode, UnaryNode, BinaryNode, MuxNode, SliceNode, ConcatNode,
               ReplicateNode>
      v;
  Shape shape;
};
}  // namespace detail

/// Constant with its minimal shape.
Expr Const(int64_t value);
/// Constant with an explicit shape; the value must fit.
Expr Const(int64_t value, Shape shape);

Expr unary(UnaryOp op, const Expr& operand);
Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs);
Expr mux(const Expr& cond, const Expr& if_true, const Expr& if_false);
Expr cat(std::vector<Expr> parts);
Expr replicate(const Expr& operand, int count);

/// Shape of an operator application given operand shapes. `shift_constant`
/// is set when the right operand of a shift is a constant.
Shape unary_shape(UnaryOp op, Shape operand);
Shape binary_shape(BinaryOp op, Shape lhs, Shape rhs, std::optional<int64_t> shift_constant);
Shape mux_shape(Shape if_true, Shape if_false);

inline Expr operator~(const Expr& e) { return unary(UnaryOp::Not, e); }
inline Expr operator-(const Expr& e) { return unary(UnaryOp::Neg, e); }
inline Expr operator+(const Expr& a, const Expr& b) { return binary(BinaryOp::Add, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return binary(BinaryOp::Sub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return binary(BinaryOp::Mul, a, b); }
inline Expr operator&(const Expr& a, const Expr& b) { return binary(BinaryOp::And, a, b); }
inline Expr operator|(const Expr& a, const Expr& b) { return binary(BinaryOp::Or, a, b); }
inline Expr operator^(const Expr& a, const Expr& b) { return binary(BinaryOp::Xor, a, b); }
inline Expr operator<<(const Expr& a, const Expr& b) { return binary(BinaryOp::Shl, a, b); }
inline Expr operator>>(const Expr& a, const Expr& b) { return binary(BinaryOp::Shr, a, b); }
inline Expr operator==(const Expr& a, const Expr& b) { return binary(BinaryOp::Eq, a, b); }
inline Expr operator!=(const Expr& a, const Expr& b) { return binary(BinaryOp::Ne, a, b); }
inline Expr operator<(const Expr& a, const Expr& b) { return binary(BinaryOp::Lt, a, b); }
inline Expr operator<=(const Expr& a, const Expr& b) { return binary(BinaryOp::Le, a, b); }
inline Expr operator>(const Expr& a, const Expr& b) { return binary(BinaryOp::Gt, a, b); }
inline Expr operator>=(const Expr& a, const Expr& b) { return binary(BinaryOp::Ge, a, b); }

/// Node-by-node comparison; signals compare by identity.
bool structurally_equal(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Statements

using StatementList = std::vector<Statement>;

struct Assign {
  Expr target;
  Expr value;
};

struct IfStmt {
  Expr cond;
  StatementList then_body;
  StatementList else_body;
};

struct CaseArm {
  int64_t value;
  StatementList body;
};

struct CaseStmt {
  Expr selector;
  std::vector<CaseArm> arms;
  StatementList default_body;
};

struct Statement {
  std::variant<Assign, IfStmt, CaseStmt> node;
};

Statement eq(const Expr& target, const Expr& value);

/// Conditional statement builder: If(c, {...}).Elif(c2, {...}).Else({...}).
class If {
 public:
  If(Expr cond, StatementList then_body);
  If& Elif(Expr cond, StatementList body);
  If& Else(StatementList body);
  operator Statement() const;  // NOLINT(google-explicit-constructor)

 private:
  std::vector<std::pair<Expr, StatementList>> branches_;
  StatementList else_body_;
};

Statement Case(const Expr& selector, std::vector<CaseArm> arms, StatementList default_body = {});

/// Every signal assigned by the statements, in first-seen order.
std::vector<Signal> assigned_signals(const StatementList& statements);
/// Signal written by an assignable target expression.
std::vector<Signal> target_signals(const Expr& target);

// ---------------------------------------------------------------------------
// Clock domains and specials

struct ClockDomain {
  explicit ClockDomain(std::string name = "sys", bool reset_synchronous = true);

  std::string name;
  Signal clk;
  Signal rst;
  bool reset_synchronous;
};

enum class PortDirection { In, Out, InOut };
const char* to_string(PortDirection dir);

struct MemoryPort {
  Signal adr;
  Signal dat_r;
  std::optional<Signal> we;
  std::optional<Signal> dat_w;
  std::string domain = "sys";
};

/// Synchronous-read memory array.
struct Memory {
  std::string name;
  int width;
  int depth;
  std::vector<uint64_t> init;
  std::vector<MemoryPort> ports;
};

using ParameterValue = std::variant<int64_t, std::string>;

struct InstanceConnection {
  std::string port;
  PortDirection direction;
  Expr value;
};

/// Black-box instantiation of a module written outside the design.
struct ExternalInstance {
  std::string module_name;
  std::string instance_name;
  std::vector<std::pair<std::string, ParameterValue>> parameters;
  std::vector<InstanceConnection> connections;
};

using Special = std::variant<Memory, ExternalInstance>;

/// Checks memory and instance invariants; throws ConstructionError.
void validate_special(const Special& special);

// ---------------------------------------------------------------------------
// Modules

class Module {
 public:
  Module() = default;
  virtual ~Module() = default;
  Module(const Module&) = delete;
  Module& operator=(const Module&) = delete;

  void comb(Statement statement);
  void comb(StatementList statements);
  /// Synchronous statements in the default "sys" domain.
  void sync(Statement statement);
  void sync(StatementList statements);
  void sync(const std::string& domain, StatementList statements);

  template <typename M>
  std::shared_ptr<M> submodule(const std::string& name, std::shared_ptr<M> module) {
    add_submodule(name, module);
    return module;
  }
  void add_submodule(const std::string& name, std::shared_ptr<Module> module);
  void special(Special special);
  ClockDomain& clock_domain(ClockDomain domain);

  const StatementList& comb_statements() const { return comb_; }
  const std::vector<std::pair<std::string, StatementList>>& sync_statements() const {
    return sync_;
  }
  const std::vector<std::pair<std::string, std::shared_ptr<Module>>>& submodules() const {
    return submodules_;
  }
  const std::vector<Special>& specials() const { return specials_; }
  const std::vector<ClockDomain>& clock_domains() const { return clock_domains_; }
  bool finalized() const { return finalized_; }

 private:
  friend class Finalizer;
  void check_open() const;

  StatementList comb_;
  std::vector<std::pair<std::string, StatementList>> sync_;
  std::vector<std::pair<std::string, std::shared_ptr<Module>>> submodules_;
  std::vector<Special> specials_;
  std::vector<ClockDomain> clock_domains_;
  bool finalized_ = false;
};

/// A flattened design.
struct Fragment {
  StatementList comb;
  std::map<std::string, StatementList> sync;
  std::vector<Special> specials;
  std::vector<ClockDomain> clock_domains;
  std::vector<Signal> signals;  // first-seen order, no duplicates
};

/// Depth-first inlining of the hierarchy rooted at `root`; parent content
/// precedes children, children in insertion order. Marks the hierarchy
/// finalized.
Fragment finalize(Module& root);

/// Signals referenced by the expression, first-seen order, with duplicates.
void collect_signals(const Expr& e, std::vector<Signal>& out);

}  // namespace socgen
