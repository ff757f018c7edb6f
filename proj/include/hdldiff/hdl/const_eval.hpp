#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdldiff/hdl/ast.hpp"
#include "hdldiff/hdl/logic.hpp"

namespace hdldiff {

/// Expression with identifiers resolved to signal slots and self-determined widths precomputed.
struct CExpr {
  Expr::Kind kind = Expr::Kind::Literal;
  unsigned width = 1;  // self-determined width
  LogicVec literal;
  int sig = -1;
  UnaryOp unary_op = UnaryOp::Not;
  BinaryOp binary_op = BinaryOp::Add;
  std::vector<CExpr> args;
};

struct SignalRef {
  int slot;
  unsigned width;
};

using NameResolver = std::function<std::optional<SignalRef>(const std::string&)>;

/// Throws std::invalid_argument naming the first unresolved identifier.
CExpr compile_expr(const Expr& e, const NameResolver& resolve);

/// Evaluates in a context of `ctx` bits (at least the self-determined width).
/// Arithmetic and bitwise operands take the context width; comparison operands are
/// sized to the wider operand; shift amounts and `!` operands are self-determined.
LogicVec eval(const CExpr& e, unsigned ctx, std::span<const LogicVec> values);

/// Value of an identifier-free expression in modular 2^width arithmetic, or nullopt.
std::optional<std::uint64_t> const_eval(const Expr& e, unsigned width);

/// True when the expression references no identifier.
bool is_constant(const Expr& e);

}  // namespace hdldiff
