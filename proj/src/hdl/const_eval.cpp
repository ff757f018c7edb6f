#include "hdldiff/hdl/const_eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace hdldiff {

CExpr compile_expr(const Expr& e, const NameResolver& resolve) {
  CExpr c;
  c.kind = e.kind;
  switch (e.kind) {
    case Expr::Kind::Literal:
      c.width = e.width;
      c.literal = LogicVec(e.width, e.value);
      break;
    case Expr::Kind::Ident: {
      const auto ref = resolve ? resolve(e.name) : std::nullopt;
      if (!ref) throw std::invalid_argument("unresolved identifier '" + e.name + "'");
      c.sig = ref->slot;
      c.width = ref->width;
      break;
    }
    case Expr::Kind::Unary:
      c.unary_op = e.unary_op;
      c.args.push_back(compile_expr(*e.lhs, resolve));
      c.width = e.unary_op == UnaryOp::LogicalNot ? 1 : c.args[0].width;
      break;
    case Expr::Kind::Binary: {
      c.binary_op = e.binary_op;
      c.args.push_back(compile_expr(*e.lhs, resolve));
      c.args.push_back(compile_expr(*e.rhs, resolve));
      switch (e.binary_op) {
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Gt:
          c.width = 1;
          break;
        case BinaryOp::Shl:
        case BinaryOp::Shr:
          c.width = c.args[0].width;
          break;
        default:
          c.width = std::max(c.args[0].width, c.args[1].width);
      }
      break;
    }
  }
  return c;
}

LogicVec eval(const CExpr& e, unsigned ctx, std::span<const LogicVec> values) {
  ctx = std::max(ctx, e.width);
  switch (e.kind) {
    case Expr::Kind::Literal:
      return e.literal.resized(ctx);
    case Expr::Kind::Ident:
      return values[static_cast<std::size_t>(e.sig)].resized(ctx);
    case Expr::Kind::Unary:
      switch (e.unary_op) {
        case UnaryOp::Not: return logic_not(eval(e.args[0], ctx, values));
        case UnaryOp::Neg: return logic_neg(eval(e.args[0], ctx, values));
        case UnaryOp::LogicalNot: return logic_lnot(eval(e.args[0], e.args[0].width, values)).resized(ctx);
      }
      break;
    case Expr::Kind::Binary: {
      const auto& l = e.args[0];
      const auto& r = e.args[1];
      switch (e.binary_op) {
        case BinaryOp::Add: return logic_add(eval(l, ctx, values), eval(r, ctx, values));
        case BinaryOp::Sub: return logic_sub(eval(l, ctx, values), eval(r, ctx, values));
        case BinaryOp::And: return logic_and(eval(l, ctx, values), eval(r, ctx, values));
        case BinaryOp::Or: return logic_or(eval(l, ctx, values), eval(r, ctx, values));
        case BinaryOp::Xor: return logic_xor(eval(l, ctx, values), eval(r, ctx, values));
        case BinaryOp::Shl: return logic_shl(eval(l, ctx, values), eval(r, r.width, values));
        case BinaryOp::Shr: return logic_shr(eval(l, ctx, values), eval(r, r.width, values));
        default: {
          const unsigned w = std::max(l.width, r.width);
          const LogicVec a = eval(l, w, values);
          const LogicVec b = eval(r, w, values);
          LogicVec out;
          switch (e.binary_op) {
            case BinaryOp::Eq: out = logic_eq(a, b); break;
            case BinaryOp::Ne: out = logic_ne(a, b); break;
            case BinaryOp::Lt: out = logic_lt(a, b); break;
            default: out = logic_gt(a, b); break;
          }
          return out.resized(ctx);
        }
      }
    }
  }
  throw std::logic_error("eval: unknown expression");
}

bool is_constant(const Expr& e) {
  bool constant = true;
  for_each_expr(e, [&](const Expr& x) {
    if (x.kind == Expr::Kind::Ident) constant = false;
  });
  return constant;
}

std::optional<std::uint64_t> const_eval(const Expr& e, unsigned width) {
  if (width == 0 || width > LogicVec::kMaxWidth || !is_constant(e)) return std::nullopt;
  const CExpr c = compile_expr(e, {});
  const LogicVec v = eval(c, width, {});
  if (!v.is_known()) return std::nullopt;
  return v.value() & width_mask(width);
}

}  // namespace hdldiff
