#include "hdldiff/hdl/ast.hpp"

#include <algorithm>
#include <set>

namespace hdldiff {

const char* to_string(UnaryOp op) {
  switch (op) {
    case UnaryOp::Not: return "~";
    case UnaryOp::Neg: return "-";
    case UnaryOp::LogicalNot: return "!";
  }
  return "?";
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::And: return "&";
    case BinaryOp::Or: return "|";
    case BinaryOp::Xor: return "^";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Shl: return "<<";
    case BinaryOp::Shr: return ">>";
  }
  return "?";
}

const char* to_string(LineClass c) {
  switch (c) {
    case LineClass::Executable: return "Executable";
    case LineClass::Comment: return "Comment";
    case LineClass::Blank: return "Blank";
    case LineClass::DeclarationOnly: return "DeclarationOnly";
  }
  return "?";
}

Expr Expr::literal(unsigned width, std::uint64_t value, char base, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Literal;
  e.width = width;
  e.value = value;
  e.sized = true;
  e.base = base;
  e.loc = loc;
  return e;
}

Expr Expr::unsized(std::uint64_t value, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Literal;
  e.width = 32;
  e.value = value;
  e.sized = false;
  e.base = 'd';
  e.loc = loc;
  return e;
}

Expr Expr::ident(std::string name, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Ident;
  e.name = std::move(name);
  e.loc = loc;
  return e;
}

Expr Expr::unary(UnaryOp op, Expr operand, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Unary;
  e.unary_op = op;
  e.lhs = std::move(operand);
  e.loc = loc;
  return e;
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Binary;
  e.binary_op = op;
  e.lhs = std::move(lhs);
  e.rhs = std::move(rhs);
  e.loc = loc;
  return e;
}

Stmt Stmt::assign(bool blocking, std::string target, Expr value, SourceLoc loc) {
  Stmt s;
  s.kind = blocking ? Kind::BlockingAssign : Kind::NonBlockingAssign;
  s.target = std::move(target);
  s.value = std::move(value);
  s.loc = loc;
  return s;
}

LineClass SourceFile::line_class(int line) const {
  if (line < 1 || line > line_count()) return LineClass::Blank;
  return layout[static_cast<std::size_t>(line - 1)].cls;
}

const Module* SourceUnit::find_module(const std::string& name) const {
  for (const auto& m : main().modules)
    if (m.name == name) return &m;
  return nullptr;
}

void for_each_stmt(const Stmt& s, const std::function<void(const Stmt&)>& fn) {
  fn(s);
  switch (s.kind) {
    case Stmt::Kind::If:
      for_each_stmt(*s.then_branch, fn);
      if (s.else_branch) for_each_stmt(*s.else_branch, fn);
      break;
    case Stmt::Kind::For:
      for_each_stmt(*s.then_branch, fn);
      break;
    case Stmt::Kind::Block:
      for (const auto& c : s.stmts) for_each_stmt(c, fn);
      break;
    default:
      break;
  }
}

void for_each_stmt(Stmt& s, const std::function<void(Stmt&)>& fn) {
  fn(s);
  switch (s.kind) {
    case Stmt::Kind::If:
      for_each_stmt(*s.then_branch, fn);
      if (s.else_branch) for_each_stmt(*s.else_branch, fn);
      break;
    case Stmt::Kind::For:
      for_each_stmt(*s.then_branch, fn);
      break;
    case Stmt::Kind::Block:
      for (auto& c : s.stmts) for_each_stmt(c, fn);
      break;
    default:
      break;
  }
}

void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  if (e.lhs) for_each_expr(*e.lhs, fn);
  if (e.rhs) for_each_expr(*e.rhs, fn);
}

void for_each_expr(Expr& e, const std::function<void(Expr&)>& fn) {
  fn(e);
  if (e.lhs) for_each_expr(*e.lhs, fn);
  if (e.rhs) for_each_expr(*e.rhs, fn);
}

void for_each_stmt_expr(const Stmt& s, const std::function<void(const Expr&)>& fn) {
  for_each_stmt(s, [&](const Stmt& st) {
    if (st.is_assign()) for_each_expr(st.value, fn);
    if (st.kind == Stmt::Kind::If) for_each_expr(st.cond, fn);
    if (st.kind == Stmt::Kind::For) {
      for_each_expr(st.init->value, fn);
      for_each_expr(st.cond, fn);
      for_each_expr(st.step->value, fn);
    }
  });
}

namespace {

void expr_lines(Expr& e, const std::function<void(int&)>& fn) {
  for_each_expr(e, [&](Expr& x) { fn(x.loc.line); });
}

void stmt_lines(Stmt& s, const std::function<void(int&)>& fn) {
  fn(s.loc.line);
  switch (s.kind) {
    case Stmt::Kind::BlockingAssign:
    case Stmt::Kind::NonBlockingAssign:
      expr_lines(s.value, fn);
      break;
    case Stmt::Kind::If:
      expr_lines(s.cond, fn);
      stmt_lines(*s.then_branch, fn);
      if (s.else_branch) {
        fn(s.else_line);
        stmt_lines(*s.else_branch, fn);
      }
      break;
    case Stmt::Kind::For:
      stmt_lines(*s.init, fn);
      expr_lines(s.cond, fn);
      stmt_lines(*s.step, fn);
      stmt_lines(*s.then_branch, fn);
      break;
    case Stmt::Kind::Block:
      for (auto& c : s.stmts) stmt_lines(c, fn);
      fn(s.end_line);
      break;
  }
}

struct ItemLines {
  const std::function<void(int&)>& fn;
  void operator()(Decl& d) const { fn(d.loc.line); }
  void operator()(ContinuousAssign& a) const {
    fn(a.loc.line);
    expr_lines(a.value, fn);
  }
  void operator()(Process& p) const {
    fn(p.loc.line);
    stmt_lines(p.body, fn);
  }
  void operator()(Instance& inst) const {
    fn(inst.loc.line);
    for (auto& c : inst.connections) {
      fn(c.loc.line);
      if (c.expr) expr_lines(*c.expr, fn);
    }
  }
  void operator()(IncludeDirective& inc) const { fn(inc.loc.line); }
};

}  // namespace

void for_each_line_ref(SourceUnit& unit, int file, const std::function<void(int&)>& fn) {
  auto& f = unit.files.at(static_cast<std::size_t>(file));
  for (auto& d : f.decls) fn(d.loc.line);
  for (auto& m : f.modules) {
    fn(m.loc.line);
    for (auto& p : m.ports) fn(p.loc.line);
    for (auto& item : m.items) std::visit(ItemLines{fn}, item);
    fn(m.end_line);
  }
}

void shift_lines(SourceUnit& unit, int file, int from, int delta) {
  for_each_line_ref(unit, file, [&](int& line) {
    if (line >= from) line += delta;
  });
}

int last_line(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::If:
      return s.else_branch ? last_line(*s.else_branch) : last_line(*s.then_branch);
    case Stmt::Kind::For:
      return last_line(*s.then_branch);
    case Stmt::Kind::Block:
      return s.end_line;
    default:
      return s.loc.line;
  }
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.loc.line != b.loc.line) return false;
  switch (a.kind) {
    case Expr::Kind::Literal:
      return a.width == b.width && a.value == b.value && a.sized == b.sized;
    case Expr::Kind::Ident:
      return a.name == b.name;
    case Expr::Kind::Unary:
      return a.unary_op == b.unary_op && structurally_equal(*a.lhs, *b.lhs);
    case Expr::Kind::Binary:
      return a.binary_op == b.binary_op && structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.loc.line != b.loc.line) return false;
  switch (a.kind) {
    case Stmt::Kind::BlockingAssign:
    case Stmt::Kind::NonBlockingAssign:
      return a.target == b.target && structurally_equal(a.value, b.value);
    case Stmt::Kind::If:
      if (!structurally_equal(a.cond, b.cond) || !structurally_equal(*a.then_branch, *b.then_branch))
        return false;
      if (static_cast<bool>(a.else_branch) != static_cast<bool>(b.else_branch)) return false;
      return !a.else_branch || (a.else_line == b.else_line && structurally_equal(*a.else_branch, *b.else_branch));
    case Stmt::Kind::For:
      return structurally_equal(*a.init, *b.init) && structurally_equal(a.cond, b.cond) &&
             structurally_equal(*a.step, *b.step) && structurally_equal(*a.then_branch, *b.then_branch);
    case Stmt::Kind::Block:
      if (a.end_line != b.end_line || a.stmts.size() != b.stmts.size()) return false;
      for (std::size_t i = 0; i < a.stmts.size(); ++i)
        if (!structurally_equal(a.stmts[i], b.stmts[i])) return false;
      return true;
  }
  return false;
}

namespace {

bool opt_expr_equal(const std::optional<Expr>& a, const std::optional<Expr>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || structurally_equal(*a, *b);
}

bool decl_equal(const Decl& a, const Decl& b) {
  return a.kind == b.kind && a.width == b.width && a.names == b.names && a.loc.line == b.loc.line;
}

bool item_equal(const Item& a, const Item& b) {
  if (a.index() != b.index()) return false;
  if (const auto* d = std::get_if<Decl>(&a)) return decl_equal(*d, std::get<Decl>(b));
  if (const auto* x = std::get_if<ContinuousAssign>(&a)) {
    const auto& y = std::get<ContinuousAssign>(b);
    return x->target == y.target && x->loc.line == y.loc.line && structurally_equal(x->value, y.value);
  }
  if (const auto* x = std::get_if<Process>(&a)) {
    const auto& y = std::get<Process>(b);
    return x->kind == y.kind && x->clock == y.clock && x->loc.line == y.loc.line &&
           structurally_equal(x->body, y.body);
  }
  if (const auto* x = std::get_if<Instance>(&a)) {
    const auto& y = std::get<Instance>(b);
    if (x->module_name != y.module_name || x->instance_name != y.instance_name || x->loc.line != y.loc.line ||
        x->connections.size() != y.connections.size())
      return false;
    for (std::size_t i = 0; i < x->connections.size(); ++i) {
      const auto& c = x->connections[i];
      const auto& d = y.connections[i];
      if (c.port != d.port || c.loc.line != d.loc.line || !opt_expr_equal(c.expr, d.expr)) return false;
    }
    return true;
  }
  const auto& x = std::get<IncludeDirective>(a);
  const auto& y = std::get<IncludeDirective>(b);
  return x.path == y.path && x.loc.line == y.loc.line;
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool layout_equal(const std::vector<LineInfo>& a, const std::vector<LineInfo>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool ea = a[i].cls == LineClass::Executable, eb = b[i].cls == LineClass::Executable;
    const bool ca = a[i].cls == LineClass::Comment, cb = b[i].cls == LineClass::Comment;
    if (ea != eb || ca != cb) return false;
    if (trimmed(a[i].comment) != trimmed(b[i].comment)) return false;
  }
  return true;
}

}  // namespace

bool structurally_equal(const SourceUnit& a, const SourceUnit& b) {
  if (a.files.size() != b.files.size()) return false;
  for (std::size_t f = 0; f < a.files.size(); ++f) {
    const auto& fa = a.files[f];
    const auto& fb = b.files[f];
    if (fa.path != fb.path || !layout_equal(fa.layout, fb.layout)) return false;
    if (fa.decls.size() != fb.decls.size() || fa.modules.size() != fb.modules.size()) return false;
    for (std::size_t i = 0; i < fa.decls.size(); ++i)
      if (!decl_equal(fa.decls[i], fb.decls[i])) return false;
    for (std::size_t i = 0; i < fa.modules.size(); ++i) {
      const auto& ma = fa.modules[i];
      const auto& mb = fb.modules[i];
      if (ma.name != mb.name || ma.loc.line != mb.loc.line || ma.end_line != mb.end_line) return false;
      if (ma.ports.size() != mb.ports.size() || ma.items.size() != mb.items.size()) return false;
      for (std::size_t p = 0; p < ma.ports.size(); ++p) {
        const auto& pa = ma.ports[p];
        const auto& pb = mb.ports[p];
        if (pa.dir != pb.dir || pa.kind != pb.kind || pa.width != pb.width || pa.name != pb.name ||
            pa.loc.line != pb.loc.line)
          return false;
      }
      for (std::size_t k = 0; k < ma.items.size(); ++k)
        if (!item_equal(ma.items[k], mb.items[k])) return false;
    }
  }
  return true;
}

}  // namespace hdldiff
