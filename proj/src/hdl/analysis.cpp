#include "hdldiff/hdl/analysis.hpp"

#include "hdldiff/hdl/const_eval.hpp"
#include "hdldiff/hdl/elaborate.hpp"

namespace hdldiff {

std::vector<int> executable_lines(const SourceFile& f) {
  std::vector<int> out;
  for (int l = 1; l <= f.line_count(); ++l)
    if (f.line_class(l) == LineClass::Executable) out.push_back(l);
  return out;
}

const Module* module_at(const SourceUnit& unit, int line) {
  for (const auto& m : unit.main().modules)
    if (line >= m.loc.line && line <= m.end_line) return &m;
  return nullptr;
}

int entry_line(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::BlockingAssign:
    case Stmt::Kind::NonBlockingAssign:
    case Stmt::Kind::If:
      return s.loc.line;
    case Stmt::Kind::Block:
      return s.stmts.empty() ? 0 : entry_line(s.stmts.front());
    case Stmt::Kind::For:
      return 0;
  }
  return 0;
}

std::map<int, int> atomic_statements_per_line(const SourceUnit& unit) {
  std::map<int, int> out;
  for (const auto& m : unit.main().modules)
    walk_statements(m, [&](const Stmt& s, const Stmt*, bool) {
      if (s.is_assign() || s.kind == Stmt::Kind::If) ++out[s.loc.line];
    });
  return out;
}

int instance_count(const SourceUnit& unit, const std::string& module) {
  for (const auto& [name, n] : instance_counts(unit))
    if (name == module) return n;
  return 0;
}

namespace {

const Decl* find_decl(const SourceUnit& unit, const Module& m, const std::string& name) {
  for (const auto& item : m.items) {
    if (const auto* d = std::get_if<Decl>(&item)) {
      for (const auto& n : d->names)
        if (n == name) return d;
    } else if (const auto* inc = std::get_if<IncludeDirective>(&item)) {
      if (inc->file < 0 || inc->file >= static_cast<int>(unit.files.size())) continue;
      for (const auto& d : unit.files[static_cast<std::size_t>(inc->file)].decls)
        for (const auto& n : d.names)
          if (n == name) return &d;
    }
  }
  return nullptr;
}

}  // namespace

std::optional<unsigned> declared_width(const SourceUnit& unit, const Module& m, const std::string& name) {
  for (const auto& p : m.ports)
    if (p.name == name) return p.width;
  if (const Decl* d = find_decl(unit, m, name)) return d->width;
  return std::nullopt;
}

std::optional<NetKind> declared_kind(const SourceUnit& unit, const Module& m, const std::string& name) {
  for (const auto& p : m.ports)
    if (p.name == name) return p.kind;
  if (const Decl* d = find_decl(unit, m, name)) return d->kind;
  return std::nullopt;
}

std::set<std::string> reads(const Expr& e) {
  std::set<std::string> out;
  for_each_expr(e, [&](const Expr& x) {
    if (x.kind == Expr::Kind::Ident) out.insert(x.name);
  });
  return out;
}

void collect_uses(const Stmt& s, std::set<std::string>& read, std::set<std::string>& written) {
  for_each_stmt(s, [&](const Stmt& x) {
    if (x.is_assign()) written.insert(x.target);
    if (x.kind == Stmt::Kind::For) {
      written.insert(x.init->target);
      written.insert(x.step->target);
    }
  });
  for_each_stmt_expr(s, [&](const Expr& e) {
    if (e.kind == Expr::Kind::Ident) read.insert(e.name);
  });
}

std::optional<int> trip_count(const SourceUnit& unit, const Module& m, const Stmt& loop, int limit) {
  if (loop.kind != Stmt::Kind::For) return std::nullopt;
  const std::string& var = loop.init->target;
  const auto width = declared_width(unit, m, var);
  if (!width) return std::nullopt;
  const NameResolver only_var = [&](const std::string& n) -> std::optional<SignalRef> {
    if (n == var) return SignalRef{0, *width};
    return std::nullopt;
  };
  CExpr init, cond, step;
  try {
    init = compile_expr(loop.init->value, only_var);
    cond = compile_expr(loop.cond, only_var);
    step = compile_expr(loop.step->value, only_var);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  std::set<std::string> body_read, body_written;
  collect_uses(*loop.then_branch, body_read, body_written);
  if (body_written.count(var)) return std::nullopt;

  std::vector<LogicVec> vals{LogicVec::all_x(*width)};
  vals[0] = eval(init, std::max(*width, init.width), vals).resized(*width);
  for (int n = 0; n <= limit; ++n) {
    const Bit t = eval(cond, cond.width, vals).truth();
    if (t != Bit::One) return t == Bit::Zero ? std::optional<int>(n) : std::nullopt;
    vals[0] = eval(step, std::max(*width, step.width), vals).resized(*width);
  }
  return std::nullopt;
}

}  // namespace hdldiff
