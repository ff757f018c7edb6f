#include "hdldiff/rtl/transforms.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hdldiff/hdl/analysis.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/parser.hpp"
#include "hdldiff/hdl/render.hpp"

namespace hdldiff {

const char* rtl_op_name(RtlOp op) {
  switch (op) {
    case RtlOp::AssignConv: return "assign-conv";
    case RtlOp::LiteralExpr: return "literal-expr";
    case RtlOp::BitMutate: return "bit-mutate";
    case RtlOp::DeadLoop: return "dead-loop";
    case RtlOp::IncludeInject: return "include-inject";
    case RtlOp::IncludeRemove: return "include-remove";
  }
  return "?";
}

std::optional<RtlOp> parse_rtl_op(const std::string& name) {
  for (RtlOp op : kRtlOps)
    if (name == rtl_op_name(op)) return op;
  return std::nullopt;
}

SourceUnit reparse(const SourceUnit& unit) {
  std::map<std::string, std::string> texts;
  for (std::size_t i = 1; i < unit.files.size(); ++i)
    texts[unit.files[i].path] = render_file(unit, static_cast<int>(i));
  const IncludeResolver resolve = [&](const std::string& path) -> std::optional<std::string> {
    const auto it = texts.find(path);
    if (it == texts.end()) return std::nullopt;
    return it->second;
  };
  return parse(render(unit), resolve, unit.main().path);
}

namespace {

// ---------------------------------------------------------------------------
// Module facts

bool instantiated(const SourceUnit& u, const std::string& module) {
  for (const auto& m : u.main().modules)
    for (const auto& item : m.items)
      if (const auto* inst = std::get_if<Instance>(&item); inst && inst->module_name == module) return true;
  return false;
}

std::vector<std::string> declared_names(const SourceUnit& u, const Module& m) {
  std::vector<std::string> out;
  for (const auto& p : m.ports) out.push_back(p.name);
  for (const auto& item : m.items) {
    if (const auto* d = std::get_if<Decl>(&item)) out.insert(out.end(), d->names.begin(), d->names.end());
    if (const auto* inc = std::get_if<IncludeDirective>(&item); inc && inc->file >= 0)
      for (const auto& d : u.files[static_cast<std::size_t>(inc->file)].decls)
        out.insert(out.end(), d.names.begin(), d.names.end());
  }
  return out;
}

const Port* find_port(const Module& m, const std::string& name) {
  for (const auto& p : m.ports)
    if (p.name == name) return &p;
  return nullptr;
}

// Every identifier a module reads, writes or connects.
std::set<std::string> used_names(const Module& m) {
  std::set<std::string> out;
  const auto add_expr = [&](const Expr& e) {
    const auto r = reads(e);
    out.insert(r.begin(), r.end());
  };
  for (const auto& item : m.items) {
    if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
      out.insert(a->target);
      add_expr(a->value);
    } else if (const auto* p = std::get_if<Process>(&item)) {
      if (!p->clock.empty()) out.insert(p->clock);
      std::set<std::string> w;
      collect_uses(p->body, out, w);
      out.insert(w.begin(), w.end());
    } else if (const auto* inst = std::get_if<Instance>(&item)) {
      for (const auto& c : inst->connections)
        if (c.expr) add_expr(*c.expr);
    }
  }
  return out;
}

bool mentions(const Expr& e, const std::set<std::string>& names) {
  bool hit = false;
  for_each_expr(e, [&](const Expr& x) {
    if (x.kind == Expr::Kind::Ident && names.count(x.name)) hit = true;
  });
  return hit;
}

// Signals per module whose value may hold a Z bit.
std::map<std::string, std::set<std::string>> may_be_z(const SourceUnit& u) {
  std::map<std::string, std::set<std::string>> z;
  const auto& mods = u.main().modules;
  for (const auto& m : mods) {
    std::set<std::string> driven;
    for (const auto& item : m.items) {
      if (const auto* a = std::get_if<ContinuousAssign>(&item)) driven.insert(a->target);
      if (const auto* inst = std::get_if<Instance>(&item)) {
        const Module* child = u.find_module(inst->module_name);
        for (const auto& c : inst->connections) {
          const Port* p = child ? find_port(*child, c.port) : nullptr;
          if (p && p->dir == PortDir::Output && c.expr && c.expr->kind == Expr::Kind::Ident)
            driven.insert(c.expr->name);
        }
      }
    }
    auto& zs = z[m.name];
    for (const auto& name : declared_names(u, m)) {
      const Port* p = find_port(m, name);
      if (p && p->dir == PortDir::Input) continue;
      if (declared_kind(u, m, name) == NetKind::Wire && !driven.count(name)) zs.insert(name);
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    const auto mark = [&](const std::string& module, const std::string& name) {
      if (z[module].insert(name).second) changed = true;
    };
    for (const auto& m : mods) {
      const auto& zs = z[m.name];
      for (const auto& item : m.items) {
        if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
          if (mentions(a->value, zs)) mark(m.name, a->target);
        } else if (const auto* p = std::get_if<Process>(&item)) {
          for_each_stmt(p->body, [&](const Stmt& s) {
            if (s.is_assign() && mentions(s.value, zs)) mark(m.name, s.target);
          });
        } else if (const auto* inst = std::get_if<Instance>(&item)) {
          const Module* child = u.find_module(inst->module_name);
          if (!child) continue;
          for (const auto& port : child->ports) {
            const Connection* conn = nullptr;
            for (const auto& c : inst->connections)
              if (c.port == port.name) conn = &c;
            if (port.dir == PortDir::Input) {
              if (!conn || !conn->expr || mentions(*conn->expr, zs)) mark(child->name, port.name);
            } else if (conn && conn->expr && conn->expr->kind == Expr::Kind::Ident &&
                       z[child->name].count(port.name)) {
              mark(m.name, conn->expr->name);
            }
          }
        }
      }
    }
  }
  return z;
}

// ---------------------------------------------------------------------------
// Candidate collection

struct Candidate {
  SourceLoc loc;
  int ordinal = 0;
  bool eligible = true;
  std::string evidence;  // eligibility evidence, or the reason for rejection
  Module* module = nullptr;
  Process* process = nullptr;
  Stmt* stmt = nullptr;
  Stmt* parent = nullptr;
  std::size_t index = 0;  // position in parent->stmts or module->items
  Expr* expr = nullptr;
};

template <class Fn>
void walk_mut(Stmt& s, Stmt* parent, std::size_t index, Fn& fn) {
  fn(s, parent, index);
  switch (s.kind) {
    case Stmt::Kind::If:
      walk_mut(*s.then_branch, &s, 0, fn);
      if (s.else_branch) walk_mut(*s.else_branch, &s, 1, fn);
      break;
    case Stmt::Kind::For:
      walk_mut(*s.then_branch, &s, 0, fn);
      break;
    case Stmt::Kind::Block:
      for (std::size_t i = 0; i < s.stmts.size(); ++i) walk_mut(s.stmts[i], &s, i, fn);
      break;
    default:
      break;
  }
}

// Expressions of continuous assigns, assignment right-hand sides and if conditions.
template <class Fn>
void for_each_rvalue(Module& m, Fn&& fn) {
  for (auto& item : m.items) {
    if (auto* a = std::get_if<ContinuousAssign>(&item)) {
      fn(a->value);
    } else if (auto* p = std::get_if<Process>(&item)) {
      for_each_stmt(p->body, [&](Stmt& s) {
        if (s.is_assign()) fn(s.value);
        if (s.kind == Stmt::Kind::If) fn(s.cond);
      });
    }
  }
}

bool assign_conv_ok(const SourceUnit& u, const Module& m, const Process& p, const Stmt& s, std::string& why) {
  const std::string& r = s.target;
  if (declared_kind(u, m, r) != NetKind::Reg) {
    why = r + " is not a reg";
    return false;
  }
  int writes = 0;
  int uses = 0;
  std::set<std::string> written;
  for_each_stmt(p.body, [&](const Stmt& x) {
    if (x.is_assign()) {
      written.insert(x.target);
      if (x.target == r) ++writes;
    }
    if (x.kind == Stmt::Kind::For) {
      written.insert(x.init->target);
      written.insert(x.step->target);
      if (x.init->target == r) writes += 2;
    }
  });
  for_each_stmt_expr(p.body, [&](const Expr& e) {
    if (e.kind == Expr::Kind::Ident && e.name == r) ++uses;
  });
  if (writes != 1 || uses != 0 || p.clock == r) {
    why = r + " appears elsewhere in its block";
    return false;
  }
  for (const auto& name : reads(s.value))
    if (written.count(name)) {
      why = "right-hand side reads " + name + ", assigned in the same block";
      return false;
    }
  for (const auto& item : m.items) {
    if (const auto* q = std::get_if<Process>(&item)) {
      if (q == &p) continue;
      std::set<std::string> rd, wr;
      collect_uses(q->body, rd, wr);
      if (rd.count(r) || wr.count(r) || q->clock == r) {
        why = r + " is used by another process";
        return false;
      }
    } else if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
      if (a->target == r || reads(a->value).count(r)) {
        why = r + " is used by a continuous assignment";
        return false;
      }
    } else if (const auto* inst = std::get_if<Instance>(&item)) {
      for (const auto& c : inst->connections)
        if (c.expr && reads(*c.expr).count(r)) {
          why = r + " is connected to instance " + inst->instance_name;
          return false;
        }
    }
  }
  if (const Port* port = find_port(m, r); port && instantiated(u, m.name)) {
    why = r + " drives an output of an instantiated module";
    return false;
  }
  why = "no other use of " + r + " in block or module";
  return true;
}

int item_first_line(const SourceUnit& u, const Item& item) {
  (void)u;
  return std::visit([](const auto& x) { return x.loc.line; }, item);
}

int item_last_line(const Item& item) {
  if (const auto* p = std::get_if<Process>(&item)) return std::max(p->loc.line, last_line(p->body));
  if (const auto* inst = std::get_if<Instance>(&item)) {
    int l = inst->loc.line;
    for (const auto& c : inst->connections) l = std::max(l, c.loc.line);
    return l;
  }
  return std::visit([](const auto& x) { return x.loc.line; }, item);
}

int header_last_line(const Module& m) { return m.ports.empty() ? m.loc.line : std::max(m.loc.line, m.ports.back().loc.line); }

// True when item `i` of `m` starts on a line no other module content touches.
bool item_line_exclusive(const SourceUnit& u, const Module& m, std::size_t i) {
  const int first = item_first_line(u, m.items[i]);
  const int prev = i == 0 ? header_last_line(m) : item_last_line(m.items[i - 1]);
  return first > prev;
}

bool loop_var_private(const Module& m, const std::string& var) {
  bool ok = true;
  struct Check {
    const std::string& var;
    bool& ok;
    void expr(const Expr& e) {
      if (reads(e).count(var)) ok = false;
    }
    void go(const Stmt& s) {
      switch (s.kind) {
        case Stmt::Kind::BlockingAssign:
        case Stmt::Kind::NonBlockingAssign:
          if (s.target == var) ok = false;
          expr(s.value);
          break;
        case Stmt::Kind::If:
          expr(s.cond);
          go(*s.then_branch);
          if (s.else_branch) go(*s.else_branch);
          break;
        case Stmt::Kind::For:
          if (s.init->target == var) break;  // reads and writes inside a loop that re-initialises var
          if (s.step->target == var) ok = false;
          expr(s.init->value);
          expr(s.cond);
          expr(s.step->value);
          go(*s.then_branch);
          break;
        case Stmt::Kind::Block:
          for (const auto& c : s.stmts) go(c);
          break;
      }
    }
  };
  Check c{var, ok};
  for (const auto& item : m.items) {
    if (const auto* p = std::get_if<Process>(&item)) {
      if (p->clock == var) ok = false;
      c.go(p->body);
    } else if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
      if (a->target == var) ok = false;
      c.expr(a->value);
    } else if (const auto* inst = std::get_if<Instance>(&item)) {
      for (const auto& conn : inst->connections)
        if (conn.expr) c.expr(*conn.expr);
    }
  }
  return ok;
}

bool dead_loop_ok(const SourceUnit& u, const Module& m, const Stmt& s, const Stmt* parent, std::size_t k,
                  std::string& why) {
  if (!parent || parent->kind != Stmt::Kind::Block) {
    why = "loop is not directly inside a begin-end block";
    return false;
  }
  const std::string& var = s.init->target;
  if (declared_kind(u, m, var) != NetKind::Integer) {
    why = "loop variable " + var + " is not an integer";
    return false;
  }
  const auto trips = trip_count(u, m, s);
  if (!trips) {
    why = "guard is not constant";
    return false;
  }
  if (*trips != 0) {
    why = "loop runs " + std::to_string(*trips) + " times";
    return false;
  }
  if (!loop_var_private(m, var)) {
    why = var + " is used outside loops that initialise it";
    return false;
  }
  const int first = s.loc.line;
  const int last = last_line(s);
  const int prev = k == 0 ? parent->loc.line : last_line(parent->stmts[k - 1]);
  const int next = k + 1 < parent->stmts.size() ? parent->stmts[k + 1].loc.line : parent->end_line;
  if (prev >= first || next <= last) {
    why = "loop shares a line with other statements";
    return false;
  }
  why = "guard false at entry; lines " + std::to_string(first) + "-" + std::to_string(last);
  return true;
}

// Include directives and their removal eligibility.
bool include_remove_ok(const SourceUnit& u, const Module& m, std::size_t i, std::string& why) {
  const auto& inc = std::get<IncludeDirective>(m.items[i]);
  const int line = inc.loc.line;
  const int next = i + 1 < m.items.size() ? item_first_line(u, m.items[i + 1]) : m.end_line;
  if (!item_line_exclusive(u, m, i) || next <= line) {
    why = "directive shares its line";
    return false;
  }
  const auto used = used_names(m);
  if (inc.file >= 0)
    for (const auto& d : u.files[static_cast<std::size_t>(inc.file)].decls)
      for (const auto& n : d.names)
        if (used.count(n)) {
          why = inc.path + " declares " + n + ", used by " + m.name;
          return false;
        }
  why = inc.path + " contributes no used symbol";
  return true;
}

std::vector<Candidate> collect(SourceUnit& u, RtlOp op) {
  std::vector<Candidate> out;
  std::map<std::string, std::set<std::string>> zmap;
  if (op == RtlOp::BitMutate) zmap = may_be_z(u);
  for (auto& m : u.main().modules) {
    switch (op) {
      case RtlOp::AssignConv:
        for (auto& item : m.items) {
          auto* p = std::get_if<Process>(&item);
          if (!p) continue;
          auto fn = [&](Stmt& s, Stmt*, std::size_t) {
            if (!s.is_assign()) return;
            Candidate c;
            c.loc = s.loc;
            c.module = &m;
            c.process = p;
            c.stmt = &s;
            c.eligible = assign_conv_ok(u, m, *p, s, c.evidence);
            out.push_back(std::move(c));
          };
          walk_mut(p->body, nullptr, 0, fn);
        }
        break;
      case RtlOp::DeadLoop:
        for (auto& item : m.items) {
          auto* p = std::get_if<Process>(&item);
          if (!p) continue;
          auto fn = [&](Stmt& s, Stmt* parent, std::size_t k) {
            if (s.kind != Stmt::Kind::For) return;
            Candidate c;
            c.loc = s.loc;
            c.module = &m;
            c.process = p;
            c.stmt = &s;
            c.parent = parent;
            c.index = k;
            c.eligible = dead_loop_ok(u, m, s, parent, k, c.evidence);
            out.push_back(std::move(c));
          };
          walk_mut(p->body, nullptr, 0, fn);
        }
        break;
      case RtlOp::LiteralExpr:
      case RtlOp::BitMutate: {
        const auto& zs = zmap[m.name];
        for_each_rvalue(m, [&](Expr& root) {
          std::vector<Expr*> nodes;
          for_each_expr(root, [&](Expr& e) { nodes.push_back(&e); });
          for (Expr* e : nodes) {
            const bool lit = e->kind == Expr::Kind::Literal && e->sized;
            if (op == RtlOp::LiteralExpr && !lit) continue;
            if (op == RtlOp::BitMutate && !lit && e->kind != Expr::Kind::Ident) continue;
            Candidate c;
            c.loc = e->loc;
            c.module = &m;
            c.expr = e;
            if (op == RtlOp::LiteralExpr) {
              c.evidence = std::to_string(e->width) + "-bit literal of value " + std::to_string(e->value);
            } else if (lit) {
              c.evidence = "constant operand";
            } else if (zs.count(e->name)) {
              c.eligible = false;
              c.evidence = e->name + " may carry Z";
            } else {
              c.evidence = e->name + " is always driven";
            }
            out.push_back(std::move(c));
          }
        });
        break;
      }
      case RtlOp::IncludeRemove:
        for (std::size_t i = 0; i < m.items.size(); ++i) {
          auto* inc = std::get_if<IncludeDirective>(&m.items[i]);
          if (!inc) continue;
          Candidate c;
          c.loc = inc->loc;
          c.module = &m;
          c.index = i;
          c.eligible = include_remove_ok(u, m, i, c.evidence);
          out.push_back(std::move(c));
        }
        break;
      case RtlOp::IncludeInject:
        for (std::size_t i = 0; i <= m.items.size(); ++i) {
          const bool at_end = i == m.items.size();
          const int line = at_end ? m.end_line : item_first_line(u, m.items[i]);
          const int prev = i == 0 ? header_last_line(m) : item_last_line(m.items[i - 1]);
          Candidate c;
          c.loc = {0, line, 1};
          c.module = &m;
          c.index = i;
          c.eligible = line > prev;
          c.evidence = c.eligible ? "before " + std::string(at_end ? "endmodule" : "item " + std::to_string(i)) +
                                        " of " + m.name
                                  : "line shared with the previous item";
          out.push_back(std::move(c));
        }
        break;
    }
  }
  std::map<int, int> seen;
  for (auto& c : out) c.ordinal = seen[c.loc.line]++;
  return out;
}

Candidate& locate(std::vector<Candidate>& cands, RtlOp op, int line, int ordinal) {
  for (auto& c : cands)
    if (c.loc.line == line && c.ordinal == ordinal) {
      if (!c.eligible) throw IneligibleSite(std::string(rtl_op_name(op)) + " at line " + std::to_string(line) + ": " + c.evidence);
      return c;
    }
  throw IneligibleSite(std::string(rtl_op_name(op)) + ": no candidate at line " + std::to_string(line) + " #" +
                       std::to_string(ordinal));
}

TransformRecord site_record(RtlOp op, int line, int ordinal) {
  TransformRecord r;
  r.op = rtl_op_name(op);
  r.set("line", line).set("ordinal", ordinal);
  return r;
}

// Re-parses a rewritten unit and confirms it still elaborates.
SourceUnit finish(const SourceUnit& edited, RtlOp op) {
  SourceUnit v;
  try {
    v = reparse(edited);
    elaborate(v);
  } catch (const std::exception& e) {
    throw IneligibleSite(std::string(rtl_op_name(op)) + ": variant rejected: " + e.what());
  }
  return v;
}

std::uint64_t literal_mask(unsigned w) { return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1; }

Expr split_literal(const Expr& lit, bool add, std::uint64_t first) {
  const std::uint64_t n = lit.value;
  const std::uint64_t second = add ? n - first : first - n;
  Expr e = Expr::binary(add ? BinaryOp::Add : BinaryOp::Sub, Expr::literal(lit.width, first, lit.base, lit.loc),
                        Expr::literal(lit.width, second, lit.base, lit.loc), lit.loc);
  e.paren = true;
  return e;
}

TransformResult literal_apply(const SourceUnit& unit, int line, int ordinal, bool add, std::uint64_t first) {
  SourceUnit u = unit;
  auto cands = collect(u, RtlOp::LiteralExpr);
  Candidate& c = locate(cands, RtlOp::LiteralExpr, line, ordinal);
  const Expr lit = *c.expr;
  const std::uint64_t mask = literal_mask(lit.width);
  if (add ? first > lit.value : (first < lit.value || first > mask))
    throw IneligibleSite("literal-expr: split does not fit " + std::to_string(lit.width) + " bits");
  *c.expr = split_literal(lit, add, first);
  TransformResult r;
  r.variant = finish(u, RtlOp::LiteralExpr);
  r.line_map = LineMap::identity(unit.main().line_count());
  r.record = site_record(RtlOp::LiteralExpr, line, ordinal);
  r.record.set("form", add ? "add" : "sub").set("operand", std::to_string(first));
  return r;
}

std::set<std::string> all_identifiers(const SourceUnit& u) {
  std::set<std::string> out;
  for (const auto& f : u.files)
    for (const auto& d : f.decls) out.insert(d.names.begin(), d.names.end());
  for (const auto& m : u.main().modules) {
    out.insert(m.name);
    const auto names = declared_names(u, m);
    out.insert(names.begin(), names.end());
    const auto used = used_names(m);
    out.insert(used.begin(), used.end());
    for (const auto& item : m.items)
      if (const auto* inst = std::get_if<Instance>(&item)) out.insert(inst->instance_name);
  }
  return out;
}

struct Injection {
  int line = 0;
  std::string path;
  std::vector<std::pair<std::string, unsigned>> decls;
};

std::string format_decls(const std::vector<std::pair<std::string, unsigned>>& decls) {
  std::string s;
  for (const auto& [name, w] : decls) s += (s.empty() ? "" : ",") + name + ":" + std::to_string(w);
  return s;
}

std::vector<std::pair<std::string, unsigned>> parse_decls(const std::string& text) {
  std::vector<std::pair<std::string, unsigned>> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw IneligibleSite("include-inject: bad declaration list " + text);
    out.emplace_back(part.substr(0, colon), static_cast<unsigned>(std::stoul(part.substr(colon + 1))));
  }
  return out;
}

// Inserts one directive line into `u` (not re-parsed). Returns the line map of the edit.
LineMap inject(SourceUnit& u, const Injection& inj) {
  const int n = u.main().line_count();
  auto cands = collect(u, RtlOp::IncludeInject);
  Candidate& c = locate(cands, RtlOp::IncludeInject, inj.line, 0);
  const auto taken = all_identifiers(u);
  for (const auto& f : u.files)
    if (f.path == inj.path) throw IneligibleSite("include-inject: file " + inj.path + " exists");
  for (const auto& [name, w] : inj.decls)
    if (taken.count(name) || w == 0 || w > 64) throw IneligibleSite("include-inject: declaration " + name + " collides");

  SourceFile f;
  f.path = inj.path;
  const int index = static_cast<int>(u.files.size());
  int line = 0;
  for (const auto& [name, w] : inj.decls) {
    Decl d;
    d.kind = NetKind::Reg;
    d.width = w;
    d.names = {name};
    d.loc = {index, ++line, 1};
    f.decls.push_back(std::move(d));
    f.layout.push_back({LineClass::DeclarationOnly, ""});
  }
  Module* m = c.module;
  const std::size_t at = c.index;
  auto& layout = u.main().layout;
  shift_lines(u, 0, inj.line, 1);
  layout.insert(layout.begin() + (inj.line - 1), LineInfo{LineClass::DeclarationOnly, ""});
  IncludeDirective dir;
  dir.path = inj.path;
  dir.file = index;
  dir.loc = {0, inj.line, 3};
  m->items.insert(m->items.begin() + static_cast<std::ptrdiff_t>(at), dir);
  u.files.push_back(std::move(f));
  return LineMap::insertion(n, inj.line, 1);
}

TransformResult inject_apply(const SourceUnit& unit, const std::vector<Injection>& injs) {
  SourceUnit u = unit;
  LineMap map = LineMap::identity(unit.main().line_count());
  TransformRecord rec;
  rec.op = rtl_op_name(RtlOp::IncludeInject);
  rec.set("count", static_cast<long long>(injs.size()));
  std::vector<std::string> names;
  for (std::size_t j = 0; j < injs.size(); ++j) {
    map = LineMap::compose(map, inject(u, injs[j]));
    const std::string k = std::to_string(j);
    rec.set("line" + k, injs[j].line).set("file" + k, injs[j].path).set("decls" + k, format_decls(injs[j].decls));
    for (const auto& d : injs[j].decls) names.push_back(d.first);
  }
  TransformResult r;
  r.variant = finish(u, RtlOp::IncludeInject);
  r.line_map = std::move(map);
  r.record = std::move(rec);
  r.expectations.push_back(Expectation::ignore_signals(std::move(names)));
  return r;
}

TransformResult remove_apply(const SourceUnit& unit, int line) {
  SourceUnit u = unit;
  const int n = u.main().line_count();
  auto cands = collect(u, RtlOp::IncludeRemove);
  Candidate& c = locate(cands, RtlOp::IncludeRemove, line, 0);
  c.module->items.erase(c.module->items.begin() + static_cast<std::ptrdiff_t>(c.index));
  auto& layout = u.main().layout;
  layout.erase(layout.begin() + (line - 1));
  shift_lines(u, 0, line + 1, -1);
  TransformResult r;
  r.variant = finish(u, RtlOp::IncludeRemove);
  r.line_map = LineMap::deletion(n, line, line, true);
  r.record.op = rtl_op_name(RtlOp::IncludeRemove);
  r.record.set("line", line);
  return r;
}

std::string fresh(const std::string& prefix, const std::set<std::string>& taken, Rng& rng) {
  static const char* kHex = "0123456789abcdef";
  for (;;) {
    std::string s = prefix;
    for (int i = 0; i < 6; ++i) s += kHex[rng() & 15];
    if (!taken.count(s)) return s;
  }
}

template <class T>
const T& pick(const std::vector<T>& xs, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
  return xs[d(rng)];
}

}  // namespace

std::vector<TransformSite> enumerate_sites(const SourceUnit& unit, RtlOp kind) {
  SourceUnit u = unit;
  std::vector<TransformSite> out;
  for (const auto& c : collect(u, kind))
    if (c.eligible) out.push_back({kind, c.loc, c.ordinal, c.evidence});
  return out;
}

TransformResult convert_assignment(const SourceUnit& unit, const TransformSite& site) {
  SourceUnit u = unit;
  auto cands = collect(u, RtlOp::AssignConv);
  Candidate& c = locate(cands, RtlOp::AssignConv, site.loc.line, site.ordinal);
  c.stmt->kind = c.stmt->kind == Stmt::Kind::BlockingAssign ? Stmt::Kind::NonBlockingAssign : Stmt::Kind::BlockingAssign;
  TransformResult r;
  r.variant = finish(u, RtlOp::AssignConv);
  r.line_map = LineMap::identity(unit.main().line_count());
  r.record = site_record(RtlOp::AssignConv, site.loc.line, site.ordinal);
  return r;
}

TransformResult literal_to_expression(const SourceUnit& unit, const TransformSite& site, Rng& rng) {
  SourceUnit u = unit;
  auto cands = collect(u, RtlOp::LiteralExpr);
  const Expr lit = *locate(cands, RtlOp::LiteralExpr, site.loc.line, site.ordinal).expr;
  const bool add = std::bernoulli_distribution(0.5)(rng);
  std::uint64_t first = 0;
  if (add) {
    first = std::uniform_int_distribution<std::uint64_t>(0, lit.value)(rng);
  } else {
    first = std::uniform_int_distribution<std::uint64_t>(lit.value, literal_mask(lit.width))(rng);
  }
  return literal_apply(unit, site.loc.line, site.ordinal, add, first);
}

TransformResult bit_double_negate(const SourceUnit& unit, const TransformSite& site) {
  SourceUnit u = unit;
  auto cands = collect(u, RtlOp::BitMutate);
  Expr* e = locate(cands, RtlOp::BitMutate, site.loc.line, site.ordinal).expr;
  const SourceLoc loc = e->loc;
  Expr inner = Expr::unary(UnaryOp::Not, std::move(*e), loc);
  inner.paren = true;
  *e = Expr::unary(UnaryOp::Not, std::move(inner), loc);
  TransformResult r;
  r.variant = finish(u, RtlOp::BitMutate);
  r.line_map = LineMap::identity(unit.main().line_count());
  r.record = site_record(RtlOp::BitMutate, site.loc.line, site.ordinal);
  return r;
}

TransformResult remove_unreachable_loop(const SourceUnit& unit, const TransformSite& site) {
  SourceUnit u = unit;
  const int n = u.main().line_count();
  auto cands = collect(u, RtlOp::DeadLoop);
  Candidate& c = locate(cands, RtlOp::DeadLoop, site.loc.line, site.ordinal);
  const int first = c.stmt->loc.line;
  const int last = last_line(*c.stmt);
  const int count = last - first + 1;
  const auto& layout = u.main().layout;

  bool has_exec = false;
  for (int l = first; l <= last; ++l) has_exec |= layout[static_cast<std::size_t>(l - 1)].cls == LineClass::Executable;
  // Non-executable lines above the loop slide into its body; they lose their target too.
  int run = first;
  if (has_exec)
    while (run - 1 >= c.module->loc.line && layout[static_cast<std::size_t>(run - 2)].cls != LineClass::Executable) --run;

  std::vector<LineMap::Entry> entries(static_cast<std::size_t>(n));
  for (int l = 1; l <= n; ++l) {
    auto& e = entries[static_cast<std::size_t>(l - 1)];
    if (l < run) {
      e = {LineMap::Fate::Kept, l};
    } else if (l < first) {
      e = {LineMap::Fate::Dead, 0};
    } else if (l <= last) {
      e = has_exec ? LineMap::Entry{LineMap::Fate::Dead, 0} : LineMap::Entry{LineMap::Fate::Forwarded, first};
    } else {
      e = {LineMap::Fate::Kept, l - count};
    }
  }

  c.parent->stmts.erase(c.parent->stmts.begin() + static_cast<std::ptrdiff_t>(c.index));
  auto& lay = u.main().layout;
  lay.erase(lay.begin() + (first - 1), lay.begin() + last);
  shift_lines(u, 0, last + 1, -count);

  TransformResult r;
  r.variant = finish(u, RtlOp::DeadLoop);
  r.line_map = LineMap::from_entries(std::move(entries), -count);
  r.record = site_record(RtlOp::DeadLoop, site.loc.line, site.ordinal);
  return r;
}

TransformResult mutate_includes(const SourceUnit& unit, IncludeMode mode, Rng& rng) {
  if (mode == IncludeMode::Remove) {
    const auto sites = enumerate_sites(unit, RtlOp::IncludeRemove);
    if (sites.empty()) throw IneligibleSite("include-remove: no unused include");
    return remove_apply(unit, pick(sites, rng).loc.line);
  }
  SourceUnit u = unit;
  std::vector<Injection> injs;
  const int k = std::uniform_int_distribution<int>(1, 3)(rng);
  auto taken = all_identifiers(u);
  std::set<std::string> paths;
  for (const auto& f : u.files) paths.insert(f.path);
  for (int j = 0; j < k; ++j) {
    const auto sites = enumerate_sites(u, RtlOp::IncludeInject);
    if (sites.empty()) throw IneligibleSite("include-inject: no insertion point");
    Injection inj;
    inj.line = pick(sites, rng).loc.line;
    inj.path = fresh("inc_", paths, rng) + ".vh";
    paths.insert(inj.path);
    const int decls = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int d = 0; d < decls; ++d) {
      auto name = fresh("dmy_", taken, rng);
      taken.insert(name);
      inj.decls.emplace_back(name, std::uniform_int_distribution<unsigned>(1, 8)(rng));
    }
    inject(u, inj);
    injs.push_back(std::move(inj));
  }
  return inject_apply(unit, injs);
}

TransformResult apply_rtl_op(RtlOp op, const SourceUnit& unit, Rng& rng) {
  if (op == RtlOp::IncludeInject) return mutate_includes(unit, IncludeMode::Inject, rng);
  if (op == RtlOp::IncludeRemove) return mutate_includes(unit, IncludeMode::Remove, rng);
  const auto sites = enumerate_sites(unit, op);
  if (sites.empty()) throw IneligibleSite(std::string(rtl_op_name(op)) + ": no eligible site");
  const auto& site = pick(sites, rng);
  switch (op) {
    case RtlOp::AssignConv: return convert_assignment(unit, site);
    case RtlOp::LiteralExpr: return literal_to_expression(unit, site, rng);
    case RtlOp::BitMutate: return bit_double_negate(unit, site);
    default: return remove_unreachable_loop(unit, site);
  }
}

TransformResult apply_rtl_record(const SourceUnit& unit, const TransformRecord& record) {
  const auto op = parse_rtl_op(record.op);
  if (!op) throw IneligibleSite("unknown transformation " + record.op);
  try {
    switch (*op) {
      case RtlOp::IncludeInject: {
        std::vector<Injection> injs;
        const auto count = record.get_int("count");
        for (long long j = 0; j < count; ++j) {
          const std::string k = std::to_string(j);
          Injection inj;
          inj.line = static_cast<int>(record.get_int("line" + k));
          inj.path = record.get("file" + k).value_or("");
          inj.decls = parse_decls(record.get("decls" + k).value_or(""));
          injs.push_back(std::move(inj));
        }
        return inject_apply(unit, injs);
      }
      case RtlOp::IncludeRemove:
        return remove_apply(unit, static_cast<int>(record.get_int("line")));
      case RtlOp::LiteralExpr:
        return literal_apply(unit, static_cast<int>(record.get_int("line")), static_cast<int>(record.get_int("ordinal")),
                             record.get("form") == "add", std::stoull(record.get("operand").value_or("x")));
      default: {
        TransformSite site;
        site.kind = *op;
        site.loc.line = static_cast<int>(record.get_int("line"));
        site.ordinal = static_cast<int>(record.get_int("ordinal"));
        if (*op == RtlOp::AssignConv) return convert_assignment(unit, site);
        if (*op == RtlOp::BitMutate) return bit_double_negate(unit, site);
        return remove_unreachable_loop(unit, site);
      }
    }
  } catch (const std::invalid_argument& e) {
    throw IneligibleSite("malformed record '" + record.to_string() + "': " + e.what());
  }
}

namespace {

void absorb(ProResult& acc, TransformResult&& r) {
  acc.line_map = LineMap::compose(acc.line_map, r.line_map);
  acc.records.push_back(std::move(r.record));
  for (auto& e : r.expectations) acc.expectations.push_back(std::move(e));
  acc.variant = std::move(r.variant);
}

}  // namespace

ProResult pro_pipeline(const SourceUnit& unit, int rounds, Rng& rng, const std::vector<double>& weights) {
  ProResult acc;
  acc.variant = unit;
  acc.line_map = LineMap::identity(unit.main().line_count());
  for (int round = 0; round < rounds; ++round) {
    std::vector<double> w(kRtlOps.size(), 1.0);
    for (std::size_t i = 0; i < w.size() && i < weights.size(); ++i) w[i] = weights[i];
    bool applied = false;
    while (!applied && std::any_of(w.begin(), w.end(), [](double x) { return x > 0; })) {
      const std::size_t k = std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng);
      try {
        absorb(acc, apply_rtl_op(kRtlOps[k], acc.variant, rng));
        applied = true;
      } catch (const IneligibleSite&) {
        w[k] = 0;
      }
    }
    if (!applied) {
      acc.stopped_early = true;
      break;
    }
  }
  return acc;
}

ProResult replay_rtl_records(const SourceUnit& unit, const std::vector<TransformRecord>& records) {
  ProResult acc;
  acc.variant = unit;
  acc.line_map = LineMap::identity(unit.main().line_count());
  for (const auto& rec : records) absorb(acc, apply_rtl_record(acc.variant, rec));
  return acc;
}

ActionPlan remap_plan(const ActionPlan& plan, const LineMap& map) {
  ActionPlan out;
  out.fixed = plan.fixed;
  std::vector<std::optional<std::size_t>> moved(plan.actions.size());
  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    PlannedAction a = plan.actions[i];
    auto& act = a.action;
    if (act.kind == DebugAction::Kind::AddBreakpoint || act.kind == DebugAction::Kind::Fold ||
        act.kind == DebugAction::Kind::Unfold) {
      const auto l = map.map(act.line);
      if (!l) continue;
      act.line = *l;
      if (act.kind == DebugAction::Kind::Fold) {
        const auto e = map.map(act.end_line);
        if (!e) continue;
        act.end_line = *e;
      }
    }
    if (a.canonical > 0) a.canonical = map.map(a.canonical).value_or(a.canonical);
    moved[i] = out.actions.size();
    out.actions.push_back(a);
  }
  for (auto p : plan.probes) {
    if (p.kind != Probe::Kind::Branch) {
      if (p.planned >= moved.size() || !moved[p.planned]) continue;
      p.planned = *moved[p.planned];
    }
    out.probes.push_back(p);
  }
  return out;
}

}  // namespace hdldiff
