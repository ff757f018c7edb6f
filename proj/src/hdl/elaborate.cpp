#include "hdldiff/hdl/elaborate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace hdldiff {

int Design::slot(const std::string& name) const {
  for (std::size_t i = 0; i < signals.size(); ++i)
    if (signals[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> top_candidates(const SourceUnit& unit) {
  std::set<std::string> instantiated;
  for (const auto& m : unit.main().modules)
    for (const auto& item : m.items)
      if (const auto* inst = std::get_if<Instance>(&item)) instantiated.insert(inst->module_name);
  std::vector<std::string> out;
  for (const auto& m : unit.main().modules)
    if (!instantiated.count(m.name)) out.push_back(m.name);
  return out;
}

namespace {

enum class Driver { None, Assign, Process, Stimulus };

class Flattener {
 public:
  explicit Flattener(const SourceUnit& unit) : unit_(unit) {}

  Design run() {
    std::map<std::string, int> names;
    for (const auto& m : unit_.main().modules)
      if (!names.emplace(m.name, 0).second) throw ElaborationError("module '" + m.name + "' defined twice");
    const auto tops = top_candidates(unit_);
    if (tops.empty()) throw ElaborationError("no top module (instantiation cycle)");
    if (tops.size() > 1) {
      std::string list;
      for (const auto& t : tops) list += (list.empty() ? "" : ", ") + t;
      throw ElaborationError("ambiguous top module: " + list);
    }
    design_.top = tops.front();
    flatten(*unit_.find_module(design_.top), "", 0);
    order_assigns();
    resolve_clock();
    for (std::size_t i = 0; i < design_.signals.size(); ++i) {
      const auto& s = design_.signals[i];
      if (s.top_input && (!design_.clock || *design_.clock != static_cast<int>(i)))
        design_.stimulus.push_back(static_cast<int>(i));
      if (s.top_level && s.kind != NetKind::Integer) design_.waves.push_back(static_cast<int>(i));
    }
    return std::move(design_);
  }

 private:
  using Scope = std::unordered_map<std::string, int>;

  int add_signal(const std::string& prefix, const std::string& name, NetKind kind, unsigned width, bool top_input) {
    Signal s;
    s.name = prefix + name;
    s.kind = kind;
    s.width = width;
    s.top_level = prefix.empty();
    s.top_input = top_input;
    design_.signals.push_back(s);
    drivers_.push_back(top_input ? Driver::Stimulus : Driver::None);
    return static_cast<int>(design_.signals.size() - 1);
  }

  static NameResolver resolver(const Scope& scope, const Design& d) {
    return [&scope, &d](const std::string& n) -> std::optional<SignalRef> {
      const auto it = scope.find(n);
      if (it == scope.end()) return std::nullopt;
      return SignalRef{it->second, d.signals[static_cast<std::size_t>(it->second)].width};
    };
  }

  CExpr compile(const Expr& e, const Scope& scope, const std::string& where) const {
    try {
      return compile_expr(e, resolver(scope, design_));
    } catch (const std::invalid_argument& err) {
      throw ElaborationError(where + ": " + err.what());
    }
  }

  void drive(int slot, Driver how, const std::string& where) {
    auto& cur = drivers_[static_cast<std::size_t>(slot)];
    const auto& sig = design_.signals[static_cast<std::size_t>(slot)];
    if (how == Driver::Assign) {
      if (sig.kind != NetKind::Wire) throw ElaborationError(where + ": continuous assignment to variable '" + sig.name + "'");
      if (cur != Driver::None) throw ElaborationError(where + ": '" + sig.name + "' has multiple drivers");
    } else {
      if (sig.kind == NetKind::Wire) throw ElaborationError(where + ": procedural assignment to wire '" + sig.name + "'");
      if (cur == Driver::Assign || cur == Driver::Stimulus)
        throw ElaborationError(where + ": '" + sig.name + "' has multiple drivers");
    }
    cur = how;
  }

  CStmt compile_stmt(const Stmt& s, const Scope& scope, const std::string& where) {
    CStmt c;
    c.kind = s.kind;
    c.line = s.loc.line;
    switch (s.kind) {
      case Stmt::Kind::BlockingAssign:
      case Stmt::Kind::NonBlockingAssign: {
        const auto it = scope.find(s.target);
        if (it == scope.end()) throw ElaborationError(where + ": unresolved target '" + s.target + "'");
        c.target = it->second;
        c.target_width = design_.signals[static_cast<std::size_t>(c.target)].width;
        drive(c.target, Driver::Process, where + ":" + std::to_string(s.loc.line));
        c.value = compile(s.value, scope, where);
        break;
      }
      case Stmt::Kind::If:
        c.cond = compile(s.cond, scope, where);
        c.children.push_back(compile_stmt(*s.then_branch, scope, where));
        if (s.else_branch) {
          c.has_else = true;
          c.children.push_back(compile_stmt(*s.else_branch, scope, where));
        }
        break;
      case Stmt::Kind::For:
        c.cond = compile(s.cond, scope, where);
        c.children.push_back(compile_stmt(*s.init, scope, where));
        c.children.push_back(compile_stmt(*s.step, scope, where));
        c.children.push_back(compile_stmt(*s.then_branch, scope, where));
        break;
      case Stmt::Kind::Block:
        for (const auto& child : s.stmts) c.children.push_back(compile_stmt(child, scope, where));
        break;
    }
    return c;
  }

  void flatten(const Module& m, const std::string& prefix, int depth) {
    if (depth > 16) throw ElaborationError("instantiation too deep below '" + m.name + "'");
    Scope scope;
    const bool top = prefix.empty();
    for (const auto& p : m.ports)
      scope[p.name] = add_signal(prefix, p.name, p.kind, p.width, top && p.dir == PortDir::Input);
    auto add_decl = [&](const Decl& d) {
      for (const auto& n : d.names) scope[n] = add_signal(prefix, n, d.kind, d.width, false);
    };
    for (const auto& item : m.items) {
      if (const auto* d = std::get_if<Decl>(&item)) add_decl(*d);
      if (const auto* inc = std::get_if<IncludeDirective>(&item)) {
        if (inc->file < 0 || inc->file >= static_cast<int>(unit_.files.size()))
          throw ElaborationError("unresolved include \"" + inc->path + "\"");
        for (const auto& d : unit_.files[static_cast<std::size_t>(inc->file)].decls) add_decl(d);
      }
    }
    const std::string where_mod = m.name;
    for (const auto& item : m.items) {
      if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
        const auto it = scope.find(a->target);
        if (it == scope.end()) throw ElaborationError(where_mod + ": unresolved target '" + a->target + "'");
        drive(it->second, Driver::Assign, where_mod + ":" + std::to_string(a->loc.line));
        design_.assigns.push_back({it->second, compile(a->value, scope, where_mod), a->loc.line});
      } else if (const auto* p = std::get_if<Process>(&item)) {
        ElabProcess ep;
        ep.kind = p->kind;
        ep.line = p->loc.line;
        ep.module = m.name;
        ep.instance = prefix;
        ep.body = compile_stmt(p->body, scope, where_mod);
        if (p->kind == Process::Kind::Always) {
          const auto it = scope.find(p->clock);
          if (it == scope.end()) throw ElaborationError(where_mod + ": unresolved clock '" + p->clock + "'");
          clocks_.push_back(it->second);
        }
        design_.processes.push_back(std::move(ep));
      } else if (const auto* inst = std::get_if<Instance>(&item)) {
        const Module* child = unit_.find_module(inst->module_name);
        if (!child) throw ElaborationError(where_mod + ": unknown module '" + inst->module_name + "'");
        const std::string child_prefix = prefix + inst->instance_name + ".";
        const std::size_t first_slot = design_.signals.size();
        flatten(*child, child_prefix, depth + 1);
        std::set<std::string> seen;
        for (const auto& conn : inst->connections) {
          const auto port = std::find_if(child->ports.begin(), child->ports.end(),
                                         [&](const Port& p) { return p.name == conn.port; });
          if (port == child->ports.end())
            throw ElaborationError(where_mod + ": module '" + child->name + "' has no port '" + conn.port + "'");
          if (!seen.insert(conn.port).second)
            throw ElaborationError(where_mod + ": port '" + conn.port + "' connected twice");
          if (!conn.expr) continue;
          const int child_slot = static_cast<int>(first_slot) +
                                 static_cast<int>(std::distance(child->ports.begin(), port));
          const std::string where = where_mod + ":" + std::to_string(conn.loc.line);
          if (port->dir == PortDir::Input) {
            drive(child_slot, Driver::Assign, where);
            design_.assigns.push_back({child_slot, compile(*conn.expr, scope, where), 0});
          } else {
            if (conn.expr->kind != Expr::Kind::Ident)
              throw ElaborationError(where + ": output port '" + conn.port + "' must connect to a net");
            const auto it = scope.find(conn.expr->name);
            if (it == scope.end()) throw ElaborationError(where + ": unresolved net '" + conn.expr->name + "'");
            drive(it->second, Driver::Assign, where);
            CExpr src;
            src.kind = Expr::Kind::Ident;
            src.sig = child_slot;
            src.width = design_.signals[static_cast<std::size_t>(child_slot)].width;
            design_.assigns.push_back({it->second, src, 0});
          }
        }
      }
    }
  }

  void order_assigns() {
    const auto n = design_.assigns.size();
    std::unordered_map<int, std::size_t> driver_of;
    for (std::size_t i = 0; i < n; ++i) driver_of[design_.assigns[i].target] = i;
    std::vector<int> state(n, 0);
    std::vector<ElabAssign> ordered;
    ordered.reserve(n);
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
      if (state[i] == 2) return;
      if (state[i] == 1)
        throw ElaborationError("combinational loop through '" +
                               design_.signals[static_cast<std::size_t>(design_.assigns[i].target)].name + "'");
      state[i] = 1;
      std::function<void(const CExpr&)> deps = [&](const CExpr& e) {
        if (e.kind == Expr::Kind::Ident) {
          const auto it = driver_of.find(e.sig);
          if (it != driver_of.end()) visit(it->second);
        }
        for (const auto& a : e.args) deps(a);
      };
      deps(design_.assigns[i].value);
      state[i] = 2;
      ordered.push_back(design_.assigns[i]);
    };
    for (std::size_t i = 0; i < n; ++i) visit(i);
    design_.assigns = std::move(ordered);
  }

  void resolve_clock() {
    std::optional<int> clock;
    for (int slot : clocks_) {
      int cur = slot;
      for (int hops = 0; hops < 64; ++hops) {
        const auto it = std::find_if(design_.assigns.begin(), design_.assigns.end(),
                                     [&](const ElabAssign& a) { return a.target == cur; });
        if (it == design_.assigns.end() || it->value.kind != Expr::Kind::Ident) break;
        cur = it->value.sig;
      }
      const auto& sig = design_.signals[static_cast<std::size_t>(cur)];
      if (!sig.top_input) throw ElaborationError("clock '" + sig.name + "' is not driven by a top-level input");
      if (clock && *clock != cur) throw ElaborationError("more than one clock");
      clock = cur;
    }
    design_.clock = clock;
  }

  const SourceUnit& unit_;
  Design design_;
  std::vector<Driver> drivers_;
  std::vector<int> clocks_;
};

}  // namespace

Design elaborate(const SourceUnit& unit) {
  if (unit.files.empty()) throw ElaborationError("empty source unit");
  return Flattener(unit).run();
}

std::vector<std::pair<std::string, int>> instance_counts(const SourceUnit& unit) {
  std::map<std::string, int> counts;
  for (const auto& m : unit.main().modules) counts[m.name] = 0;
  std::function<void(const Module&, int)> walk = [&](const Module& m, int depth) {
    ++counts[m.name];
    if (depth > 16) return;
    for (const auto& item : m.items)
      if (const auto* inst = std::get_if<Instance>(&item))
        if (const Module* child = unit.find_module(inst->module_name)) walk(*child, depth + 1);
  };
  const auto tops = top_candidates(unit);
  if (tops.size() == 1) walk(*unit.find_module(tops.front()), 0);
  return {counts.begin(), counts.end()};
}

}  // namespace hdldiff
