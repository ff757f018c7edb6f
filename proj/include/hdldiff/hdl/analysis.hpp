#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hdldiff/hdl/ast.hpp"

namespace hdldiff {

/// Executable lines of a file in ascending order.
std::vector<int> executable_lines(const SourceFile& f);

/// Module of the main file whose span [header line, endmodule line] holds `line`.
const Module* module_at(const SourceUnit& unit, int line);

/// Line of the first assignment or if a statement executes on entry, or 0 when
/// reaching it may depend on a loop guard.
int entry_line(const Stmt& s);

/// Number of assignment and if statements starting on each line of the main file.
std::map<int, int> atomic_statements_per_line(const SourceUnit& unit);

/// Flattened instance count of a module (the top counts once).
int instance_count(const SourceUnit& unit, const std::string& module);

/// Declared width of a name visible in a module (ports, declarations, included declarations).
std::optional<unsigned> declared_width(const SourceUnit& unit, const Module& m, const std::string& name);
std::optional<NetKind> declared_kind(const SourceUnit& unit, const Module& m, const std::string& name);

/// Iteration count of a for loop whose header only involves the loop variable and
/// constants; nullopt otherwise or when it exceeds `limit`.
std::optional<int> trip_count(const SourceUnit& unit, const Module& m, const Stmt& loop, int limit = 4096);

/// Identifiers read by an expression.
std::set<std::string> reads(const Expr& e);

/// Names read and written anywhere in a statement tree (loop headers included).
void collect_uses(const Stmt& s, std::set<std::string>& read, std::set<std::string>& written);

/// Calls fn(stmt, parent, inside_loop) for every statement of every process of a module.
/// `parent` is null for a process body.
template <class Fn>
void walk_statements(const Module& m, Fn&& fn) {
  struct Walker {
    Fn& fn;
    void go(const Stmt& s, const Stmt* parent, bool in_loop) {
      fn(s, parent, in_loop);
      switch (s.kind) {
        case Stmt::Kind::If:
          go(*s.then_branch, &s, in_loop);
          if (s.else_branch) go(*s.else_branch, &s, in_loop);
          break;
        case Stmt::Kind::For:
          go(*s.then_branch, &s, true);
          break;
        case Stmt::Kind::Block:
          for (const auto& c : s.stmts) go(c, &s, in_loop);
          break;
        default:
          break;
      }
    }
  };
  Walker w{fn};
  for (const auto& item : m.items)
    if (const auto* p = std::get_if<Process>(&item)) w.go(p->body, nullptr, false);
}

}  // namespace hdldiff
