#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hdldiff/hdl/box.hpp"

namespace hdldiff {

struct SourceLoc {
  int file = 0;
  int line = 0;
  int col = 0;
};

enum class UnaryOp { Not, Neg, LogicalNot };
enum class BinaryOp { Add, Sub, And, Or, Xor, Eq, Ne, Lt, Gt, Shl, Shr };

const char* to_string(UnaryOp op);
const char* to_string(BinaryOp op);

struct Expr {
  enum class Kind { Literal, Ident, Unary, Binary };

  Kind kind = Kind::Literal;
  SourceLoc loc;

  // Literal
  unsigned width = 32;
  std::uint64_t value = 0;
  bool sized = false;
  char base = 'd';  // 'b', 'h' or 'd'

  // Ident
  std::string name;

  // Unary / Binary
  UnaryOp unary_op = UnaryOp::Not;
  BinaryOp binary_op = BinaryOp::Add;
  Box<Expr> lhs;  // operand for Unary
  Box<Expr> rhs;

  bool paren = false;  // written with surrounding parentheses

  static Expr literal(unsigned width, std::uint64_t value, char base = 'h', SourceLoc loc = {});
  static Expr unsized(std::uint64_t value, SourceLoc loc = {});
  static Expr ident(std::string name, SourceLoc loc = {});
  static Expr unary(UnaryOp op, Expr operand, SourceLoc loc = {});
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs, SourceLoc loc = {});
};

struct Stmt {
  enum class Kind { BlockingAssign, NonBlockingAssign, If, For, Block };

  Kind kind = Kind::Block;
  SourceLoc loc;

  // Assignments
  std::string target;
  Expr value;

  // If
  Expr cond;
  Box<Stmt> then_branch;
  Box<Stmt> else_branch;  // empty when absent
  int else_line = 0;

  // For: init and step are assignments to the loop variable; body in then_branch.
  Box<Stmt> init;
  Box<Stmt> step;

  // Block
  std::vector<Stmt> stmts;
  int end_line = 0;

  bool is_assign() const { return kind == Kind::BlockingAssign || kind == Kind::NonBlockingAssign; }

  static Stmt assign(bool blocking, std::string target, Expr value, SourceLoc loc = {});
};

enum class NetKind { Wire, Reg, Integer };

struct Decl {
  NetKind kind = NetKind::Wire;
  unsigned width = 1;
  std::vector<std::string> names;
  SourceLoc loc;
};

enum class PortDir { Input, Output };

struct Port {
  PortDir dir = PortDir::Input;
  NetKind kind = NetKind::Wire;
  unsigned width = 1;
  std::string name;
  SourceLoc loc;
};

struct ContinuousAssign {
  std::string target;
  Expr value;
  SourceLoc loc;
};

struct Process {
  enum class Kind { Always, Initial };
  Kind kind = Kind::Always;
  std::string clock;  // posedge signal for Always
  Stmt body;
  SourceLoc loc;
};

struct Connection {
  std::string port;
  std::optional<Expr> expr;  // empty for .p()
  SourceLoc loc;
};

struct Instance {
  std::string module_name;
  std::string instance_name;
  std::vector<Connection> connections;
  SourceLoc loc;
};

struct IncludeDirective {
  std::string path;
  int file = -1;  // index into SourceUnit::files
  SourceLoc loc;
};

using Item = std::variant<Decl, ContinuousAssign, Process, Instance, IncludeDirective>;

struct Module {
  std::string name;
  std::vector<Port> ports;
  std::vector<Item> items;
  SourceLoc loc;
  int end_line = 0;
};

enum class LineClass { Executable, Comment, Blank, DeclarationOnly };

const char* to_string(LineClass c);

struct LineInfo {
  LineClass cls = LineClass::Blank;
  std::string comment;  // full text for Comment lines, trailing "//..." otherwise
};

struct SourceFile {
  std::string path;
  std::vector<Module> modules;  // main file only
  std::vector<Decl> decls;      // included files only
  std::vector<LineInfo> layout;  // index 0 is line 1

  int line_count() const { return static_cast<int>(layout.size()); }
  LineClass line_class(int line) const;
};

/// A parsed design: file 0 holds the modules, later files are included declaration files.
struct SourceUnit {
  std::vector<SourceFile> files;

  SourceFile& main() { return files.front(); }
  const SourceFile& main() const { return files.front(); }
  const Module* find_module(const std::string& name) const;
};

// Traversal helpers.
void for_each_stmt(const Stmt& s, const std::function<void(const Stmt&)>& fn);
void for_each_stmt(Stmt& s, const std::function<void(Stmt&)>& fn);
void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn);
void for_each_expr(Expr& e, const std::function<void(Expr&)>& fn);
/// Visits every expression of a statement tree, including for-loop headers.
void for_each_stmt_expr(const Stmt& s, const std::function<void(const Expr&)>& fn);

/// Module items and their statements in document order.
template <class Fn>
void for_each_process(const Module& m, Fn&& fn) {
  for (const auto& item : m.items)
    if (const auto* p = std::get_if<Process>(&item)) fn(*p);
}

/// Applies `fn` to every line number stored in the unit for file `file`.
void for_each_line_ref(SourceUnit& unit, int file, const std::function<void(int&)>& fn);

/// Renumbers lines of `file`: every line >= from moves by delta. Layout is not touched.
void shift_lines(SourceUnit& unit, int file, int from, int delta);

/// Last source line covered by a statement.
int last_line(const Stmt& s);

bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Stmt& a, const Stmt& b);
bool structurally_equal(const SourceUnit& a, const SourceUnit& b);

}  // namespace hdldiff
