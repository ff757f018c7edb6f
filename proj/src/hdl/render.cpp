#include "hdldiff/hdl/render.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hdldiff {

namespace {

int expr_prec(const Expr& e) {
  if (e.kind == Expr::Kind::Unary) return 7;
  if (e.kind != Expr::Kind::Binary) return 8;
  switch (e.binary_op) {
    case BinaryOp::Or: return 0;
    case BinaryOp::Xor: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Gt: return 4;
    case BinaryOp::Shl:
    case BinaryOp::Shr: return 5;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 6;
  }
  return 8;
}

std::string literal_text(const Expr& e) {
  if (!e.sized) return std::to_string(e.value);
  std::string digits;
  switch (e.base) {
    case 'b':
      for (unsigned i = e.width; i-- > 0;) digits += ((e.value >> i) & 1U) ? '1' : '0';
      break;
    case 'd':
      digits = std::to_string(e.value);
      break;
    default: {
      static const char* hex = "0123456789abcdef";
      std::uint64_t v = e.value;
      do {
        digits.insert(digits.begin(), hex[v & 0xF]);
        v >>= 4;
      } while (v != 0);
      break;
    }
  }
  return std::to_string(e.width) + "'" + e.base + digits;
}

std::string render_sub(const Expr& e, bool needs_paren) {
  std::string s = render_expr(e);
  if (e.paren) return s;  // render_expr already wrapped it
  return needs_paren ? "(" + s + ")" : s;
}

}  // namespace

std::string render_expr(const Expr& e) {
  std::string s;
  switch (e.kind) {
    case Expr::Kind::Literal:
      s = literal_text(e);
      break;
    case Expr::Kind::Ident:
      s = e.name;
      break;
    case Expr::Kind::Unary:
      s = std::string(to_string(e.unary_op)) + render_sub(*e.lhs, expr_prec(*e.lhs) < 7);
      break;
    case Expr::Kind::Binary: {
      const int p = expr_prec(e);
      s = render_sub(*e.lhs, expr_prec(*e.lhs) < p) + " " + to_string(e.binary_op) + " " +
          render_sub(*e.rhs, expr_prec(*e.rhs) <= p);
      break;
    }
  }
  return e.paren ? "(" + s + ")" : s;
}

namespace {

struct LineBuffer {
  int depth = -1;
  std::string text;
};

class Emitter {
 public:
  explicit Emitter(int line_count) : lines_(static_cast<std::size_t>(line_count)) {}

  void put(int line, int depth, const std::string& frag) {
    if (line < 1) throw std::logic_error("render: node without a line");
    if (static_cast<std::size_t>(line) > lines_.size()) lines_.resize(static_cast<std::size_t>(line));
    auto& buf = lines_[static_cast<std::size_t>(line - 1)];
    if (buf.depth < 0) {
      buf.depth = depth;
      buf.text = frag;
      return;
    }
    const bool glue = buf.text.empty() || buf.text.back() == '(' || frag.front() == ')' || frag.front() == ',' ||
                      frag.front() == ';';
    buf.text += glue ? frag : " " + frag;
  }

  void decl(const Decl& d, int depth) {
    std::string s = d.kind == NetKind::Wire ? "wire" : d.kind == NetKind::Reg ? "reg" : "integer";
    if (d.kind != NetKind::Integer && d.width > 1) s += " [" + std::to_string(d.width - 1) + ":0]";
    for (std::size_t i = 0; i < d.names.size(); ++i) s += (i ? ", " : " ") + d.names[i];
    put(d.loc.line, depth, s + ";");
  }

  void stmt(const Stmt& s, int depth) {
    switch (s.kind) {
      case Stmt::Kind::BlockingAssign:
        put(s.loc.line, depth, s.target + " = " + render_expr(s.value) + ";");
        break;
      case Stmt::Kind::NonBlockingAssign:
        put(s.loc.line, depth, s.target + " <= " + render_expr(s.value) + ";");
        break;
      case Stmt::Kind::If:
        put(s.loc.line, depth, "if (" + render_expr(s.cond) + ")");
        child(*s.then_branch, depth);
        if (s.else_branch) {
          put(s.else_line, depth, "else");
          child(*s.else_branch, depth);
        }
        break;
      case Stmt::Kind::For:
        put(s.loc.line, depth,
            "for (" + s.init->target + " = " + render_expr(s.init->value) + "; " + render_expr(s.cond) + "; " +
                s.step->target + " = " + render_expr(s.step->value) + ")");
        child(*s.then_branch, depth);
        break;
      case Stmt::Kind::Block:
        put(s.loc.line, depth, "begin");
        for (const auto& c : s.stmts) stmt(c, depth + 1);
        put(s.end_line, depth, "end");
        break;
    }
  }

  void child(const Stmt& s, int depth) { stmt(s, s.kind == Stmt::Kind::Block ? depth : depth + 1); }

  void module(const Module& m) {
    put(m.loc.line, 0, "module " + m.name + "(");
    for (std::size_t i = 0; i < m.ports.size(); ++i) {
      const auto& p = m.ports[i];
      std::string s = p.dir == PortDir::Input ? "input" : "output";
      s += p.kind == NetKind::Reg ? " reg" : " wire";
      if (p.width > 1) s += " [" + std::to_string(p.width - 1) + ":0]";
      s += " " + p.name;
      put(p.loc.line, 1, s);
      if (i + 1 < m.ports.size()) put(p.loc.line, 1, ",");
    }
    put(m.ports.empty() ? m.loc.line : m.ports.back().loc.line, 0, ");");
    for (const auto& item : m.items) std::visit([&](const auto& x) { this->item(x); }, item);
    put(m.end_line, 0, "endmodule");
  }

  void item(const Decl& d) { decl(d, 1); }
  void item(const ContinuousAssign& a) { put(a.loc.line, 1, "assign " + a.target + " = " + render_expr(a.value) + ";"); }
  void item(const Process& p) {
    put(p.loc.line, 1, p.kind == Process::Kind::Always ? "always @(posedge " + p.clock + ")" : std::string("initial"));
    child(p.body, 1);
  }
  void item(const Instance& inst) {
    put(inst.loc.line, 1, inst.module_name + " " + inst.instance_name + "(");
    for (std::size_t i = 0; i < inst.connections.size(); ++i) {
      const auto& c = inst.connections[i];
      put(c.loc.line, 2, "." + c.port + "(" + (c.expr ? render_expr(*c.expr) : std::string()) + ")");
      if (i + 1 < inst.connections.size()) put(c.loc.line, 2, ",");
    }
    put(inst.connections.empty() ? inst.loc.line : inst.connections.back().loc.line, 1, ");");
  }
  void item(const IncludeDirective& inc) { put(inc.loc.line, 1, "`include \"" + inc.path + "\""); }

  std::string finish(const std::vector<LineInfo>& layout) const {
    std::string out;
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      const auto& buf = lines_[i];
      const LineInfo* info = i < layout.size() ? &layout[i] : nullptr;
      if (buf.depth >= 0) {
        out += std::string(static_cast<std::size_t>(buf.depth) * 2, ' ') + buf.text;
        if (info && !info->comment.empty()) {
          const auto pos = info->comment.find("//");
          out += " " + info->comment.substr(pos == std::string::npos ? 0 : pos);
        }
      } else if (info && !info->comment.empty()) {
        out += info->comment;
      }
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<LineBuffer> lines_;
};

}  // namespace

std::string render_file(const SourceUnit& unit, int file) {
  const auto& f = unit.files.at(static_cast<std::size_t>(file));
  Emitter em(f.line_count());
  for (const auto& d : f.decls) em.decl(d, 0);
  for (const auto& m : f.modules) em.module(m);
  return em.finish(f.layout);
}

std::string render(const SourceUnit& unit) { return render_file(unit, 0); }

void write_unit(const SourceUnit& unit, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (std::size_t i = 0; i < unit.files.size(); ++i) {
    const fs::path p = fs::path(dir) / unit.files[i].path;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << render_file(unit, static_cast<int>(i));
  }
}

}  // namespace hdldiff
