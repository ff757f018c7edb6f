#include "hdldiff/hdl/parser.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>
#include <vector>

namespace hdldiff {

ParseError::ParseError(std::string file, int line, int col, const std::string& msg)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
      file_(std::move(file)),
      line_(line),
      col_(col) {}

namespace {

enum class Tok { Ident, Number, String, Directive, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 0;
  int col = 0;
};

struct Lexed {
  std::vector<Token> tokens;
  std::vector<LineInfo> layout;
};

Lexed lex(std::string_view text, const std::string& path) {
  Lexed out;
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto nl = text.find('\n', start);
      if (nl == std::string_view::npos) {
        if (start < text.size()) lines.emplace_back(text.substr(start));
        break;
      }
      lines.emplace_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }
  out.layout.resize(lines.size());
  static const std::vector<std::string> kPuncts = {"<<", ">>", "<=", "==", "!=", "(", ")", "[", "]", ";", ",",
                                                   ".",  "@",  "=",  "<",  ">",  "+", "-", "&", "|", "^", "~",
                                                   "!",  ":",  "#"};
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string line = lines[li];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const int lineno = static_cast<int>(li) + 1;
    std::size_t i = 0;
    bool has_token = false;
    while (i < line.size()) {
      const char c = line[i];
      const int col = static_cast<int>(i) + 1;
      if (c == ' ' || c == '\t') {
        ++i;
        continue;
      }
      if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') {
        out.layout[li].comment = has_token ? line.substr(i) : line;
        break;
      }
      if (c == '/' && i + 1 < line.size() && line[i + 1] == '*')
        throw ParseError(path, lineno, col, "block comments are not supported");
      Token t;
      t.line = lineno;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_' || line[j] == '$'))
          ++j;
        t.kind = Tok::Ident;
        t.text = line.substr(i, j - i);
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
        if (j < line.size() && line[j] == '\'') {
          ++j;
          if (j < line.size() && std::isalpha(static_cast<unsigned char>(line[j]))) ++j;
          while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
        }
        t.kind = Tok::Number;
        t.text = line.substr(i, j - i);
        i = j;
      } else if (c == '"') {
        const auto close = line.find('"', i + 1);
        if (close == std::string::npos) throw ParseError(path, lineno, col, "unterminated string");
        t.kind = Tok::String;
        t.text = line.substr(i + 1, close - i - 1);
        i = close + 1;
      } else if (c == '`') {
        std::size_t j = i + 1;
        while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
        t.kind = Tok::Directive;
        t.text = line.substr(i + 1, j - i - 1);
        i = j;
      } else {
        bool matched = false;
        for (const auto& p : kPuncts) {
          if (line.compare(i, p.size(), p) == 0) {
            t.kind = Tok::Punct;
            t.text = p;
            i += p.size();
            matched = true;
            break;
          }
        }
        if (!matched) throw ParseError(path, lineno, col, std::string("unexpected character '") + c + "'");
      }
      has_token = true;
      out.tokens.push_back(std::move(t));
    }
    auto& info = out.layout[li];
    if (has_token)
      info.cls = LineClass::DeclarationOnly;
    else if (!info.comment.empty())
      info.cls = LineClass::Comment;
    else
      info.cls = LineClass::Blank;
  }
  Token end;
  end.kind = Tok::End;
  end.line = static_cast<int>(lines.size()) + (lines.empty() ? 1 : 0);
  end.col = 1;
  out.tokens.push_back(end);
  return out;
}

const std::unordered_set<std::string> kKeywords = {"module", "endmodule", "input",   "output", "wire",   "reg",
                                                   "integer", "assign",   "always",  "initial", "posedge", "begin",
                                                   "end",    "if",        "else",    "for"};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string path, int file_index)
      : toks_(std::move(tokens)), path_(std::move(path)), file_(file_index) {}

  std::vector<Module> parse_modules() {
    std::vector<Module> mods;
    while (peek().kind != Tok::End) mods.push_back(parse_module());
    return mods;
  }

  std::vector<Decl> parse_decls() {
    std::vector<Decl> decls;
    while (peek().kind != Tok::End) {
      if (!is_kw("wire") && !is_kw("reg") && !is_kw("integer")) fail("included files may only contain declarations");
      decls.push_back(parse_decl());
    }
    return decls;
  }

  const std::set<int>& executable_lines() const { return exec_lines_; }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  SourceLoc loc_of(const Token& t) const { return SourceLoc{file_, t.line, t.col}; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    const std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(path_, t.line, t.col, msg + ", got " + got);
  }

  bool is_punct(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool is_kw(const char* k) const { return peek().kind == Tok::Ident && peek().text == k; }

  const Token& expect_punct(const char* p) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'");
    return next();
  }
  const Token& expect_kw(const char* k) {
    if (!is_kw(k)) fail(std::string("expected '") + k + "'");
    return next();
  }
  const Token& expect_ident() {
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail("expected identifier");
    return next();
  }

  unsigned parse_range() {
    if (!is_punct("[")) return 1;
    next();
    const auto msb = parse_plain_number();
    expect_punct(":");
    const auto lsb = parse_plain_number();
    expect_punct("]");
    const auto width = (msb >= lsb ? msb - lsb : lsb - msb) + 1;
    if (width > 64) fail("vector wider than 64 bits");
    return static_cast<unsigned>(width);
  }

  std::uint64_t parse_plain_number() {
    if (peek().kind != Tok::Number || peek().text.find('\'') != std::string::npos) fail("expected number");
    std::string digits;
    for (char c : next().text)
      if (c != '_') digits += c;
    return std::stoull(digits);
  }

  Module parse_module() {
    Module m;
    m.loc = loc_of(expect_kw("module"));
    m.name = expect_ident().text;
    expect_punct("(");
    if (!is_punct(")")) {
      while (true) {
        m.ports.push_back(parse_port());
        if (is_punct(",")) {
          next();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    expect_punct(";");
    names_.clear();
    for (const auto& p : m.ports) declare(p.name, p.loc);
    while (!is_kw("endmodule")) {
      if (peek().kind == Tok::End) fail("expected 'endmodule'");
      m.items.push_back(parse_item());
    }
    m.end_line = next().line;
    return m;
  }

  void declare(const std::string& name, SourceLoc loc) {
    if (!names_.insert(name).second)
      throw ParseError(path_, loc.line, loc.col, "duplicate declaration of '" + name + "'");
  }

  Port parse_port() {
    Port p;
    if (is_kw("input")) {
      p.dir = PortDir::Input;
    } else if (is_kw("output")) {
      p.dir = PortDir::Output;
    } else {
      fail("expected port direction");
    }
    p.loc = loc_of(next());
    if (is_kw("wire")) {
      next();
    } else if (is_kw("reg")) {
      next();
      p.kind = NetKind::Reg;
    }
    if (p.dir == PortDir::Input && p.kind == NetKind::Reg) fail("input ports cannot be reg");
    p.width = parse_range();
    p.name = expect_ident().text;
    return p;
  }

  Decl parse_decl() {
    Decl d;
    d.loc = loc_of(peek());
    const std::string kw = next().text;
    d.kind = kw == "wire" ? NetKind::Wire : kw == "reg" ? NetKind::Reg : NetKind::Integer;
    d.width = d.kind == NetKind::Integer ? 32 : parse_range();
    while (true) {
      const Token& t = expect_ident();
      d.names.push_back(t.text);
      if (file_ == 0) declare(t.text, loc_of(t));
      if (is_punct(",")) {
        next();
        continue;
      }
      break;
    }
    expect_punct(";");
    return d;
  }

  Item parse_item() {
    if (is_kw("wire") || is_kw("reg") || is_kw("integer")) return parse_decl();
    if (is_kw("assign")) {
      ContinuousAssign a;
      a.loc = loc_of(next());
      a.target = expect_ident().text;
      expect_punct("=");
      a.value = parse_expr();
      expect_punct(";");
      return a;
    }
    if (is_kw("always")) {
      Process p;
      p.kind = Process::Kind::Always;
      p.loc = loc_of(next());
      expect_punct("@");
      expect_punct("(");
      expect_kw("posedge");
      p.clock = expect_ident().text;
      expect_punct(")");
      p.body = parse_stmt();
      return p;
    }
    if (is_kw("initial")) {
      Process p;
      p.kind = Process::Kind::Initial;
      p.loc = loc_of(next());
      p.body = parse_stmt();
      return p;
    }
    if (peek().kind == Tok::Directive) {
      if (peek().text != "include") fail("unsupported directive");
      IncludeDirective inc;
      inc.loc = loc_of(next());
      if (peek().kind != Tok::String) fail("expected include path string");
      inc.path = next().text;
      return inc;
    }
    if (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) {
      Instance inst;
      inst.loc = loc_of(peek());
      inst.module_name = next().text;
      const Token& nm = expect_ident();
      inst.instance_name = nm.text;
      declare(inst.instance_name, loc_of(nm));
      expect_punct("(");
      if (!is_punct(")")) {
        while (true) {
          Connection c;
          c.loc = loc_of(expect_punct("."));
          c.port = expect_ident().text;
          expect_punct("(");
          if (!is_punct(")")) c.expr = parse_expr();
          expect_punct(")");
          inst.connections.push_back(std::move(c));
          if (is_punct(",")) {
            next();
            continue;
          }
          break;
        }
      }
      expect_punct(")");
      expect_punct(";");
      return inst;
    }
    fail("expected module item");
  }

  Stmt parse_assign_stmt(bool allow_nonblocking) {
    const Token& t = expect_ident();
    Stmt s;
    s.loc = loc_of(t);
    s.target = t.text;
    if (is_punct("=")) {
      s.kind = Stmt::Kind::BlockingAssign;
    } else if (allow_nonblocking && is_punct("<=")) {
      s.kind = Stmt::Kind::NonBlockingAssign;
    } else {
      fail("expected assignment operator");
    }
    next();
    s.value = parse_expr();
    return s;
  }

  Stmt parse_stmt() {
    if (is_kw("begin")) {
      Stmt s;
      s.kind = Stmt::Kind::Block;
      s.loc = loc_of(next());
      while (!is_kw("end")) {
        if (peek().kind == Tok::End) fail("expected 'end'");
        s.stmts.push_back(parse_stmt());
      }
      s.end_line = next().line;
      return s;
    }
    if (is_kw("if")) {
      Stmt s;
      s.kind = Stmt::Kind::If;
      s.loc = loc_of(next());
      exec_lines_.insert(s.loc.line);
      expect_punct("(");
      s.cond = parse_expr();
      expect_punct(")");
      s.then_branch = parse_stmt();
      if (is_kw("else")) {
        s.else_line = next().line;
        s.else_branch = parse_stmt();
      }
      return s;
    }
    if (is_kw("for")) {
      Stmt s;
      s.kind = Stmt::Kind::For;
      s.loc = loc_of(next());
      expect_punct("(");
      s.init = parse_assign_stmt(false);
      expect_punct(";");
      s.cond = parse_expr();
      expect_punct(";");
      s.step = parse_assign_stmt(false);
      expect_punct(")");
      if (s.init->target != s.step->target)
        throw ParseError(path_, s.loc.line, s.loc.col, "for-loop init and step must assign the same variable");
      s.then_branch = parse_stmt();
      return s;
    }
    Stmt s = parse_assign_stmt(true);
    expect_punct(";");
    exec_lines_.insert(s.loc.line);
    return s;
  }

  // Precedence, lowest first: | ^ & (== !=) (< >) (<< >>) (+ -) unary.
  Expr parse_expr() { return parse_binary(0); }

  static int precedence(const std::string& op) {
    if (op == "|") return 0;
    if (op == "^") return 1;
    if (op == "&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == ">") return 4;
    if (op == "<<" || op == ">>") return 5;
    if (op == "+" || op == "-") return 6;
    return -1;
  }

  static BinaryOp binop(const std::string& op) {
    if (op == "|") return BinaryOp::Or;
    if (op == "^") return BinaryOp::Xor;
    if (op == "&") return BinaryOp::And;
    if (op == "==") return BinaryOp::Eq;
    if (op == "!=") return BinaryOp::Ne;
    if (op == "<") return BinaryOp::Lt;
    if (op == ">") return BinaryOp::Gt;
    if (op == "<<") return BinaryOp::Shl;
    if (op == ">>") return BinaryOp::Shr;
    if (op == "+") return BinaryOp::Add;
    return BinaryOp::Sub;
  }

  Expr parse_binary(int min_prec) {
    if (min_prec > 6) return parse_unary();
    Expr lhs = parse_binary(min_prec + 1);
    while (peek().kind == Tok::Punct && precedence(peek().text) == min_prec) {
      const Token& op = next();
      Expr rhs = parse_binary(min_prec + 1);
      lhs = Expr::binary(binop(op.text), std::move(lhs), std::move(rhs), loc_of(op));
    }
    return lhs;
  }

  Expr parse_unary() {
    if (is_punct("~") || is_punct("-") || is_punct("!")) {
      const Token& op = next();
      const UnaryOp u = op.text == "~" ? UnaryOp::Not : op.text == "-" ? UnaryOp::Neg : UnaryOp::LogicalNot;
      return Expr::unary(u, parse_unary(), loc_of(op));
    }
    return parse_primary();
  }

  Expr parse_primary() {
    if (is_punct("(")) {
      next();
      Expr e = parse_expr();
      expect_punct(")");
      e.paren = true;
      return e;
    }
    if (peek().kind == Tok::Number) return parse_literal();
    const Token& t = expect_ident();
    return Expr::ident(t.text, loc_of(t));
  }

  Expr parse_literal() {
    const Token& t = next();
    const SourceLoc loc = loc_of(t);
    std::string text;
    for (char c : t.text)
      if (c != '_') text += c;
    const auto tick = text.find('\'');
    auto bad = [&](const std::string& msg) { throw ParseError(path_, t.line, t.col, msg + " '" + t.text + "'"); };
    if (tick == std::string::npos) {
      if (text.size() > 10) bad("unsized literal too large");
      const auto v = std::stoull(text);
      if (v > 0xffffffffULL) bad("unsized literal too large");
      return Expr::unsized(v, loc);
    }
    if (tick == 0) bad("literal needs a size");
    const auto width = std::stoul(text.substr(0, tick));
    if (width < 1 || width > 64) bad("literal width out of range");
    if (tick + 1 >= text.size()) bad("malformed literal");
    const char base = static_cast<char>(std::tolower(static_cast<unsigned char>(text[tick + 1])));
    const std::string digits = text.substr(tick + 2);
    if (digits.empty()) bad("malformed literal");
    int radix = 0;
    switch (base) {
      case 'b': radix = 2; break;
      case 'h': radix = 16; break;
      case 'd': radix = 10; break;
      default: bad("unsupported literal base");
    }
    unsigned __int128 v = 0;
    for (char c : digits) {
      int d = -1;
      if (std::isdigit(static_cast<unsigned char>(c))) d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      if (d < 0 || d >= radix) bad("invalid digit in literal");
      v = v * static_cast<unsigned>(radix) + static_cast<unsigned>(d);
      if (v >> 64) bad("literal value too large");
    }
    const auto value = static_cast<std::uint64_t>(v);
    if (width < 64 && (value >> width) != 0) bad("literal value does not fit its width");
    return Expr::literal(static_cast<unsigned>(width), value, base, loc);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string path_;
  int file_;
  std::set<int> exec_lines_;
  std::unordered_set<std::string> names_;
};

void apply_exec_lines(SourceFile& f, const std::set<int>& lines) {
  for (int l : lines) f.layout[static_cast<std::size_t>(l - 1)].cls = LineClass::Executable;
}

void check_references(const Module& m, const std::unordered_set<std::string>& names, const std::string& path) {
  auto check_name = [&](const std::string& n, const SourceLoc& loc) {
    if (!names.count(n)) throw ParseError(path, loc.line, loc.col, "undeclared identifier '" + n + "'");
  };
  auto check_expr = [&](const Expr& e) {
    for_each_expr(e, [&](const Expr& x) {
      if (x.kind == Expr::Kind::Ident) check_name(x.name, x.loc);
    });
  };
  for (const auto& item : m.items) {
    if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
      check_name(a->target, a->loc);
      check_expr(a->value);
    } else if (const auto* p = std::get_if<Process>(&item)) {
      if (p->kind == Process::Kind::Always) check_name(p->clock, p->loc);
      for_each_stmt(p->body, [&](const Stmt& s) {
        if (s.is_assign()) check_name(s.target, s.loc);
        if (s.kind == Stmt::Kind::For) {
          check_name(s.init->target, s.init->loc);
          check_name(s.step->target, s.step->loc);
        }
      });
      for_each_stmt_expr(p->body, check_expr);
    } else if (const auto* inst = std::get_if<Instance>(&item)) {
      for (const auto& c : inst->connections)
        if (c.expr) check_expr(*c.expr);
    }
  }
}

}  // namespace

SourceFile parse_include_file(std::string_view text, const std::string& path, int file_index) {
  Lexed lx = lex(text, path);
  Parser p(std::move(lx.tokens), path, file_index);
  SourceFile f;
  f.path = path;
  f.decls = p.parse_decls();
  for (auto& d : f.decls) d.loc.file = file_index;
  f.layout = std::move(lx.layout);
  return f;
}

SourceUnit parse(std::string_view text, const IncludeResolver& resolve, const std::string& path) {
  Lexed lx = lex(text, path);
  Parser p(std::move(lx.tokens), path, 0);
  SourceUnit unit;
  SourceFile main;
  main.path = path;
  main.modules = p.parse_modules();
  main.layout = std::move(lx.layout);
  apply_exec_lines(main, p.executable_lines());
  unit.files.push_back(std::move(main));

  // Resolve includes and check that included names do not collide.
  for (auto& m : unit.files[0].modules) {
    std::unordered_set<std::string> names;
    for (const auto& port : m.ports) names.insert(port.name);
    for (const auto& item : m.items) {
      if (const auto* d = std::get_if<Decl>(&item))
        for (const auto& n : d->names) names.insert(n);
      if (const auto* inst = std::get_if<Instance>(&item)) names.insert(inst->instance_name);
    }
    for (auto& item : m.items) {
      auto* inc = std::get_if<IncludeDirective>(&item);
      if (!inc) continue;
      std::optional<std::string> text_inc = resolve ? resolve(inc->path) : std::nullopt;
      if (!text_inc)
        throw ParseError(path, inc->loc.line, inc->loc.col, "cannot resolve include \"" + inc->path + "\"");
      const int idx = static_cast<int>(unit.files.size());
      SourceFile f = parse_include_file(*text_inc, inc->path, idx);
      for (const auto& d : f.decls)
        for (const auto& n : d.names)
          if (!names.insert(n).second)
            throw ParseError(inc->path, d.loc.line, d.loc.col, "duplicate declaration of '" + n + "'");
      inc->file = idx;
      unit.files.push_back(std::move(f));
    }
    check_references(m, names, path);
  }
  return unit;
}

SourceUnit parse_file(const std::string& path) {
  namespace fs = std::filesystem;
  auto read = [](const fs::path& p) -> std::optional<std::string> {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const auto text = read(path);
  if (!text) throw ParseError(path, 0, 0, "cannot read file");
  const fs::path dir = fs::path(path).parent_path();
  return parse(*text, [&](const std::string& inc) { return read(dir / inc); }, fs::path(path).filename().string());
}

}  // namespace hdldiff
