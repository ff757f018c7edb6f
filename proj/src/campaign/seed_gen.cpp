#include "hdldiff/campaign/seed_gen.hpp"

#include <cstdio>
#include <vector>

#include "hdldiff/debugger/reference.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/parser.hpp"

namespace hdldiff {
namespace {

struct Sig {
  std::string name;
  unsigned width;
};

constexpr const char* kNotes[] = {"update stage", "next value", "keep widths aligned", "datapath",
                                  "registered output", "mix inputs", "accumulate", "checksum"};

class Builder {
 public:
  Builder(Rng& rng, const SeedOptions& opt) : rng_(rng), opt_(opt) {}

  std::string build() {
    const int target = uniform(opt_.min_lines, opt_.max_lines);
    std::vector<std::string> subs;
    std::vector<std::vector<std::string>> sub_texts;
    if (opt_.submodules && target >= 60) {
      const int n = uniform(0, target >= 300 ? 3 : 1);
      for (int i = 0; i < n; ++i) sub_texts.push_back(submodule(static_cast<int>(i)));
    }
    int sub_lines = 0;
    for (const auto& s : sub_texts) sub_lines += static_cast<int>(s.size());

    header();
    const int outputs = static_cast<int>(outputs_.size());
    const int reserve = sub_lines + outputs + 1;
    std::size_t next_sub = 0;
    while (static_cast<int>(out_.size()) + reserve + 26 < target) {
      if (next_sub < sub_texts.size() && chance(0.3)) {
        instance(static_cast<int>(next_sub++));
        continue;
      }
      const int k = uniform(0, 99);
      if (k < 20)
        cont_assign();
      else if (k < 55)
        nba_process();
      else if (k < 75)
        loop_process();
      else
        temp_process();
    }
    while (next_sub < sub_texts.size()) instance(static_cast<int>(next_sub++));
    while (static_cast<int>(out_.size()) + reserve + 8 < target) cont_assign();
    for (const auto& o : outputs_) emit(1, "assign " + o.name + " = " + expr(1) + ";");
    while (static_cast<int>(out_.size()) + sub_lines + 1 < target) {
      if (chance(0.5))
        out_.emplace_back();
      else
        emit(1, "// " + note());
    }
    out_.emplace_back("endmodule");
    for (const auto& s : sub_texts) out_.insert(out_.end(), s.begin(), s.end());
    std::string text;
    for (const auto& l : out_) text += l + "\n";
    return text;
  }

 private:
  int uniform(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  unsigned width() {
    static constexpr unsigned kWidths[] = {1, 4, 8, 8};
    return kWidths[uniform(0, 3)];
  }
  std::string fresh(const char* prefix) { return prefix + std::to_string(counter_++); }
  std::string note() { return kNotes[uniform(0, static_cast<int>(std::size(kNotes)) - 1)]; }

  void emit(int indent, const std::string& text) { out_.push_back(std::string(static_cast<std::size_t>(indent) * 2, ' ') + text); }

  void gap(int indent) {
    const int k = uniform(0, 99);
    if (k < 10)
      out_.emplace_back();
    else if (k < 22)
      emit(indent, "// " + note());
  }

  static std::string range(unsigned w) { return w == 1 ? "" : "[" + std::to_string(w - 1) + ":0] "; }

  std::string literal(unsigned w) {
    const std::uint64_t v = std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t{1} << w) - 1)(rng_);
    if (w == 1) return "1'b" + std::to_string(v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%u'h%llx", w, static_cast<unsigned long long>(v));
    return buf;
  }

  std::string leaf() {
    if (!readable_.empty() && chance(0.7)) return readable_[static_cast<std::size_t>(uniform(0, static_cast<int>(readable_.size()) - 1))].name;
    return literal(width());
  }

  std::string expr(int depth) {
    if (depth == 0 || chance(0.35)) return chance(0.1) ? "~" + leaf() : leaf();
    static constexpr const char* kOps[] = {"+", "-", "&", "|", "^", "+", "^"};
    const std::string op = kOps[uniform(0, 6)];
    auto sub = [&] {
      const std::string e = expr(depth - 1);
      return e.find(' ') == std::string::npos ? e : "(" + e + ")";
    };
    if (chance(0.08)) return sub() + (chance(0.5) ? " << " : " >> ") + "2'd" + std::to_string(uniform(0, 3));
    return sub() + " " + op + " " + sub();
  }

  std::string cond() {
    const int k = uniform(0, 2);
    if (k == 0) return leaf() + " == " + literal(width());
    if (k == 1) return leaf() + " < " + literal(8);
    return leaf();
  }

  void header() {
    emit(0, "// " + note());
    emit(0, "module top(");
    emit(1, "input wire clk,");
    emit(1, "input wire rst,");
    const int ins = uniform(2, 5);
    for (int i = 0; i < ins; ++i) {
      const Sig s{"in" + std::to_string(i), width()};
      emit(1, "input wire " + range(s.width) + s.name + ",");
      readable_.push_back(s);
    }
    readable_.push_back({"rst", 1});
    const int outs = uniform(1, 3);
    for (int i = 0; i < outs; ++i) {
      const Sig s{"out" + std::to_string(i), width()};
      emit(1, "output wire " + range(s.width) + s.name + (i + 1 < outs ? "," : ");"));
      outputs_.push_back(s);
    }
  }

  void declare(const char* kind, const Sig& s) { emit(1, std::string(kind) + " " + range(s.width) + s.name + ";"); }

  void cont_assign() {
    gap(1);
    const Sig w{fresh("w"), width()};
    declare("wire", w);
    emit(1, "assign " + w.name + " = " + expr(2) + ";");
    readable_.push_back(w);
  }

  // Reset branch, a non-blocking chain, an optional if/else and isolated sinks.
  void nba_process() {
    gap(1);
    std::vector<Sig> chain;
    for (int i = uniform(1, 3); i > 0; --i) chain.push_back({fresh("r"), width()});
    std::vector<Sig> sinks;
    for (int i = uniform(0, 2); i > 0; --i) sinks.push_back({fresh("s"), width()});
    std::optional<Sig> sel;
    if (chance(0.5)) sel = Sig{fresh("m"), width()};
    for (const auto& s : chain) declare("reg", s);
    for (const auto& s : sinks) declare("reg", s);
    if (sel) declare("reg", *sel);
    emit(1, "always @(posedge clk) begin");
    emit(2, "if (rst) begin");
    for (const auto& s : chain) emit(3, s.name + " <= " + literal(s.width) + ";");
    emit(2, "end else begin");
    for (std::size_t i = 0; i < chain.size(); ++i) {
      gap(3);
      const std::string rhs = i == 0 ? expr(2) : chain[i - 1].name + " " + (chance(0.5) ? "+" : "^") + " " + leaf();
      emit(3, chain[i].name + " <= " + rhs + ";");
    }
    emit(2, "end");
    if (sel) {
      gap(2);
      emit(2, "if (" + cond() + ")");
      emit(3, sel->name + " <= " + expr(1) + ";");
      emit(2, "else");
      if (chance(0.3)) emit(3, "// " + note());
      emit(3, sel->name + " <= " + expr(1) + ";");
    }
    for (const auto& s : sinks) {
      gap(2);
      emit(2, s.name + " <= " + (chance(0.6) ? literal(s.width) : readable_.front().name + " & " + literal(s.width)) + ";");
    }
    emit(1, "end");
    for (const auto& s : chain) readable_.push_back(s);
    if (sel) readable_.push_back(*sel);
  }

  void loop_process() {
    gap(1);
    const std::string var = fresh("i");
    const Sig acc{fresh("acc"), 8};
    emit(1, "integer " + var + ";");
    declare("reg", acc);
    const bool blocking = chance(0.6);
    const std::string op = blocking ? " = " : " <= ";
    emit(1, "always @(posedge clk) begin");
    emit(2, acc.name + op + expr(1) + ";");
    const int n = uniform(1, 6);
    gap(2);
    emit(2, "for (" + var + " = 0; " + var + " < " + std::to_string(n) + "; " + var + " = " + var + " + 1) begin");
    gap(3);
    emit(3, acc.name + op + acc.name + " + " + leaf() + ";");
    emit(2, "end");
    if (chance(0.35)) {
      const int start = uniform(n, n + 3);
      gap(2);
      emit(2, "for (" + var + " = " + std::to_string(start) + "; " + var + " < " + std::to_string(n) + "; " + var +
                  " = " + var + " + 1) begin");
      emit(3, acc.name + op + acc.name + " ^ " + leaf() + ";");
      emit(2, "end");
    }
    emit(1, "end");
    readable_.push_back(acc);
  }

  void temp_process() {
    gap(1);
    const Sig t{fresh("t"), width()};
    const Sig q{fresh("q"), width()};
    declare("reg", t);
    declare("reg", q);
    emit(1, "always @(posedge clk) begin");
    emit(2, t.name + " = " + expr(2) + ";");
    gap(2);
    emit(2, q.name + " <= " + t.name + " ^ " + leaf() + ";");
    emit(1, "end");
    readable_.push_back(q);
  }

  std::vector<std::string> submodule(int index) {
    std::vector<std::string> s;
    const std::string name = "sub" + std::to_string(index);
    s.emplace_back();
    s.push_back("module " + name + "(");
    s.push_back("  input wire clk,");
    s.push_back("  input wire [7:0] a,");
    s.push_back("  output reg [7:0] y);");
    s.push_back("  // " + note());
    s.push_back("  always @(posedge clk) begin");
    s.push_back("    y <= a " + std::string(chance(0.5) ? "^ " : "+ ") + literal(8) + ";");
    s.push_back("  end");
    s.push_back("endmodule");
    return s;
  }

  void instance(int index) {
    gap(1);
    const Sig y{fresh("sy"), 8};
    declare("wire", y);
    emit(1, "sub" + std::to_string(index) + " u" + std::to_string(index) + "(");
    emit(2, ".clk(clk),");
    emit(2, ".a(" + leaf() + "),");
    emit(2, ".y(" + y.name + "));");
    readable_.push_back(y);
  }

  Rng& rng_;
  const SeedOptions& opt_;
  std::vector<std::string> out_;
  std::vector<Sig> readable_;
  std::vector<Sig> outputs_;
  int counter_ = 0;
};

}  // namespace

std::string generate_seed_text(Rng& rng, const SeedOptions& opt) { return Builder(rng, opt).build(); }

SourceUnit generate_seed(Rng& rng, const SeedOptions& opt) {
  std::string last_error;
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    const std::string text = generate_seed_text(rng, opt);
    try {
      SourceUnit unit = parse(text);
      const int lines = unit.main().line_count();
      if (lines < opt.min_lines || lines > opt.max_lines) {
        last_error = "line count " + std::to_string(lines);
        continue;
      }
      elaborate(unit);
      ReferenceDebugger dbg;
      ScriptPolicy policy({DebugAction::run_all()});
      const auto r = run_to_completion(dbg, unit, SimConfig{}, policy);
      if (r.failure) {
        last_error = r.diagnostic;
        continue;
      }
      return unit;
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw GenerationRetryExceeded("seed generation failed after " + std::to_string(opt.max_attempts) +
                                " attempts: " + last_error);
}

}  // namespace hdldiff
