#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "hdldiff/hdl/const_eval.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/parser.hpp"
#include "hdldiff/hdl/render.hpp"

namespace hdldiff {
namespace {

TEST(Parse, MinimalModule) {
  const auto u = parse("module m(output wire o); assign o = 1'b0; endmodule");
  ASSERT_EQ(u.main().modules.size(), 1u);
  const auto& m = u.main().modules[0];
  ASSERT_EQ(m.items.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<ContinuousAssign>(m.items[0]));
}

TEST(Parse, AlwaysBlockWithThreeNonBlocking) {
  const auto u = parse(fixtures::kAssignBlock);
  const auto& p = std::get<Process>(u.main().modules[0].items[0]);
  EXPECT_EQ(p.kind, Process::Kind::Always);
  ASSERT_EQ(p.body.kind, Stmt::Kind::Block);
  ASSERT_EQ(p.body.stmts.size(), 3u);
  for (const auto& s : p.body.stmts) EXPECT_EQ(s.kind, Stmt::Kind::NonBlockingAssign);
  EXPECT_EQ(p.body.stmts[0].loc.line, 3);
  EXPECT_EQ(p.body.stmts[2].loc.line, 5);
}

TEST(Parse, MalformedPortListReportsLineOne) {
  try {
    parse("module m(; endmodule");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
}

TEST(Parse, RejectsUndeclaredIdentifier) {
  EXPECT_THROW(parse("module m(output wire o);\n  assign o = x;\nendmodule\n"), ParseError);
}

TEST(Parse, RejectsOversizedLiteral) {
  EXPECT_THROW(parse("module m(output wire o);\n  assign o = 2'h4;\nendmodule\n"), ParseError);
}

TEST(Parse, LayoutClasses) {
  const auto u = parse(fixtures::kIfElseTrue);
  const auto& f = u.main();
  EXPECT_EQ(f.line_count(), 11);
  EXPECT_EQ(f.line_class(1), LineClass::DeclarationOnly);
  EXPECT_EQ(f.line_class(3), LineClass::Executable);
  EXPECT_EQ(f.line_class(4), LineClass::Executable);
  EXPECT_EQ(f.line_class(5), LineClass::DeclarationOnly);
  EXPECT_EQ(f.line_class(6), LineClass::Comment);
  EXPECT_EQ(f.line_class(7), LineClass::Executable);
  EXPECT_EQ(f.line_class(10), LineClass::DeclarationOnly);
}

TEST(Parse, OperatorPrecedence) {
  const auto u = parse("module m(input wire [3:0] a, output wire [3:0] o);\n  assign o = a | a & a + 1'b1;\nendmodule\n");
  const auto& e = std::get<ContinuousAssign>(u.main().modules[0].items[0]).value;
  ASSERT_EQ(e.kind, Expr::Kind::Binary);
  EXPECT_EQ(e.binary_op, BinaryOp::Or);
  EXPECT_EQ(e.rhs->binary_op, BinaryOp::And);
  EXPECT_EQ(e.rhs->rhs->binary_op, BinaryOp::Add);
}

TEST(Parse, IncludeResolution) {
  const char* text =
      "module m(output wire o);\n"
      "  `include \"defs.vh\"\n"
      "  assign o = w;\n"
      "endmodule\n";
  const auto u = parse(text, [](const std::string& p) -> std::optional<std::string> {
    if (p == "defs.vh") return std::string("// shared\nwire w;\n");
    return std::nullopt;
  });
  ASSERT_EQ(u.files.size(), 2u);
  EXPECT_EQ(u.files[1].decls.size(), 1u);
  EXPECT_EQ(u.files[1].line_class(1), LineClass::Comment);
  EXPECT_THROW(parse(text), ParseError);
}

TEST(Render, RoundTripOnFixtures) {
  for (const char* text : {fixtures::kAssignBlock, fixtures::kDoubleNegation, fixtures::kUnreachableLoop,
                           fixtures::kIfElseTrue, fixtures::kEightIterations, fixtures::kFoldable}) {
    const auto u = parse(text);
    const auto again = parse(render(u));
    EXPECT_TRUE(structurally_equal(u, again)) << render(u);
  }
}

TEST(Render, BlankLineIsEmitted) {
  const auto u = parse(fixtures::kDoubleNegationShifted);
  EXPECT_EQ(u.main().line_class(2), LineClass::Blank);
  const std::string out = render(u);
  const auto first_nl = out.find('\n');
  EXPECT_EQ(out[first_nl + 1], '\n');
}

TEST(Render, CommentVerbatim) {
  const auto u = parse(fixtures::kFoldable);
  const std::string out = render(u);
  EXPECT_NE(out.find("    // end of the delay line\n"), std::string::npos);
}

TEST(Render, LineFidelityUnderBlankInsertion) {
  const std::string text = fixtures::kFoldable;
  const auto u = parse(text);
  for (int n : {1, 5, 14}) {
    for (int k : {1, 3}) {
      std::string shifted;
      int line = 1;
      std::size_t pos = 0;
      while (pos < text.size()) {
        if (line == n) shifted += std::string(static_cast<std::size_t>(k), '\n');
        const auto nl = text.find('\n', pos);
        shifted += text.substr(pos, nl - pos + 1);
        pos = nl + 1;
        ++line;
      }
      auto expected = u;
      shift_lines(expected, 0, n, k);
      const auto v = parse(shifted);
      const auto& m1 = expected.main().modules[0];
      const auto& m2 = v.main().modules[0];
      EXPECT_EQ(m1.loc.line, m2.loc.line);
      EXPECT_EQ(m1.end_line, m2.end_line);
      ASSERT_EQ(m1.items.size(), m2.items.size());
      for (std::size_t i = 0; i < m1.items.size(); ++i) {
        if (const auto* p = std::get_if<Process>(&m1.items[i]))
          EXPECT_TRUE(structurally_equal(p->body, std::get<Process>(m2.items[i]).body));
      }
    }
  }
}

TEST(ConstEval, Examples) {
  const auto two = Expr::binary(BinaryOp::Add, Expr::literal(2, 1), Expr::literal(2, 1));
  EXPECT_EQ(const_eval(two, 2), 2u);
  const auto wrap = Expr::binary(BinaryOp::Add, Expr::literal(2, 3), Expr::literal(2, 1));
  EXPECT_EQ(const_eval(wrap, 2), 0u);
  const auto free = Expr::binary(BinaryOp::Add, Expr::ident("i"), Expr::literal(1, 1));
  EXPECT_FALSE(const_eval(free, 8).has_value());
}

TEST(ConstEval, TwoBitWraparoundExhaustive) {
  for (unsigned a = 0; a < 4; ++a)
    for (unsigned b = 0; b < 4; ++b) {
      const auto e = Expr::binary(BinaryOp::Add, Expr::literal(2, a), Expr::literal(2, b));
      EXPECT_EQ(const_eval(e, 2), (a + b) % 4) << a << "+" << b;
      const auto d = Expr::binary(BinaryOp::Sub, Expr::literal(2, a), Expr::literal(2, b));
      EXPECT_EQ(const_eval(d, 2), (a + 4 - b) % 4) << a << "-" << b;
    }
}

TEST(Elaborate, AmbiguousTop) {
  const auto u = parse("module a(output wire o); assign o = 1'b0; endmodule\nmodule b(output wire o); assign o = 1'b1; endmodule\n");
  EXPECT_THROW(elaborate(u), ElaborationError);
}

TEST(Elaborate, UnknownInstance) {
  const auto u = parse("module a(input wire clk);\n  nope u0(.clk(clk));\nendmodule\n");
  EXPECT_THROW(elaborate(u), ElaborationError);
}

TEST(Elaborate, CombinationalLoop) {
  const auto u = parse("module a(output wire o);\n  wire x;\n  assign x = o;\n  assign o = x;\nendmodule\n");
  EXPECT_THROW(elaborate(u), ElaborationError);
}

TEST(Elaborate, FlattensInstances) {
  const auto u = parse(
      "module sub(input wire clk, input wire [3:0] d, output reg [3:0] q);\n"
      "  always @(posedge clk) q <= d;\n"
      "endmodule\n"
      "module top(input wire clk, input wire [3:0] x, output wire [3:0] y);\n"
      "  sub u0(.clk(clk), .d(x), .q(y));\n"
      "endmodule\n");
  const auto d = elaborate(u);
  EXPECT_EQ(d.top, "top");
  EXPECT_GE(d.slot("u0.q"), 0);
  ASSERT_TRUE(d.clock.has_value());
  EXPECT_EQ(d.signals[static_cast<std::size_t>(*d.clock)].name, "clk");
  EXPECT_EQ(d.stimulus.size(), 1u);
  EXPECT_EQ(d.waves.size(), 3u);
}

}  // namespace
}  // namespace hdldiff
