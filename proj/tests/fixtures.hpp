#pragma once

// Small worked designs. Tests refer to their lines by number, so keep the layout.

namespace hdldiff::fixtures {

// Three non-blocking assignments on a rising edge; reg4 on line 3, reg5 line 4, reg6 line 5.
inline constexpr const char* kAssignBlock =
    "module top(input wire clk, output reg reg4, output reg reg5, output reg reg6);\n"
    "  always @(posedge clk) begin\n"
    "    reg4 <= 1'b0;\n"
    "    reg5 <= 1'b1;\n"
    "    reg6 <= reg5;\n"
    "  end\n"
    "endmodule\n";

// Same block with every assignment blocking.
inline constexpr const char* kAssignBlockBlocking =
    "module top(input wire clk, output reg reg4, output reg reg5, output reg reg6);\n"
    "  always @(posedge clk) begin\n"
    "    reg4 = 1'b0;\n"
    "    reg5 = 1'b1;\n"
    "    reg6 = reg5;\n"
    "  end\n"
    "endmodule\n";

// Double negation stored into b; the breakpoint sits on line 3.
inline constexpr const char* kDoubleNegation =
    "module top(input wire clk, input wire a, output reg b);\n"
    "  always @(posedge clk)\n"
    "    b <= ~(~a);\n"
    "endmodule\n";

// A blank line added after line 1.
inline constexpr const char* kDoubleNegationShifted =
    "module top(input wire clk, input wire a, output reg b);\n"
    "\n"
    "  always @(posedge clk)\n"
    "    b <= ~(~a);\n"
    "endmodule\n";

// Loop whose initial value fails the guard; body on line 6.
inline constexpr const char* kUnreachableLoop =
    "module top(input wire clk, input wire [3:0] d, output reg [3:0] q);\n"
    "  integer i;\n"
    "  always @(posedge clk) begin\n"
    "    q <= d;\n"
    "    for (i = 4; i < 4; i = i + 1) begin\n"
    "      q <= q + 1'b1;\n"
    "    end\n"
    "  end\n"
    "endmodule\n";

// Branches on lines 4 (then) and 7 (else); the condition is a constant.
inline constexpr const char* kIfElseTrue =
    "module top(input wire clk, output reg q);\n"
    "  always @(posedge clk) begin\n"
    "    if (sel)\n"
    "      q <= 1'b1;\n"
    "    else\n"
    "      // otherwise\n"
    "      q <= 1'b0;\n"
    "  end\n"
    "  wire sel;\n"
    "  assign sel = 1'b1;\n"
    "endmodule\n";

inline constexpr const char* kIfElseFalse =
    "module top(input wire clk, output reg q);\n"
    "  always @(posedge clk) begin\n"
    "    if (sel)\n"
    "      q <= 1'b1;\n"
    "    else\n"
    "      // otherwise\n"
    "      q <= 1'b0;\n"
    "  end\n"
    "  wire sel;\n"
    "  assign sel = 1'b0;\n"
    "endmodule\n";

// Loop iterating 8 times with its body on line 4.
inline constexpr const char* kEightIterations =
    "module top(output reg [7:0] acc);\n"
    "  integer i;\n"
    "  initial for (i = 0; i < 8; i = i + 1) begin\n"
    "    acc = i;\n"
    "  end\n"
    "endmodule\n";

// A foldable block on lines 4-13; source line 17 is view line 8 while it is folded.
inline constexpr const char* kFoldable =
    "module top(input wire clk, input wire [7:0] din, output reg [7:0] a, output reg [7:0] b);\n"
    "  reg [7:0] t0, t1, t2, t3, t4, t5, t6;\n"
    "  always @(posedge clk)\n"
    "  begin\n"
    "    t0 <= din;\n"
    "    t1 <= t0;\n"
    "    t2 <= t1;\n"
    "    t3 <= t2;\n"
    "    t4 <= t3;\n"
    "    t5 <= t4;\n"
    "    t6 <= t5;\n"
    "    // end of the delay line\n"
    "  end\n"
    "  always @(posedge clk) begin\n"
    "    // outputs\n"
    "\n"
    "    a <= t6;\n"
    "    b <= a;\n"
    "  end\n"
    "endmodule\n";

}  // namespace hdldiff::fixtures
