#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hdldiff/debugger/reference.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/parser.hpp"

namespace hdldiff {
namespace {

std::vector<TraceEvent> of_kind(const Trace& t, TraceEvent::Kind k) {
  std::vector<TraceEvent> out;
  for (const auto& e : t)
    if (e.kind == k) out.push_back(e);
  return out;
}

RunResult run(const char* text, std::vector<DebugAction> actions, Fault fault = Fault::None) {
  ReferenceDebugger dbg(fault);
  ScriptPolicy policy(std::move(actions));
  return run_to_completion(dbg, parse(text), SimConfig{}, policy);
}

TEST(Reference, StartsPausedWithUnknownRegisters) {
  ReferenceDebugger dbg;
  dbg.start(parse(fixtures::kAssignBlock), SimConfig{});
  EXPECT_EQ(dbg.state(), SessionState::PausedNotStarted);
  EXPECT_EQ(dbg.time(), 0u);
  for (const char* r : {"reg4", "reg5", "reg6"}) EXPECT_EQ(dbg.value(r), LogicVec::all_x(1));
}

TEST(Reference, AmbiguousTopIsElaborationError) {
  ReferenceDebugger dbg;
  EXPECT_THROW(dbg.start(parse("module a(output wire o); assign o = 1'b0; endmodule\n"
                               "module b(output wire o); assign o = 1'b0; endmodule\n"),
                         SimConfig{}),
               ElaborationError);
}

TEST(Reference, EmptyModuleFinishesImmediately) {
  const auto r = run("module m();\nendmodule\n", {DebugAction::run_all()});
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0], TraceEvent::finished(400));
}

TEST(Reference, RunAllWithoutBreakpointsFinishes) {
  const auto r = run(fixtures::kAssignBlock, {DebugAction::run_all()});
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].kind, TraceEvent::Kind::Finished);
  EXPECT_EQ(r.trace[0].time, 400u);
}

TEST(Reference, NonBlockingSamplesPreEdgeValues) {
  ReferenceDebugger dbg;
  dbg.start(parse(fixtures::kAssignBlock), SimConfig{});
  dbg.apply(DebugAction::run_all());
  const auto log = dbg.waveform();
  const auto idx = [&](const std::string& n) {
    return static_cast<std::size_t>(std::find(log.names.begin(), log.names.end(), n) - log.names.begin());
  };
  LogicVec prev_reg5 = LogicVec::all_x(1);
  int edges = 0;
  for (std::size_t i = 1; i < log.samples.size(); ++i) {
    const auto& [t, row] = log.samples[i];
    if (t % 10 != 5) continue;
    ++edges;
    EXPECT_EQ(row[idx("reg6")], prev_reg5) << "t=" << t;
    EXPECT_EQ(row[idx("reg4")], LogicVec(1, 0));
    EXPECT_EQ(row[idx("reg5")], LogicVec(1, 1));
    prev_reg5 = row[idx("reg5")];
  }
  EXPECT_EQ(edges, 40);
}

TEST(Reference, BlockingSeesJustWrittenValue) {
  ReferenceDebugger dbg;
  dbg.start(parse(fixtures::kAssignBlockBlocking), SimConfig{});
  dbg.apply(DebugAction::run_all());
  const auto log = dbg.waveform();
  for (const auto& [t, row] : log.samples)
    if (t >= 5) EXPECT_EQ(row[3], LogicVec(1, 1)) << "t=" << t;
}

TEST(Reference, SlidesFromCommentToNextExecutableLine) {
  const auto r = run(fixtures::kIfElseTrue, {DebugAction::add_breakpoint(6)});
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0], TraceEvent::breakpoint_set(6, 7));
}

TEST(Reference, NoBreakpointBeyondLastExecutableLine) {
  const auto r = run(fixtures::kIfElseTrue, {DebugAction::add_breakpoint(9)});
  EXPECT_EQ(r.trace[0], TraceEvent::breakpoint_set(9, std::nullopt));
}

TEST(Reference, SlidingDisabledUnderNoSlidingFault) {
  const auto r = run(fixtures::kIfElseTrue, {DebugAction::add_breakpoint(6)}, Fault::NoSliding);
  EXPECT_EQ(r.trace[0], TraceEvent::breakpoint_set(6, std::nullopt));
}

TEST(Reference, EightPausesInLoopBody) {
  std::vector<DebugAction> actions = {DebugAction::add_breakpoint(4)};
  for (int i = 0; i < 20; ++i) actions.push_back(DebugAction::run_all());
  const auto r = run(fixtures::kEightIterations, actions);
  const auto pauses = of_kind(r.trace, TraceEvent::Kind::Paused);
  ASSERT_EQ(pauses.size(), 8u);
  for (const auto& p : pauses) {
    EXPECT_EQ(p.line, 4);
    EXPECT_EQ(p.reason, PauseReason::Breakpoint);
  }
  EXPECT_EQ(r.trace.back().kind, TraceEvent::Kind::Finished);
}

TEST(Reference, LastIterationFaultDropsOnePause) {
  std::vector<DebugAction> actions = {DebugAction::add_breakpoint(4)};
  for (int i = 0; i < 20; ++i) actions.push_back(DebugAction::run_all());
  const auto r = run(fixtures::kEightIterations, actions, Fault::LoopLastIteration);
  EXPECT_EQ(of_kind(r.trace, TraceEvent::Kind::Paused).size(), 7u);
}

TEST(Reference, UnreachableLoopNeverPauses) {
  std::vector<DebugAction> actions = {DebugAction::add_breakpoint(6)};
  for (int i = 0; i < 5; ++i) actions.push_back(DebugAction::run_all());
  const auto r = run(fixtures::kUnreachableLoop, actions);
  EXPECT_TRUE(of_kind(r.trace, TraceEvent::Kind::Paused).empty());
}

TEST(Reference, TakenBranchOnly) {
  std::vector<DebugAction> actions = {DebugAction::add_breakpoint(4), DebugAction::add_breakpoint(7)};
  for (int i = 0; i < 60; ++i) actions.push_back(DebugAction::run_all());
  const auto t = run(fixtures::kIfElseTrue, actions);
  const auto pt = of_kind(t.trace, TraceEvent::Kind::Paused);
  EXPECT_EQ(pt.size(), 40u);
  for (const auto& p : pt) EXPECT_EQ(p.line, 4);
  const auto f = run(fixtures::kIfElseFalse, actions);
  for (const auto& p : of_kind(f.trace, TraceEvent::Kind::Paused)) EXPECT_EQ(p.line, 7);
}

TEST(Reference, EveryPauseFollowedByWaveOutput) {
  std::vector<DebugAction> actions = {DebugAction::add_breakpoint(4)};
  for (int i = 0; i < 10; ++i) actions.push_back(i % 3 ? DebugAction::step() : DebugAction::run_all());
  const auto r = run(fixtures::kIfElseTrue, actions);
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    if (r.trace[i].kind == TraceEvent::Kind::Paused) {
      ASSERT_LT(i + 1, r.trace.size());
      EXPECT_EQ(r.trace[i + 1].kind, TraceEvent::Kind::WaveOutput);
      EXPECT_EQ(r.trace[i + 1].time, r.trace[i].time);
    }
}

TEST(Reference, StepVisitsStatementsInOrder) {
  std::vector<DebugAction> actions;
  for (int i = 0; i < 6; ++i) actions.push_back(DebugAction::step());
  const auto r = run(fixtures::kAssignBlock, actions);
  const auto pauses = of_kind(r.trace, TraceEvent::Kind::Paused);
  ASSERT_EQ(pauses.size(), 6u);
  const int expected[] = {3, 4, 5, 3, 4, 5};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(pauses[i].line, expected[i]);
    EXPECT_EQ(pauses[i].reason, PauseReason::StepDone);
  }
  EXPECT_EQ(pauses[0].time, 5u);
  EXPECT_EQ(pauses[3].time, 15u);
}

TEST(Reference, FoldTranslatesViewLines) {
  const auto r = run(fixtures::kFoldable, {DebugAction::fold(4, 13), DebugAction::add_breakpoint(8),
                                           DebugAction::unfold(4), DebugAction::add_breakpoint(8)});
  const auto sets = of_kind(r.trace, TraceEvent::Kind::BreakpointSet);
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[0], TraceEvent::breakpoint_set(17, 17));
  EXPECT_EQ(sets[1], TraceEvent::breakpoint_set(8, 8));
}

TEST(Reference, FoldFaultUsesViewLines) {
  const auto r = run(fixtures::kFoldable, {DebugAction::fold(4, 13), DebugAction::add_breakpoint(8)},
                     Fault::FoldCoordinates);
  EXPECT_EQ(r.trace[0], TraceEvent::breakpoint_set(8, 8));
}

TEST(Reference, FoldThenUnfoldLeavesTraceUnchanged) {
  std::vector<DebugAction> base = {DebugAction::add_breakpoint(17), DebugAction::run_all(), DebugAction::run_all()};
  std::vector<DebugAction> folded = {DebugAction::fold(4, 13), DebugAction::unfold(4)};
  folded.insert(folded.end(), base.begin(), base.end());
  EXPECT_EQ(run(fixtures::kFoldable, base).trace, run(fixtures::kFoldable, folded).trace);
}

TEST(Reference, ActionsRejectedAfterFinish) {
  ReferenceDebugger dbg;
  dbg.start(parse(fixtures::kAssignBlock), SimConfig{});
  dbg.apply(DebugAction::run_all());
  EXPECT_EQ(dbg.state(), SessionState::Finished);
  EXPECT_THROW(dbg.apply(DebugAction::step()), ActionRejected);
}

TEST(Reference, BreakpointIndependence) {
  ReferenceDebugger dbg;
  dbg.start(parse(fixtures::kFoldable), SimConfig{});
  const auto first = dbg.apply(DebugAction::add_breakpoint(16));
  dbg.apply(DebugAction::add_breakpoint(12));
  dbg.apply(DebugAction::add_breakpoint(5));
  EXPECT_EQ(first[0], TraceEvent::breakpoint_set(16, 17));
}

TEST(Reference, PauseLineFaultShiftsAfterBlankLine) {
  const auto r = run(fixtures::kFoldable, {DebugAction::add_breakpoint(17), DebugAction::run_all()},
                     Fault::PauseLineOffByOne);
  const auto pauses = of_kind(r.trace, TraceEvent::Kind::Paused);
  ASSERT_EQ(pauses.size(), 1u);
  EXPECT_EQ(pauses[0].line, 18);
}

TEST(Reference, Deterministic) {
  std::vector<DebugAction> actions = {DebugAction::add_breakpoint(5), DebugAction::add_breakpoint(17)};
  for (int i = 0; i < 30; ++i) actions.push_back(i % 4 == 0 ? DebugAction::step() : DebugAction::run_all());
  const auto a = run(fixtures::kFoldable, actions);
  const auto b = run(fixtures::kFoldable, actions);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.waveform, b.waveform);
}

}  // namespace
}  // namespace hdldiff
