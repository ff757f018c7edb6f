#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hdldiff/action/policy.hpp"
#include "hdldiff/debugger/reference.hpp"
#include "hdldiff/diff/diff.hpp"
#include "hdldiff/diff/trace_format.hpp"
#include "hdldiff/hdl/parser.hpp"

namespace hdldiff {
namespace {

RunResult run(const SourceUnit& u, std::vector<DebugAction> script, Fault fault = Fault::None) {
  ReferenceDebugger dbg(fault);
  ScriptPolicy p(std::move(script));
  return run_to_completion(dbg, u, SimConfig{}, p);
}

std::vector<int> pause_lines(const NormalizedTrace& t) {
  std::vector<int> out;
  for (const auto& e : t.events)
    if (e.event.kind == TraceEvent::Kind::Paused) out.push_back(e.event.line);
  return out;
}

TEST(TraceFormat, EventRoundTrip) {
  const std::vector<TraceEvent> events = {
      TraceEvent::breakpoint_set(7, 9),
      TraceEvent::breakpoint_set(3, std::nullopt),
      TraceEvent::paused(12, PauseReason::StepDone, 25),
      TraceEvent::wave_output(40, {{"q", LogicVec(4, 5)}, {"x", LogicVec::all_x(2)}}),
      TraceEvent::finished(400),
  };
  for (const auto& e : events) EXPECT_EQ(parse_event(format_event(e)), e) << format_event(e);
  EXPECT_EQ(format_event(events[0]), "BreakpointSet 7 9");
  EXPECT_EQ(format_event(events[1]), "BreakpointSet 3 -");
}

TEST(TraceFormat, ReferenceTraceIsByteStable) {
  const auto u = parse(fixtures::kFoldable);
  const auto r = run(u, {DebugAction::add_breakpoint(7), DebugAction::run_all(), DebugAction::step(),
                         DebugAction::run_all()});
  const std::string text = format_trace(r.trace);
  EXPECT_EQ(parse_trace(text), r.trace);
  EXPECT_EQ(format_trace(parse_trace(text)), text);
  EXPECT_EQ(parse_waveform(format_waveform(r.waveform)), r.waveform);
}

TEST(TraceFormat, RejectsUnknownEventKind) {
  EXPECT_THROW(parse_event("Teleported 7 0"), FormatError);
  EXPECT_THROW(parse_action("Jump 3"), FormatError);
}

TEST(Normalize, BlankLineInsertionAlignsPauses) {
  const auto orig = parse(fixtures::kDoubleNegation);
  const auto shifted = parse(fixtures::kDoubleNegationShifted);
  const LineMap map = LineMap::insertion(orig.main().line_count(), 2, 1);
  ASSERT_EQ(map.map(3), 4);

  const auto a = run(orig, {DebugAction::add_breakpoint(3), DebugAction::run_all(), DebugAction::run_all()});
  const auto b = run(shifted, {DebugAction::add_breakpoint(4), DebugAction::run_all(), DebugAction::run_all()});
  ASSERT_EQ(b.trace[1].kind, TraceEvent::Kind::Paused);
  EXPECT_EQ(b.trace[1].line, 4);

  NormalizeOptions vo;
  vo.variant_map = &map;
  const auto na = normalize(a, {}, SimConfig{});
  const auto nb = normalize(b, {}, SimConfig{}, vo);
  EXPECT_EQ(pause_lines(nb), (std::vector<int>{3, 3}));
  EXPECT_EQ(pause_lines(na), pause_lines(nb));
  EXPECT_TRUE(compare(na, nb).is_consistent());
}

TEST(Normalize, UnmappedVariantLineNeverMatches) {
  const LineMap map = LineMap::insertion(5, 2, 1);
  RunResult r;
  r.trace = {TraceEvent::paused(2, PauseReason::StepDone, 5)};
  r.event_action = {0};
  NormalizeOptions vo;
  vo.variant_map = &map;
  EXPECT_EQ(normalize(r, {}, SimConfig{}, vo).events[0].event.line, -2);
}

TEST(Normalize, ResetWindowDropsEarlySamples) {
  SimConfig cfg;
  cfg.reset_window = 100;
  RunResult r;
  r.trace = {TraceEvent::wave_output(50, {{"q", LogicVec(1, 0)}}), TraceEvent::wave_output(150, {{"q", LogicVec(1, 1)}})};
  r.event_action = {0, 0};
  r.waveform.names = {"q"};
  r.waveform.samples = {{50, {LogicVec(1, 0)}}, {150, {LogicVec(1, 1)}}};
  const auto n = normalize(r, {}, cfg);
  ASSERT_EQ(n.events.size(), 1u);
  EXPECT_EQ(n.events[0].event.time, 150u);
  ASSERT_EQ(n.waves.samples.size(), 1u);
  EXPECT_EQ(n.waves.samples[0].first, 150u);
}

TEST(Normalize, IgnoredSignalsAreDropped) {
  RunResult r;
  r.trace = {TraceEvent::wave_output(150, {{"q", LogicVec(1, 1)}, {"dmy", LogicVec(2, 3)}})};
  r.event_action = {0};
  r.waveform.names = {"q", "dmy"};
  r.waveform.samples = {{150, {LogicVec(1, 1), LogicVec(2, 3)}}};
  const auto n = normalize(r, {Expectation::ignore_signals({"dmy"})}, SimConfig{});
  EXPECT_EQ(n.events[0].event.values.size(), 1u);
  EXPECT_EQ(n.waves.names, (std::vector<std::string>{"q"}));
}

TEST(Compare, CategoriesOfFirstDivergence) {
  const auto mk = [](Trace t) {
    NormalizedTrace n;
    for (auto& e : t) n.events.push_back({e, false});
    return n;
  };
  const auto pause = [](int l, std::uint64_t t) { return TraceEvent::paused(l, PauseReason::Breakpoint, t); };
  EXPECT_EQ(compare(mk({TraceEvent::breakpoint_set(3, 4)}), mk({TraceEvent::breakpoint_set(3, std::nullopt)})).category,
            Category::BreakpointPlacement);
  EXPECT_EQ(compare(mk({pause(4, 5)}), mk({pause(5, 5)})).category, Category::PauseLocation);
  EXPECT_EQ(compare(mk({pause(4, 5), pause(4, 15)}), mk({pause(4, 5), pause(4, 25)})).category, Category::PauseCount);
  EXPECT_EQ(compare(mk({pause(4, 5), TraceEvent::finished(400)}), mk({pause(4, 5)})).category, Category::Termination);
  EXPECT_TRUE(compare(mk({pause(4, 5)}), mk({pause(4, 5)})).is_consistent());
}

TEST(Compare, EarlierWaveDifferenceWins) {
  NormalizedTrace a, b;
  a.waves.names = b.waves.names = {"q"};
  a.waves.samples = {{110, {LogicVec(1, 0)}}};
  b.waves.samples = {{110, {LogicVec(1, 1)}}};
  a.events = {{TraceEvent::paused(4, PauseReason::Breakpoint, 205), false}};
  b.events = {{TraceEvent::paused(5, PauseReason::Breakpoint, 205), false}};
  EXPECT_EQ(compare(a, b).category, Category::WaveValue);
  b.waves.samples = a.waves.samples;
  EXPECT_EQ(compare(a, b).category, Category::PauseLocation);
}

TEST(Compare, PauseInsideRemovedCodeIsReported) {
  NormalizedTrace a, b;
  a.events = {{TraceEvent::paused(6, PauseReason::Breakpoint, 5), true}};
  EXPECT_EQ(compare(a, b).category, Category::PauseLocation);
}

TEST(Expectations, PauseCountPerTimeStep) {
  RunResult r;
  for (int k = 0; k < 8; ++k) r.trace.push_back(TraceEvent::paused(4, PauseReason::Breakpoint, 0));
  r.trace.push_back(TraceEvent::finished(400));
  EXPECT_TRUE(check_expectations(r, {Expectation::pause_count(4, 8)}).is_consistent());
  const auto v = check_expectations(r, {Expectation::pause_count(4, 7)});
  EXPECT_EQ(v.category, Category::PauseCount);
}

TEST(Expectations, NoPauseAndSlide) {
  RunResult r;
  r.trace = {TraceEvent::breakpoint_set(2, 3), TraceEvent::paused(3, PauseReason::Breakpoint, 5)};
  r.event_action = {0, 1};
  EXPECT_EQ(check_expectations(r, {Expectation::no_pause_at({3})}).category, Category::PauseLocation);
  EXPECT_TRUE(check_expectations(r, {Expectation::no_pause_at({3}, 15)}).is_consistent());
  EXPECT_TRUE(check_expectations(r, {Expectation::slide_equivalence(2, 3, 0, 3)}).is_consistent());
  EXPECT_EQ(check_expectations(r, {Expectation::slide_equivalence(2, 4, 0, 4)}).category,
            Category::BreakpointPlacement);
}

TEST(Expectations, UnresolvedEntryThrows) {
  Expectation e = Expectation::no_pause_at({3});
  e.resolved = false;
  EXPECT_THROW(check_expectations(RunResult{}, {e}), UnresolvedExpectation);
}

TEST(PausePlacement, PauseWithoutBreakpointIsFlagged) {
  const Trace ok = {TraceEvent::breakpoint_set(3, 4), TraceEvent::paused(4, PauseReason::Breakpoint, 5)};
  EXPECT_TRUE(check_pause_placement(ok).is_consistent());
  const Trace bad = {TraceEvent::breakpoint_set(3, 4), TraceEvent::paused(5, PauseReason::Breakpoint, 5)};
  EXPECT_EQ(check_pause_placement(bad).category, Category::PauseLocation);
  const Trace step = {TraceEvent::paused(5, PauseReason::StepDone, 5)};
  EXPECT_TRUE(check_pause_placement(step).is_consistent());
}

}  // namespace
}  // namespace hdldiff
