#include <gtest/gtest.h>

#include <map>

#include "fixtures.hpp"
#include "hdldiff/action/policy.hpp"
#include "hdldiff/action/transforms.hpp"
#include "hdldiff/campaign/campaign.hpp"
#include "hdldiff/debugger/reference.hpp"
#include "hdldiff/hdl/parser.hpp"

namespace hdldiff {
namespace {

CaseOutcome act_case(const char* text, const std::vector<DebugAction>& script, const TransformRecord& rec,
                     Fault fault = Fault::None) {
  CaseSpec spec;
  spec.seed = parse(text);
  spec.base = plan_from_script(script);
  spec.act = {rec};
  spec.use_pro = false;
  return evaluate_case(spec, [fault] { return std::make_unique<ReferenceDebugger>(fault); }, CampaignConfig{});
}

int pauses_at(const ActionPlan& plan, const char* text, int line, Fault fault = Fault::None) {
  ReferenceDebugger dbg(fault);
  PlannedPolicy policy(plan);
  const auto r = run_to_completion(dbg, parse(text), SimConfig{}, policy);
  int n = 0;
  for (const auto& e : r.trace) n += e.kind == TraceEvent::Kind::Paused && e.line == line;
  return n;
}

TransformRecord record(const std::string& line) { return TransformRecord::parse(line); }

TEST(BasePolicy, StartsWithBreakpointsThenRunAll) {
  const auto u = parse(fixtures::kFoldable);
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const auto plan = base_policy(u, rng);
    ASSERT_EQ(plan.actions.size(), 256u);
    ASSERT_EQ(plan.actions.front().action.kind, DebugAction::Kind::AddBreakpoint);
    const auto k = plan.prefix_end();
    ASSERT_GE(k, 1u);
    ASSERT_LE(k, 4u);
    ASSERT_EQ(plan.actions[k].action.kind, DebugAction::Kind::RunAll);
  }
}

TEST(BasePolicy, BreakpointLinesAreUniform) {
  const auto u = parse(fixtures::kFoldable);
  const std::vector<int> exec = {5, 6, 7, 8, 9, 10, 11, 17, 18};
  std::map<int, int> hist;
  Rng rng(5);
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++hist[base_policy(u, rng).actions.front().action.line];
  double chi2 = 0;
  const double expected = static_cast<double>(n) / static_cast<double>(exec.size());
  for (int l : exec) chi2 += (hist[l] - expected) * (hist[l] - expected) / expected;
  EXPECT_EQ(hist.size(), exec.size());
  EXPECT_LT(chi2, 26.12);  // chi-square, 8 degrees of freedom, p = 0.001
}

TEST(BasePolicy, DeterministicInSeed) {
  const auto u = parse(fixtures::kFoldable);
  Rng a(99), b(99);
  EXPECT_EQ(base_policy(u, a), base_policy(u, b));
}

TEST(BasePolicy, NoExecutableLines) {
  Rng rng(1);
  EXPECT_THROW(base_policy(parse("module top();\nendmodule\n"), rng), NoExecutableLines);
}

TEST(ActTransforms, SlideFromCommentIsTransparent) {
  const auto rec = record("breakpoint-slide action=0 from=6 to=7");
  const std::vector<DebugAction> script = {DebugAction::add_breakpoint(7), DebugAction::run_all(),
                                           DebugAction::run_all()};
  EXPECT_TRUE(act_case(fixtures::kIfElseFalse, script, rec).verdict.is_consistent());
  const auto v = act_case(fixtures::kIfElseFalse, script, rec, Fault::NoSliding).verdict;
  EXPECT_EQ(v.label(), "Inconsistent(BreakpointPlacement)");
}

TEST(ActTransforms, IfElseProbeOnlyTakenBranchPauses) {
  const auto rec = record("if-else-probe then=4 else=7 at_then=0 at_else=0");
  const std::vector<DebugAction> script = {DebugAction::run_all(), DebugAction::run_all()};
  EXPECT_TRUE(act_case(fixtures::kIfElseTrue, script, rec).verdict.is_consistent());
  EXPECT_TRUE(act_case(fixtures::kIfElseFalse, script, rec).verdict.is_consistent());
}

TEST(ActTransforms, StepForLoopEightPauses) {
  const auto plan = apply_act_record(plan_from_script({DebugAction::run_all()}), parse(fixtures::kEightIterations),
                                     record("step-for-loop line=4 count=8 at=0"));
  EXPECT_EQ(pauses_at(plan, fixtures::kEightIterations, 4), 8);
  EXPECT_EQ(pauses_at(plan, fixtures::kEightIterations, 4, Fault::LoopLastIteration), 7);
  const auto v = act_case(fixtures::kEightIterations, {DebugAction::run_all()}, record("step-for-loop line=4 count=8 at=0"),
                          Fault::LoopLastIteration);
  EXPECT_EQ(v.verdict.label(), "Inconsistent(PauseCount)");
}

TEST(ActTransforms, UnreachableLoopNoPauses) {
  const auto u = parse(fixtures::kUnreachableLoop);
  const auto plan = apply_act_record(plan_from_script({DebugAction::run_all()}), u, record("step-for-loop line=6 count=0 at=0"));
  EXPECT_EQ(pauses_at(plan, fixtures::kUnreachableLoop, 6), 0);
}

TEST(ActTransforms, FoldKeepsBreakpointPlacement) {
  const auto rec = record("code-fold action=0 start=4 end=13");
  const std::vector<DebugAction> script = {DebugAction::add_breakpoint(17), DebugAction::run_all(),
                                           DebugAction::run_all()};
  EXPECT_TRUE(act_case(fixtures::kFoldable, script, rec).verdict.is_consistent());
  EXPECT_EQ(act_case(fixtures::kFoldable, script, rec, Fault::FoldCoordinates).verdict.label(),
            "Inconsistent(BreakpointPlacement)");
}

TEST(ActTransforms, ReplayRejectsStaleRecord) {
  const auto u = parse(fixtures::kFoldable);
  EXPECT_THROW(apply_act_record(plan_from_script({DebugAction::run_all()}), u, record("code-fold action=0 start=4 end=13")),
               NoActionSite);
  EXPECT_THROW(apply_act_record(plan_from_script({DebugAction::run_all()}), u, record("step-for-loop line=5 count=8 at=0")),
               NoActionSite);
}

TEST(ActPipeline, RecordsReplayToSamePlan) {
  const auto u = parse(fixtures::kFoldable);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto base = base_policy(u, rng);
    const auto res = act_pipeline(base, u, 6, rng);
    ASSERT_LE(res.records.size(), 6u);
    ActionPlan replay = base;
    for (const auto& r : res.records) replay = apply_act_record(replay, u, r);
    EXPECT_EQ(replay, res.plan);
  }
}

}  // namespace
}  // namespace hdldiff
