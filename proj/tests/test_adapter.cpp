#include <gtest/gtest.h>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "hdldiff/adapter/client.hpp"
#include "hdldiff/campaign/campaign.hpp"
#include "hdldiff/debugger/reference.hpp"
#include "hdldiff/diff/trace_format.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/parser.hpp"

namespace hdldiff {
namespace {

namespace fs = std::filesystem;

const std::string kAdapter = HDLDIFF_ADAPTER_PATH;
const std::string kCli = HDLDIFF_CLI_PATH;

RunResult run_with(Debugger& dbg, const char* text, const std::vector<DebugAction>& script) {
  ScriptPolicy p(script);
  return run_to_completion(dbg, parse(text), SimConfig{}, p);
}

int shell(const std::string& cmd) {
  const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

TEST(Adapter, LoopbackMatchesReference) {
  const std::vector<DebugAction> script = {DebugAction::add_breakpoint(7), DebugAction::run_all(), DebugAction::step(),
                                           DebugAction::step(), DebugAction::fold(4, 13), DebugAction::run_all()};
  ReferenceDebugger ref;
  AdapterDebugger ad(kAdapter, 10.0);
  const auto a = run_with(ref, fixtures::kFoldable, script);
  const auto b = run_with(ad, fixtures::kFoldable, script);
  EXPECT_EQ(format_trace(a.trace), format_trace(b.trace));
  EXPECT_EQ(format_waveform(a.waveform), format_waveform(b.waveform));
  EXPECT_EQ(ad.identity(), ref.identity());
}

TEST(Adapter, LoopbackFaultMatchesInProcessFault) {
  const std::vector<DebugAction> script = {DebugAction::add_breakpoint(6), DebugAction::run_all(), DebugAction::run_all()};
  ReferenceDebugger ref(Fault::NoSliding);
  AdapterDebugger ad(kAdapter + " --fault F1", 10.0);
  EXPECT_EQ(format_trace(run_with(ref, fixtures::kIfElseFalse, script).trace),
            format_trace(run_with(ad, fixtures::kIfElseFalse, script).trace));
}

TEST(Adapter, ElaborationErrorPassesThrough) {
  AdapterDebugger ad(kAdapter, 10.0);
  EXPECT_THROW(ad.start(parse("module top(output reg q);\n  assign q = 1'b0;\nendmodule\n"), SimConfig{}), ElaborationError);
}

TEST(Adapter, SilentAdapterTimesOut) {
  AdapterDebugger ad(kAdapter + " --misbehave silent", 0.3);
  EXPECT_EQ(run_with(ad, fixtures::kFoldable, {DebugAction::run_all()}).failure, FailureKind::Timeout);
}

TEST(Adapter, GarbageIsACrash) {
  AdapterDebugger ad(kAdapter + " --misbehave garbage", 5.0);
  EXPECT_EQ(run_with(ad, fixtures::kFoldable, {DebugAction::run_all()}).failure, FailureKind::Crash);
}

TEST(Adapter, ExitIsACrash) {
  AdapterDebugger ad(kAdapter + " --misbehave exit", 5.0);
  EXPECT_EQ(run_with(ad, fixtures::kFoldable, {DebugAction::run_all()}).failure, FailureKind::Crash);
}

TEST(Adapter, MissingCommandIsACrash) {
  AdapterDebugger ad("/nonexistent/adapter-binary", 5.0);
  EXPECT_EQ(run_with(ad, fixtures::kFoldable, {DebugAction::run_all()}).failure, FailureKind::Crash);
}

TEST(Adapter, CampaignClassifiesFailures) {
  CampaignConfig cfg;
  cfg.cases = 2;
  cfg.case_time_budget_s = 5.0;
  cfg.target = "adapter:" + kAdapter + " --misbehave exit";
  const auto r = run_campaign(cfg);
  EXPECT_EQ(r.failures, 2);
  for (const auto& c : r.cases) EXPECT_EQ(c.outcome.verdict.label(), "Failure(Crash)");
  cfg.target = "adapter:" + kAdapter;
  EXPECT_EQ(run_campaign(cfg).inconsistent, 0);
}

TEST(Cli, ExitCodes) {
  const auto design = write_temp("hdldiff_cli_design.v", fixtures::kFoldable);
  const auto out = fs::temp_directory_path() / "hdldiff_cli_out";
  fs::remove_all(out);

  EXPECT_EQ(shell(kCli + " simulate " + design.string()), 0);
  EXPECT_EQ(shell(kCli + " simulate " + design.string() + " --target fault:F9"), 2);
  EXPECT_EQ(shell(kCli + " transform " + design.string() + " --op bit-mutate --site 1"), 2);
  EXPECT_EQ(shell(kCli + " transform " + design.string() + " --op bit-mutate --site 5"), 0);
  EXPECT_EQ(shell(kCli + " campaign --cases 3"), 0);
  EXPECT_EQ(shell(kCli + " campaign --cases 6 --target fault:F4 --out " + out.string()), 1);
  EXPECT_TRUE(fs::exists(out / "report.txt"));
  EXPECT_EQ(shell(kCli + " campaign --cases 2 --target 'adapter:" + kAdapter + " --misbehave exit'"), 3);
  EXPECT_EQ(shell(kCli + " no-such-command"), 2);

  fs::path bundle;
  for (const auto& e : fs::directory_iterator(out / "cases")) bundle = e.path();
  ASSERT_FALSE(bundle.empty());
  EXPECT_EQ(shell(kCli + " replay " + bundle.string()), 1);
  EXPECT_EQ(shell(kCli + " replay " + bundle.string() + " --target reference"), 0);
  EXPECT_EQ(shell(kCli + " reduce " + bundle.string()), 1);  // reduced case still reproduces
  EXPECT_TRUE(fs::exists(bundle / "reduced" / "verdict.txt"));
  EXPECT_EQ(shell(kCli + " reduce " + bundle.string() + " --target reference"), 2);
  fs::remove_all(out);
  fs::remove(design);
}

}  // namespace
}  // namespace hdldiff
