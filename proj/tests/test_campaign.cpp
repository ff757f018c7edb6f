#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "hdldiff/campaign/bundle.hpp"
#include "hdldiff/campaign/campaign.hpp"
#include "hdldiff/hdl/parser.hpp"
#include "hdldiff/hdl/render.hpp"

namespace hdldiff {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hdldiff_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Config, ParsesKeysAndComments) {
  const auto c = parse_config(
      "# campaign\n"
      "cases = 40\n"
      "M = 3\n"
      "rng_seed = 77\n"
      "mode = ATonly\n"
      "target = fault:F2\n"
      "workers = 4\n"
      "clock_period = 20\n"
      "rtl_weights = 1,1,1,1,1,5\n");
  EXPECT_EQ(c.cases, 40);
  EXPECT_EQ(c.max_iterations, 3);
  EXPECT_EQ(c.rng_seed, 77u);
  EXPECT_EQ(c.mode, Mode::ATonly);
  EXPECT_EQ(c.target, "fault:F2");
  EXPECT_EQ(c.workers, 4);
  EXPECT_EQ(c.sim.clock_period, 20u);
  ASSERT_EQ(c.rtl_weights.size(), 6u);
  EXPECT_DOUBLE_EQ(c.rtl_weights[5], 5.0);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("colour = blue\n"), ConfigError);
  EXPECT_THROW(parse_config("cases = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("M = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("mode = Sideways\n"), ConfigError);
  EXPECT_THROW(parse_config("clock_period = 7\n"), ConfigError);
  EXPECT_THROW(parse_config("min_lines = 200\nmax_lines = 100\n"), ConfigError);
  EXPECT_THROW(parse_config("rtl_weights = 1,2\n"), ConfigError);
  EXPECT_THROW(parse_config("cases\n"), ConfigError);
  EXPECT_THROW(Target::parse("fault:F9"), ConfigError);
  EXPECT_THROW(Target::parse("gdb"), ConfigError);
}

TEST(Config, TargetSpellings) {
  EXPECT_EQ(Target::parse("reference").kind, Target::Kind::Reference);
  EXPECT_EQ(Target::parse("fault:F3").fault, Fault::PauseLineOffByOne);
  EXPECT_EQ(Target::parse("faults:rotate").kind, Target::Kind::FaultRotation);
  const auto a = Target::parse("adapter:./x --y");
  EXPECT_EQ(a.kind, Target::Kind::Adapter);
  EXPECT_EQ(a.command, "./x --y");
  EXPECT_EQ(Target::parse(a.to_string()).command, a.command);
}

TEST(Cases, ModesSelectTransformationSides) {
  CampaignConfig cfg;
  cfg.max_iterations = 3;
  const auto seed = parse(fixtures::kFoldable);
  for (std::size_t id = 0; id < 30; ++id) {
    cfg.mode = Mode::PTonly;
    auto s = build_case(id, cfg, seed);
    EXPECT_TRUE(s.use_pro);
    EXPECT_FALSE(s.use_act);
    EXPECT_TRUE(s.act.empty());
    cfg.mode = Mode::ATonly;
    s = build_case(id, cfg, seed);
    EXPECT_FALSE(s.use_pro);
    EXPECT_TRUE(s.rtl.empty());
    cfg.mode = Mode::RandomOne;
    s = build_case(id, cfg, seed);
    EXPECT_NE(s.use_pro, s.use_act);
  }
}

TEST(Cases, RecordCountsBoundedByIterations) {
  for (int m : {1, 3, 6}) {
    CampaignConfig cfg;
    cfg.max_iterations = m;
    cfg.rng_seed = 300 + static_cast<std::uint64_t>(m);
    int exact = 0, total = 0;
    for (std::size_t id = 0; id < 60; ++id) {
      const auto seed = parse(fixtures::kFoldable);
      bool pro_early = false, act_early = false;
      const auto s = build_case(id, cfg, seed, &pro_early, &act_early);
      EXPECT_LE(s.rtl.size(), static_cast<std::size_t>(m));
      EXPECT_LE(s.act.size(), static_cast<std::size_t>(m));
      if (m == 1) {
        if (!pro_early) EXPECT_EQ(s.rtl.size(), 1u);
        if (!act_early) EXPECT_EQ(s.act.size(), 1u);
        exact += !pro_early && !act_early;
        ++total;
      }
    }
    if (m == 1) EXPECT_GT(exact, total / 2);
  }
}

TEST(Cases, SharedBudgetSplitsIterations) {
  CampaignConfig cfg;
  cfg.max_iterations = 4;
  cfg.shared_budget = true;
  const auto seed = parse(fixtures::kFoldable);
  for (std::size_t id = 0; id < 40; ++id) {
    const auto s = build_case(id, cfg, seed);
    EXPECT_LE(s.rtl.size() + s.act.size(), 4u);
  }
}

TEST(Campaign, ReferenceIsConsistent) {
  CampaignConfig cfg;
  cfg.cases = 24;
  cfg.workers = 4;
  const auto r = run_campaign(cfg);
  EXPECT_EQ(r.designs_run + r.excluded, 24);
  EXPECT_EQ(r.inconsistent, 0);
  EXPECT_EQ(r.failures, 0);
}

TEST(Campaign, ReportIsDeterministic) {
  CampaignConfig cfg;
  cfg.cases = 12;
  cfg.target = "faults:rotate";
  cfg.rng_seed = 2024;
  const auto a = run_campaign(cfg).to_text();
  const auto b = run_campaign(cfg).to_text();
  EXPECT_EQ(a, b);
  cfg.workers = 3;
  EXPECT_EQ(run_campaign(cfg).to_text(), a);
}

TEST(Campaign, NonBlockingFaultShowsAsWaveValue) {
  CampaignConfig cfg;
  cfg.cases = 10;
  cfg.target = "fault:F2";
  const auto r = run_campaign(cfg);
  EXPECT_GT(r.inconsistent, 0);
  EXPECT_EQ(r.categories.size(), 1u);
  EXPECT_EQ(r.categories.begin()->first, "WaveValue");
}

TEST(Campaign, WritesReportAndBundles) {
  const auto dir = scratch_dir("campaign");
  CampaignConfig cfg;
  cfg.cases = 6;
  cfg.target = "fault:F2";
  cfg.out_dir = dir.string();
  const auto r = run_campaign(cfg);
  ASSERT_GT(r.inconsistent, 0);
  EXPECT_TRUE(fs::exists(dir / "report.txt"));
  std::ifstream in(dir / "report.txt");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, r.to_text());
  int bundles = 0;
  for (const auto& e : fs::directory_iterator(dir / "cases")) bundles += fs::exists(e.path() / "verdict.txt");
  EXPECT_EQ(bundles, r.inconsistent + r.failures);
  fs::remove_all(dir);
}

TEST(Bundle, RoundTripReplaysVerdict) {
  CampaignConfig cfg;
  cfg.target = "fault:F2";
  std::optional<CaseResult> hit;
  for (std::size_t id = 0; id < 20 && !hit; ++id) {
    auto r = run_case(id, cfg);
    if (r.outcome.verdict.kind == Verdict::Kind::Inconsistent) hit = std::move(r);
  }
  ASSERT_TRUE(hit);

  const auto dir = scratch_dir("bundle");
  Bundle b{hit->spec, cfg.target, cfg.sim, hit->outcome};
  write_bundle(dir.string(), b);
  const auto back = load_bundle(dir.string());
  EXPECT_EQ(render(back.spec.seed), render(hit->spec.seed));
  EXPECT_EQ(back.spec.base.script(), hit->spec.base.script());
  ASSERT_EQ(back.spec.rtl.size(), hit->spec.rtl.size());
  for (std::size_t i = 0; i < back.spec.rtl.size(); ++i)
    EXPECT_EQ(back.spec.rtl[i].to_string(), hit->spec.rtl[i].to_string());
  ASSERT_EQ(back.spec.act.size(), hit->spec.act.size());
  for (std::size_t i = 0; i < back.spec.act.size(); ++i)
    EXPECT_EQ(back.spec.act[i].to_string(), hit->spec.act[i].to_string());
  EXPECT_EQ(back.target, "fault:F2");
  EXPECT_EQ(back.outcome.verdict.label(), hit->outcome.verdict.label());

  const auto make = make_factory(Target::parse(back.target), 0, cfg);
  const auto again = evaluate_case(back.spec, make, cfg);
  EXPECT_EQ(again.verdict.label(), hit->outcome.verdict.label());
  EXPECT_EQ(signature(again.verdict), signature(hit->outcome.verdict));
  fs::remove_all(dir);
}

TEST(Bundle, MissingFilesAreReported) {
  const auto dir = scratch_dir("empty_bundle");
  EXPECT_THROW(load_bundle(dir.string()), std::runtime_error);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace hdldiff
