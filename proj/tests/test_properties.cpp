#include <gtest/gtest.h>

#include "hdldiff/campaign/seed_gen.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/parser.hpp"
#include "hdldiff/hdl/render.hpp"
#include "hdldiff/rtl/transforms.hpp"
#include "oracles.hpp"

namespace hdldiff {
namespace {

TEST(Oracle, AssignConvSitesMatchTextScan) {
  std::mt19937_64 rng(7);
  int eligible = 0;
  for (int i = 0; i < 300; ++i) {
    const auto text = oracles::random_block_module(rng);
    const auto u = parse(text);
    ASSERT_EQ(render(u), text);
    elaborate(u);
    std::set<int> got;
    for (const auto& s : enumerate_sites(u, RtlOp::AssignConv)) got.insert(s.loc.line);
    const auto want = oracles::assign_conv_lines(text);
    eligible += static_cast<int>(want.size());
    EXPECT_EQ(got, want) << text;
  }
  EXPECT_GT(eligible, 0);
}

TEST(Oracle, GeneratedSeedsRoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto text = generate_seed_text(rng);
    const auto u = parse(text);
    ASSERT_EQ(render(u), text);
    const int lines = u.main().line_count();
    EXPECT_GE(lines, 80);
    EXPECT_LE(lines, 120);
  }
}

TEST(Oracle, LargeSeedsRespectLineBudget) {
  Rng rng(4);
  SeedOptions opt;
  opt.min_lines = 700;
  opt.max_lines = 1000;
  for (int i = 0; i < 5; ++i) {
    const auto u = generate_seed(rng, opt);
    EXPECT_GE(u.main().line_count(), 700);
    EXPECT_LE(u.main().line_count(), 1000);
    EXPECT_EQ(render(parse(render(u))), render(u));
  }
}

}  // namespace
}  // namespace hdldiff
