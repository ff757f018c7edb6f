// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hdldiff/action/policy.hpp"
#include "hdldiff/action/transforms.hpp"
#include "hdldiff/campaign/bundle.hpp"
#include "hdldiff/campaign/campaign.hpp"
#include "hdldiff/campaign/seed_gen.hpp"
#include "hdldiff/debugger/reference.hpp"
#include "hdldiff/diff/diff.hpp"
#include "hdldiff/hdl/const_eval.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/parser.hpp"
#include "hdldiff/hdl/render.hpp"
#include "hdldiff/reduce/reducer.hpp"
#include "hdldiff/rtl/transforms.hpp"
#include "oracles.hpp"

using namespace hdldiff;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note << "failed: " << what << "; ";
    ok = ok && cond;
  }
};

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<void(Check&)> body;
};

DebuggerFactory reference(Fault f = Fault::None) {
  return [f] { return std::make_unique<ReferenceDebugger>(f); };
}

std::size_t column(const WaveformLog& log, const std::string& name) {
  return static_cast<std::size_t>(std::find(log.names.begin(), log.names.end(), name) - log.names.begin());
}

WaveformLog run_waves(const SourceUnit& u, Fault f = Fault::None) {
  ReferenceDebugger dbg(f);
  dbg.start(u, SimConfig{});
  dbg.apply(DebugAction::run_all());
  return dbg.waveform();
}

RunResult run_plan(const SourceUnit& u, const ActionPlan& plan, Fault f = Fault::None) {
  ReferenceDebugger dbg(f);
  PlannedPolicy p(plan);
  return run_to_completion(dbg, u, SimConfig{}, p);
}

RunResult run_script(const SourceUnit& u, std::vector<DebugAction> script, Fault f = Fault::None) {
  ReferenceDebugger dbg(f);
  ScriptPolicy p(std::move(script));
  return run_to_completion(dbg, u, SimConfig{}, p);
}

std::vector<int> pause_lines(const Trace& t) {
  std::vector<int> out;
  for (const auto& e : t)
    if (e.kind == TraceEvent::Kind::Paused) out.push_back(e.line);
  return out;
}

std::vector<int> pause_lines(const NormalizedTrace& t) {
  std::vector<int> out;
  for (const auto& e : t.events)
    if (e.event.kind == TraceEvent::Kind::Paused) out.push_back(e.event.line);
  return out;
}

std::optional<int> actual_line(const Trace& t) {
  for (const auto& e : t)
    if (e.kind == TraceEvent::Kind::BreakpointSet) return e.actual;
  return std::nullopt;
}

// 1. Non-blocking commits sample pre-edge values; blocking sees the new value.
void scheduler(Check& c) {
  const auto nb = run_waves(parse(fixtures::kAssignBlock));
  LogicVec prev = LogicVec::all_x(1);
  int edges = 0;
  for (const auto& [t, row] : nb.samples) {
    if (t % 10 != 5) continue;
    ++edges;
    c.expect(row[column(nb, "reg6")] == prev, "reg6 == pre-edge reg5 at t=" + std::to_string(t));
    prev = row[column(nb, "reg5")];
  }
  c.expect(edges == 40, "40 clock edges");

  const auto b = run_waves(parse(fixtures::kAssignBlockBlocking));
  for (const auto& [t, row] : b.samples)
    if (t >= 5) c.expect(row[column(b, "reg6")] == LogicVec(1, 1), "blocking reg6 == 1'b1");
  c.note << edges << " edges";
}

// 2. The reference never disagrees with itself.
void soundness(Check& c) {
  CampaignConfig cfg;
  cfg.cases = 200;
  cfg.max_iterations = 6;
  cfg.mode = Mode::Full;
  cfg.large_cases = 1;
  cfg.rng_seed = 20240601;
  const auto r = run_campaign(cfg);
  c.expect(r.designs_run == 200, "200 designs run");
  c.expect(r.inconsistent == 0, "0 Inconsistent");
  c.expect(r.failures == 0, "0 Failure");
  c.expect(!r.cases.empty() && r.cases[0].lines >= 700 && r.cases[0].lines <= 1000, "one 700-1000 line seed");
  c.note << "run=" << r.designs_run << " inconsistent=" << r.inconsistent << " failures=" << r.failures
         << " large=" << (r.cases.empty() ? 0 : r.cases[0].lines) << " lines";
}

// 3. Every injected fault is found, under its own category.
void sensitivity(Check& c) {
  const std::vector<std::pair<std::string, std::string>> want = {{"F1", "BreakpointPlacement"},
                                                                 {"F2", "WaveValue"},
                                                                 {"F3", "PauseLocation"},
                                                                 {"F4", "BreakpointPlacement"},
                                                                 {"F5", "PauseCount"}};
  for (const auto& [fault, category] : want) {
    CampaignConfig cfg;
    cfg.cases = 100;
    cfg.target = "fault:" + fault;
    cfg.rng_seed = 77;
    const auto r = run_campaign(cfg);
    const auto it = r.categories.find(category);
    const int hits = it == r.categories.end() ? 0 : it->second;
    c.expect(hits >= 1, fault + " detected as " + category);
    c.expect(r.failures == 0, fault + " without failures");
    c.note << fault << ":" << category << "=" << hits << "/" << r.inconsistent << " ";
  }
}

// 4. Transformations preserve values, checked exhaustively against independent oracles.
void equivalence(Check& c) {
  int splits = 0;
  for (unsigned w = 1; w <= 4; ++w) {
    const std::uint64_t top = (1u << w) - 1;
    for (std::uint64_t n = 0; n <= top; ++n) {
      const auto u = parse("module top(output wire [" + std::to_string(w - 1) + ":0] y);\n  assign y = " +
                           std::to_string(w) + "'d" + std::to_string(n) + ";\nendmodule\n");
      for (int form = 0; form < 2; ++form) {
        const std::uint64_t lo = form == 0 ? 0 : n;
        const std::uint64_t hi = form == 0 ? n : top;
        for (std::uint64_t k = lo; k <= hi; ++k) {
          TransformRecord rec;
          rec.op = "literal-expr";
          rec.set("line", 2).set("ordinal", 0).set("form", form == 0 ? "add" : "sub").set("operand", std::to_string(k));
          const auto v = apply_rtl_record(u, rec).variant;
          const auto& a = std::get<ContinuousAssign>(v.main().modules[0].items[0]);
          // Independent arithmetic: the operands are n-k and k (add) or n+k' and k' (sub), in w bits.
          const std::uint64_t mask = top;
          const std::uint64_t l = const_eval(*a.value.lhs, w).value_or(~0ull) & mask;
          const std::uint64_t r = const_eval(*a.value.rhs, w).value_or(~0ull) & mask;
          const std::uint64_t expect = form == 0 ? (l + r) & mask : (l - r) & mask;
          c.expect(expect == n && const_eval(a.value, w) == n, "literal split " + render_expr(a.value));
          ++splits;
        }
      }
    }
  }

  // ~~ against the 4-state table, through the transform and the simulator.
  const char* design =
      "module top(output wire y0, output wire y1, output wire yx);\n"
      "  reg r0;\n"
      "  reg r1;\n"
      "  reg rx;\n"
      "  initial begin\n"
      "    r0 = 1'b0;\n"
      "    r1 = 1'b1;\n"
      "  end\n"
      "  assign y0 = r0;\n"
      "  assign y1 = r1;\n"
      "  assign yx = rx;\n"
      "endmodule\n";
  auto table_not = [](Bit b) { return b == Bit::Zero ? Bit::One : b == Bit::One ? Bit::Zero : Bit::X; };
  SourceUnit variant = parse(design);
  for (int line : {9, 10, 11}) {
    std::vector<TransformSite> sites;
    for (const auto& s : enumerate_sites(variant, RtlOp::BitMutate))
      if (s.loc.line == line) sites.push_back(s);
    c.expect(!sites.empty(), "bit-mutate site on line " + std::to_string(line));
    if (!sites.empty()) variant = bit_double_negate(variant, sites.front()).variant;
  }
  c.expect(render(variant).find("~(~") != std::string::npos, "double negation inserted");
  const auto wa = run_waves(parse(design));
  const auto wb = run_waves(variant);
  const std::vector<std::pair<std::string, Bit>> probes = {{"y0", Bit::Zero}, {"y1", Bit::One}, {"yx", Bit::X}};
  for (const auto& [name, in] : probes) {
    const Bit want = table_not(table_not(in));
    const auto& last_a = wa.samples.back().second[column(wa, name)];
    const auto& last_b = wb.samples.back().second[column(wb, name)];
    c.expect(last_a.bit(0) == want && last_b.bit(0) == want, "~~ table for " + name);
    LogicVec v(1, 0);
    v.set_bit(0, in);
    c.expect(logic_not(logic_not(v)).bit(0) == want, "logic_not twice for " + name);
  }
  c.expect(wa.samples == wb.samples, "double-negated design simulates identically");

  // Assignment conversion eligibility against a text-level read/write scan.
  std::mt19937_64 rng(7);
  int mismatches = 0, eligible = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto text = oracles::random_block_module(rng);
    const auto u = parse(text);
    elaborate(u);
    std::set<int> got;
    for (const auto& s : enumerate_sites(u, RtlOp::AssignConv)) got.insert(s.loc.line);
    const auto want = oracles::assign_conv_lines(text);
    eligible += static_cast<int>(want.size());
    mismatches += got != want;
  }
  c.expect(mismatches == 0, "assign-conv sites match the scan");
  c.note << splits << " splits, 1000 blocks, " << eligible << " eligible sites, " << mismatches << " mismatches";
}

// 5. Loop stepping pauses once per iteration.
void loop_count(Check& c) {
  const auto eight = parse(fixtures::kEightIterations);
  const auto p8 = apply_act_record(plan_from_script({DebugAction::run_all()}), eight,
                                   TransformRecord::parse("step-for-loop line=4 count=8 at=0"));
  const auto n8 = std::ranges::count(pause_lines(run_plan(eight, p8).trace), 4);
  const auto zero = parse(fixtures::kUnreachableLoop);
  const auto p0 = apply_act_record(plan_from_script({DebugAction::run_all()}), zero,
                                   TransformRecord::parse("step-for-loop line=6 count=0 at=0"));
  const auto n0 = std::ranges::count(pause_lines(run_plan(zero, p0).trace), 6);
  c.expect(n8 == 8, "eight-iteration loop gives 8 pauses");
  c.expect(n0 == 0, "unreachable loop gives 0 pauses");
  c.note << "pauses " << n8 << " and " << n0;
}

// 6. Folding does not move where a breakpoint lands.
void fold_invariant(Check& c) {
  const auto u = parse(fixtures::kFoldable);
  const auto plain = actual_line(run_script(u, {DebugAction::add_breakpoint(17)}).trace);
  const auto folded = actual_line(run_script(u, {DebugAction::fold(4, 13), DebugAction::add_breakpoint(8)}).trace);
  c.expect(plain == 17 && folded == 17, "folded and unfolded actual lines agree");

  CaseSpec spec;
  spec.seed = u;
  spec.base = plan_from_script({DebugAction::add_breakpoint(17), DebugAction::run_all(), DebugAction::run_all()});
  spec.act = {TransformRecord::parse("code-fold action=0 start=4 end=13")};
  spec.use_pro = false;
  const auto ok = evaluate_case(spec, reference(), CampaignConfig{}).verdict;
  const auto bad = evaluate_case(spec, reference(Fault::FoldCoordinates), CampaignConfig{}).verdict;
  c.expect(ok.is_consistent(), "reference consistent");
  c.expect(bad.kind == Verdict::Kind::Inconsistent && bad.category == Category::BreakpointPlacement,
           "F4 flips to BreakpointPlacement");
  c.note << "actual " << plain.value_or(-1) << "/" << folded.value_or(-1) << ", F4 " << bad.label();
}

// 7. A blank line shifts nothing after normalisation; a debugger that ignores the shift is caught.
void normalization(Check& c) {
  const auto orig = parse(fixtures::kDoubleNegation);
  const auto shifted = parse(fixtures::kDoubleNegationShifted);
  const LineMap map = LineMap::insertion(orig.main().line_count(), 2, 1);
  NormalizeOptions vo;
  vo.variant_map = &map;
  const std::vector<DebugAction> tail = {DebugAction::run_all(), DebugAction::run_all()};
  auto script = [&](int line) {
    std::vector<DebugAction> s = {DebugAction::add_breakpoint(line)};
    s.insert(s.end(), tail.begin(), tail.end());
    return s;
  };

  const auto base = normalize(run_script(orig, script(3)), {}, SimConfig{});
  const auto variant = normalize(run_script(shifted, script(map.map(3).value_or(-1))), {}, SimConfig{}, vo);
  c.expect(!pause_lines(base).empty() && pause_lines(base) == pause_lines(variant), "normalized pause lines equal");
  c.expect(compare(base, variant).is_consistent(), "reference consistent");

  // The original line number reused on the variant, as a debugger that ignores the edit would.
  const auto stale_ref = normalize(run_script(shifted, script(3)), {}, SimConfig{}, vo);
  const auto stale_f1 = normalize(run_script(shifted, script(3), Fault::NoSliding), {}, SimConfig{}, vo);
  c.expect(pause_lines(stale_ref) == pause_lines(base), "stale request slides onto the statement");
  const auto v = compare(base, stale_f1);
  c.expect(v.kind == Verdict::Kind::Inconsistent, "F1 mismatch detected");
  c.note << "pauses " << pause_lines(base).size() << ", F1 " << v.label();
}

// 8. Iteration accounting of the pipelines.
void accounting(Check& c) {
  Rng seeds(8);
  int m1_cases = 0, m1_exact = 0, over = 0, wrong = 0;
  std::vector<SourceUnit> pool;
  for (int i = 0; i < 50; ++i) pool.push_back(generate_seed(seeds));
  for (std::size_t id = 0; id < 1000; ++id) {
    CampaignConfig cfg;
    const int m = std::array{1, 3, 6}[id % 3];
    cfg.max_iterations = m;
    cfg.rng_seed = 88;
    bool pro_early = false, act_early = false;
    const auto s = build_case(id, cfg, pool[id % pool.size()], &pro_early, &act_early);
    over += s.rtl.size() > static_cast<std::size_t>(m) || s.act.size() > static_cast<std::size_t>(m);
    if (m == 1) {
      ++m1_cases;
      const std::size_t want_rtl = s.use_pro && !pro_early ? 1 : 0;
      const std::size_t want_act = s.use_act && !act_early ? 1 : 0;
      const bool exact = s.rtl.size() == want_rtl && s.act.size() == want_act;
      wrong += !exact;
      m1_exact += exact && want_rtl == 1 && want_act == 1;
    }
  }
  c.expect(over == 0, "record counts <= M");
  c.expect(wrong == 0, "M=1 gives one record per applied function");
  c.expect(m1_exact > m1_cases / 2, "most M=1 cases apply both functions");
  c.note << "1000 cases, over=" << over << ", M=1 " << m1_exact << "/" << m1_cases << " with both records";
}

// 9. Reduction of a large trigger.
void reducer(Check& c) {
  CampaignConfig cfg;
  cfg.target = "fault:F2";
  cfg.min_lines = 680;
  cfg.max_lines = 720;
  cfg.rng_seed = 9;
  std::optional<CaseResult> hit;
  for (std::size_t id = 0; id < 40 && !hit; ++id) {
    auto r = run_case(id, cfg);
    if (r.outcome.verdict.kind == Verdict::Kind::Inconsistent) hit = std::move(r);
  }
  c.expect(hit.has_value(), "found an F2 trigger");
  if (!hit) return;
  const auto make = make_factory(Target::parse(cfg.target), hit->id, cfg);
  const auto want = hit->outcome.verdict.category;
  auto triggers = [&](const CaseSpec& s) {
    const auto v = evaluate_case(s, make, cfg).verdict;
    return v.kind == Verdict::Kind::Inconsistent && v.category == want;
  };

  const auto once = reduce_case(hit->spec, make, cfg);
  const double ratio = static_cast<double>(once.reduced_lines) / once.original_lines;
  c.expect(!once.budget_exceeded, "within budget");
  c.expect(ratio <= 0.10, "reduced to <= 10%");
  c.expect(triggers(once.spec), "reduced case still triggers");
  int minimal_violations = 0;
  const auto candidates = single_node_removals(once.spec);
  for (const auto& cand : candidates) minimal_violations += triggers(cand);
  c.expect(minimal_violations == 0, "1-minimal at node granularity");
  const auto twice = reduce_case(once.spec, make, cfg);
  c.expect(render(twice.spec.seed) == render(once.spec.seed) && twice.spec.base.script() == once.spec.base.script(),
           "idempotent");
  c.note << once.original_lines << " -> " << once.reduced_lines << " lines (" << static_cast<int>(ratio * 1000) / 10.0
         << "%), " << once.checks << " checks, " << candidates.size() << " single-node candidates";
}

// 10. Round trip of generated seeds and report determinism.
void determinism(Check& c) {
  Rng rng(10);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto text = generate_seed_text(rng);
    const auto u = parse(text);
    bad += render(u) != text || !structurally_equal(parse(render(u)), u);
  }
  c.expect(bad == 0, "1000 seeds round-trip");

  CampaignConfig cfg;
  cfg.cases = 60;
  cfg.rng_seed = 1010;
  cfg.target = "faults:rotate";
  cfg.workers = 1;
  const auto a = run_campaign(cfg).to_text();
  const auto b = run_campaign(cfg).to_text();
  c.expect(a == b, "byte-identical reports");
  c.note << bad << " round-trip failures, report " << a.size() << " bytes";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "scheduler oracle", 1.0, scheduler},
      {2, "soundness on the reference", 1800.0, soundness},
      {3, "fault sensitivity", 4500.0, sensitivity},
      {4, "transformation equivalence", 60.0, equivalence},
      {5, "loop-count expectation", 1.0, loop_count},
      {6, "fold invariant", 1.0, fold_invariant},
      {7, "normalization", 1.0, normalization},
      {8, "iteration accounting", 600.0, accounting},
      {9, "reducer", 600.0, reducer},
      {10, "round-trip and determinism", 600.0, determinism},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(s < cr.limit_s, "time limit");
    failed += !c.ok;
    std::printf("criterion %2d %-28s %s  %.2fs  %s\n", cr.id, cr.title, c.ok ? "PASS" : "FAIL", s, c.note.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
