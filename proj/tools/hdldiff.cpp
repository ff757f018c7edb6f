// hdldiff: differential testing of HDL debuggers from the command line.
//
// Exit status: 0 no inconsistency, 1 inconsistency found, 2 usage or configuration
// error, 3 the debugger under test failed.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hdldiff/action/policy.hpp"
#include "hdldiff/campaign/bundle.hpp"
#include "hdldiff/campaign/campaign.hpp"
#include "hdldiff/campaign/seed_gen.hpp"
#include "hdldiff/diff/trace_format.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/parser.hpp"
#include "hdldiff/hdl/render.hpp"
#include "hdldiff/reduce/reducer.hpp"
#include "hdldiff/rtl/transforms.hpp"

namespace fs = std::filesystem;
using namespace hdldiff;

namespace {

constexpr int kOk = 0;
constexpr int kInconsistent = 1;
constexpr int kUsage = 2;
constexpr int kTargetFailure = 3;

int exit_for(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::Consistent: return kOk;
    case Verdict::Kind::Inconsistent: return kInconsistent;
    case Verdict::Kind::Failure: return kTargetFailure;
  }
  return kUsage;
}

CampaignConfig base_config(const std::string& path) {
  if (!path.empty()) return load_config(path);
  if (const auto env = default_config_path()) return load_config(*env);
  return CampaignConfig{};
}

std::vector<DebugAction> read_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read script " + path);
  std::vector<DebugAction> out;
  std::string line;
  while (std::getline(in, line))
    if (!split_words(line).empty()) out.push_back(parse_action(line));
  return out;
}

struct CampaignArgs {
  std::string config;
  std::optional<std::string> target;
  std::optional<int> cases;
  std::optional<int> iterations;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> rng_seed;
  std::optional<int> workers;
  std::optional<int> large_cases;
  std::optional<std::string> out;
  std::vector<std::string> seeds;
};

int cmd_campaign(const CampaignArgs& a) {
  CampaignConfig cfg = base_config(a.config);
  if (a.target) cfg.target = *a.target;
  if (a.cases) cfg.cases = *a.cases;
  if (a.iterations) cfg.max_iterations = *a.iterations;
  if (a.mode) {
    const auto m = parse_mode(*a.mode);
    if (!m) throw ConfigError("unknown mode '" + *a.mode + "'");
    cfg.mode = *m;
  }
  if (a.rng_seed) cfg.rng_seed = *a.rng_seed;
  if (a.workers) cfg.workers = *a.workers;
  if (a.large_cases) cfg.large_cases = *a.large_cases;
  if (a.out) cfg.out_dir = *a.out;
  if (!a.seeds.empty()) cfg.seeds = a.seeds;
  if (cfg.cases < 1 || cfg.max_iterations < 1 || cfg.workers < 1) throw ConfigError("cases, M and workers must be >= 1");
  Target::parse(cfg.target);

  const auto report = run_campaign(cfg);
  const std::string text = report.to_text();
  std::cout << text.substr(0, text.find("\ncase ") + 1);
  if (!cfg.out_dir.empty()) std::cout << "report written to " << cfg.out_dir << "\n";
  if (report.inconsistent > 0) return kInconsistent;
  if (report.failures > 0) return kTargetFailure;
  return kOk;
}

int cmd_simulate(const std::string& design, const std::string& script, const std::string& target, bool waves,
                 const std::string& config) {
  const CampaignConfig cfg = base_config(config);
  const SourceUnit unit = parse_file(design);
  const auto actions = script.empty() ? std::vector<DebugAction>{DebugAction::run_all()} : read_script(script);
  auto dbg = make_factory(Target::parse(target), 0, cfg)();
  ScriptPolicy policy(actions);
  SimConfig sim = cfg.sim;
  sim.action_timeout_s = cfg.case_time_budget_s;
  const auto run = run_to_completion(*dbg, unit, sim, policy);
  std::cout << format_trace(run.trace);
  if (waves) std::cout << format_waveform(run.waveform);
  if (run.failure) {
    std::cerr << "failure(" << to_string(*run.failure) << "): " << run.diagnostic << "\n";
    return kTargetFailure;
  }
  return kOk;
}

std::pair<int, int> parse_site(const std::string& site) {
  const auto colon = site.find(':');
  try {
    if (colon == std::string::npos) return {std::stoi(site), 0};
    return {std::stoi(site.substr(0, colon)), std::stoi(site.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ConfigError("bad site '" + site + "', expected LINE or LINE:ORDINAL");
  }
}

int cmd_transform(const std::string& design, const std::string& op_name, const std::string& site,
                  std::uint64_t seed, const std::string& out) {
  const auto op = parse_rtl_op(op_name);
  if (!op) throw ConfigError("unknown transformation '" + op_name + "'");
  const SourceUnit unit = parse_file(design);
  Rng rng(seed);
  TransformResult r;
  if (site.empty()) {
    r = apply_rtl_op(*op, unit, rng);
  } else if (*op == RtlOp::IncludeInject) {
    throw ConfigError("include-inject picks its own insertion points; omit --site");
  } else {
    const auto [line, ordinal] = parse_site(site);
    if (*op == RtlOp::IncludeRemove) {
      TransformRecord rec{op_name, {}};
      rec.set("line", line);
      r = apply_rtl_record(unit, rec);
    } else {
      TransformSite s{*op, {0, line, 0}, ordinal, ""};
      switch (*op) {
        case RtlOp::AssignConv: r = convert_assignment(unit, s); break;
        case RtlOp::LiteralExpr: r = literal_to_expression(unit, s, rng); break;
        case RtlOp::BitMutate: r = bit_double_negate(unit, s); break;
        default: r = remove_unreachable_loop(unit, s); break;
      }
    }
  }
  if (!out.empty()) {
    write_unit(r.variant, out);
    std::cout << "variant written to " << out << "\n";
  } else {
    for (std::size_t i = 0; i < r.variant.files.size(); ++i) {
      if (r.variant.files.size() > 1) std::cout << "// file " << r.variant.files[i].path << "\n";
      std::cout << render_file(r.variant, static_cast<int>(i));
    }
  }
  std::cout << "record " << r.record.to_string() << "\n";
  std::cout << "line_map " << r.line_map.to_string() << "\n";
  for (const auto& e : r.expectations) std::cout << "expect " << describe(e) << "\n";
  return kOk;
}

CampaignConfig bundle_config(const Bundle& b, const std::string& config) {
  CampaignConfig cfg = base_config(config);
  cfg.sim = b.sim;
  return cfg;
}

int cmd_replay(const std::string& dir, const std::optional<std::string>& target, const std::string& config) {
  const Bundle b = load_bundle(dir);
  const CampaignConfig cfg = bundle_config(b, config);
  const Target t = Target::parse(target.value_or(b.target));
  const auto outcome = evaluate_case(b.spec, make_factory(t, 0, cfg), cfg);
  std::cout << "recorded " << b.outcome.verdict.label() << "\n";
  std::cout << "replayed " << outcome.verdict.label() << (outcome.stage.empty() ? "" : " stage=" + outcome.stage) << "\n";
  if (!outcome.verdict.detail.empty()) std::cout << "detail " << outcome.verdict.detail << "\n";
  std::cout << (outcome.verdict.label() == b.outcome.verdict.label() ? "reproduced" : "differs") << "\n";
  return exit_for(outcome.verdict);
}

int cmd_reduce(const std::string& dir, const std::string& out, const std::optional<std::string>& target,
               const std::string& config, int max_checks) {
  const Bundle b = load_bundle(dir);
  const CampaignConfig cfg = bundle_config(b, config);
  const std::string tname = target.value_or(b.target);
  ReduceOptions opt;
  opt.max_checks = max_checks;
  opt.time_budget_s = 600;
  const auto res = reduce_case(b.spec, make_factory(Target::parse(tname), 0, cfg), cfg, opt);
  Bundle reduced;
  reduced.spec = res.spec;
  reduced.target = tname;
  reduced.sim = b.sim;
  reduced.outcome = res.outcome;
  const std::string dest = out.empty() ? (fs::path(dir) / "reduced").string() : out;
  write_bundle(dest, reduced);
  std::cout << "lines " << res.original_lines << " -> " << res.reduced_lines << "\n";
  std::cout << "checks " << res.checks << (res.budget_exceeded ? " (budget exceeded)" : "") << "\n";
  std::cout << "verdict " << res.outcome.verdict.label() << "\n";
  std::cout << "written to " << dest << "\n";
  return kInconsistent;
}

int cmd_gen_seed(int count, std::uint64_t seed, int min_lines, int max_lines, const std::string& out) {
  Rng rng(seed);
  SeedOptions opt;
  opt.min_lines = min_lines;
  opt.max_lines = max_lines;
  if (min_lines < 20 || max_lines < min_lines) throw ConfigError("line budget must satisfy 20 <= min <= max");
  for (int i = 0; i < count; ++i) {
    const SourceUnit unit = generate_seed(rng, opt);
    if (out.empty()) {
      std::cout << render(unit);
    } else {
      fs::create_directories(out);
      const auto path = fs::path(out) / ("seed_" + std::to_string(i) + ".v");
      std::ofstream(path) << render(unit);
      std::cout << path.string() << "\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential testing of HDL debuggers"};
  app.require_subcommand(1);

  CampaignArgs ca;
  auto* campaign = app.add_subcommand("campaign", "run a differential testing campaign");
  campaign->add_option("--config", ca.config, "key = value configuration file");
  campaign->add_option("--target", ca.target, "reference | fault:F1..F5 | faults:rotate | adapter:<command>");
  campaign->add_option("--cases", ca.cases, "number of cases");
  campaign->add_option("-M,--max-iterations", ca.iterations, "transformation rounds per function");
  campaign->add_option("--mode", ca.mode, "Full | PTonly | ATonly | RandomOne");
  campaign->add_option("--rng-seed", ca.rng_seed, "campaign seed");
  campaign->add_option("--workers", ca.workers, "worker threads");
  campaign->add_option("--large-cases", ca.large_cases, "leading cases generated with 700-1000 lines");
  campaign->add_option("--out", ca.out, "report directory");
  campaign->add_option("--seeds", ca.seeds, "seed design files");

  std::string design, script, target = "reference", sim_config;
  bool waves = false;
  auto* simulate = app.add_subcommand("simulate", "run one design with an action script and print the trace");
  simulate->add_option("design", design, "design file")->required();
  simulate->add_option("--script", script, "action script, one action per line");
  simulate->add_option("--target", target, "debugger under test");
  simulate->add_option("--config", sim_config, "configuration file");
  simulate->add_flag("--waves", waves, "also print the waveform log");

  std::string xf_design, op, site, xf_out;
  std::uint64_t xf_seed = 1;
  auto* transform = app.add_subcommand("transform", "apply one RTL transformation");
  transform->add_option("design", xf_design, "design file")->required();
  transform->add_option("--op", op, "assign-conv | literal-expr | bit-mutate | dead-loop | include-inject | include-remove")
      ->required();
  transform->add_option("--site", site, "LINE or LINE:ORDINAL; random eligible site when omitted");
  transform->add_option("--rng-seed", xf_seed, "seed for random choices");
  transform->add_option("--out", xf_out, "write the variant files here");

  std::string bundle, red_out, bundle_cfg;
  std::optional<std::string> bundle_target;
  int max_checks = 20000;
  auto* reduce = app.add_subcommand("reduce", "shrink a case bundle");
  reduce->add_option("bundle", bundle, "case bundle directory")->required();
  reduce->add_option("--out", red_out, "reduced bundle directory (default <bundle>/reduced)");
  reduce->add_option("--target", bundle_target, "override the recorded target");
  reduce->add_option("--config", bundle_cfg, "configuration file");
  reduce->add_option("--max-checks", max_checks, "predicate evaluation budget");

  auto* replay = app.add_subcommand("replay", "re-execute a case bundle");
  replay->add_option("bundle", bundle, "case bundle directory")->required();
  replay->add_option("--target", bundle_target, "override the recorded target");
  replay->add_option("--config", bundle_cfg, "configuration file");

  int count = 1, min_lines = 80, max_lines = 120;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-seed", "generate random seed designs");
  gen->add_option("--count", count, "number of designs");
  gen->add_option("--rng-seed", gen_seed, "generator seed");
  gen->add_option("--min-lines", min_lines, "minimum line count");
  gen->add_option("--max-lines", max_lines, "maximum line count");
  gen->add_option("--out", gen_out, "directory; stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*campaign) return cmd_campaign(ca);
    if (*simulate) return cmd_simulate(design, script, target, waves, sim_config);
    if (*transform) return cmd_transform(xf_design, op, site, xf_seed, xf_out);
    if (*reduce) return cmd_reduce(bundle, red_out, bundle_target, bundle_cfg, max_checks);
    if (*replay) return cmd_replay(bundle, bundle_target, bundle_cfg);
    if (*gen) return cmd_gen_seed(count, gen_seed, min_lines, max_lines, gen_out);
  } catch (const IneligibleSite& e) {
    std::cerr << "IneligibleSite: " << e.what() << "\n";
    return kUsage;
  } catch (const NonReproducible& e) {
    std::cerr << "NonReproducible: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const ElaborationError& e) {
    std::cerr << "elaboration error: " << e.what() << "\n";
    return kTargetFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
