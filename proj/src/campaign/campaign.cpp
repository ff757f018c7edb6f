#include "hdldiff/campaign/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "hdldiff/action/transforms.hpp"
#include "hdldiff/adapter/client.hpp"
#include "hdldiff/campaign/bundle.hpp"
#include "hdldiff/campaign/seed_gen.hpp"
#include "hdldiff/debugger/reference.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/parser.hpp"
#include "hdldiff/rtl/transforms.hpp"

namespace hdldiff {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Full: return "Full";
    case Mode::PTonly: return "PTonly";
    case Mode::ATonly: return "ATonly";
    case Mode::RandomOne: return "RandomOne";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& s) {
  for (Mode m : {Mode::Full, Mode::PTonly, Mode::ATonly, Mode::RandomOne})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

Target Target::parse(const std::string& spec) {
  Target t;
  if (spec == "reference") return t;
  if (spec == "faults:rotate") {
    t.kind = Kind::FaultRotation;
    return t;
  }
  if (spec.rfind("fault:", 0) == 0) {
    const auto f = parse_fault(spec.substr(6));
    if (!f || *f == Fault::None) throw ConfigError("unknown fault '" + spec.substr(6) + "'");
    t.kind = Kind::Fault;
    t.fault = *f;
    return t;
  }
  if (spec.rfind("adapter:", 0) == 0 && spec.size() > 8) {
    t.kind = Kind::Adapter;
    t.command = spec.substr(8);
    return t;
  }
  throw ConfigError("unknown target '" + spec + "'");
}

std::string Target::to_string() const {
  switch (kind) {
    case Kind::Reference: return "reference";
    case Kind::Fault: return std::string("fault:") + fault_id(fault);
    case Kind::FaultRotation: return "faults:rotate";
    case Kind::Adapter: return "adapter:" + command;
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!trim(part).empty()) out.push_back(trim(part));
  return out;
}

template <class T>
T number(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    T x{};
    if constexpr (std::is_same_v<T, double>)
      x = std::stod(v, &used);
    else if constexpr (std::is_same_v<T, std::uint64_t>)
      x = std::stoull(v, &used);
    else
      x = static_cast<T>(std::stoll(v, &used));
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad value for " + key + ": '" + v + "'");
  }
}

bool boolean(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad value for " + key + ": '" + v + "'");
}

std::vector<double> weights(const std::string& key, const std::string& v, std::size_t n) {
  std::vector<double> out;
  for (const auto& p : split_list(v)) out.push_back(number<double>(key, p));
  if (out.size() != n) throw ConfigError(key + " needs " + std::to_string(n) + " weights");
  return out;
}

Rng case_rng(std::uint64_t seed, std::size_t id, unsigned stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32), stream};
  return Rng(seq);
}

}  // namespace

CampaignConfig parse_config(const std::string& text) {
  CampaignConfig c;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(n) + ": expected key = value");
    const std::string k = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (k == "cases") c.cases = number<int>(k, v);
    else if (k == "max_iterations" || k == "M") c.max_iterations = number<int>(k, v);
    else if (k == "rng_seed") c.rng_seed = number<std::uint64_t>(k, v);
    else if (k == "mode") {
      const auto m = parse_mode(v);
      if (!m) throw ConfigError("unknown mode '" + v + "'");
      c.mode = *m;
    } else if (k == "target") {
      Target::parse(v);
      c.target = v;
    } else if (k == "workers") c.workers = number<int>(k, v);
    else if (k == "min_lines") c.min_lines = number<int>(k, v);
    else if (k == "max_lines") c.max_lines = number<int>(k, v);
    else if (k == "large_cases") c.large_cases = number<int>(k, v);
    else if (k == "seeds") c.seeds = split_list(v);
    else if (k == "case_time_budget_s") c.case_time_budget_s = number<double>(k, v);
    else if (k == "shared_budget") c.shared_budget = boolean(k, v);
    else if (k == "rtl_weights") c.rtl_weights = weights(k, v, kRtlOps.size());
    else if (k == "act_weights") c.act_weights = weights(k, v, kActOps.size());
    else if (k == "clock_period") c.sim.clock_period = number<std::uint64_t>(k, v);
    else if (k == "total_time") c.sim.total_time = number<std::uint64_t>(k, v);
    else if (k == "reset_window") c.sim.reset_window = number<std::uint64_t>(k, v);
    else if (k == "action_cap") c.policy.cap = number<int>(k, v);
    else if (k == "run_all_ratio") c.policy.run_all_ratio = number<double>(k, v);
    else if (k == "min_breakpoints") c.policy.min_breakpoints = number<int>(k, v);
    else if (k == "max_breakpoints") c.policy.max_breakpoints = number<int>(k, v);
    else if (k == "out_dir") c.out_dir = v;
    else throw ConfigError("unknown key '" + k + "'");
  }
  if (c.cases < 1) throw ConfigError("cases must be at least 1");
  if (c.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (c.workers < 1) throw ConfigError("workers must be at least 1");
  if (c.min_lines < 20 || c.max_lines < c.min_lines) throw ConfigError("line budget must satisfy 20 <= min <= max");
  if (c.sim.clock_period < 2 || c.sim.clock_period % 2) throw ConfigError("clock_period must be even");
  return c;
}

CampaignConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::optional<std::string> default_config_path() {
  if (const char* p = std::getenv("HDLDIFF_CONFIG"); p && *p) return std::string(p);
  return std::nullopt;
}

DebuggerFactory make_factory(const Target& target, std::size_t case_id, const CampaignConfig& cfg) {
  switch (target.kind) {
    case Target::Kind::Reference:
      return [] { return std::make_unique<ReferenceDebugger>(); };
    case Target::Kind::Fault: {
      const Fault f = target.fault;
      return [f] { return std::make_unique<ReferenceDebugger>(f); };
    }
    case Target::Kind::FaultRotation: {
      const auto faults = all_faults();
      const Fault f = faults[case_id % faults.size()];
      return [f] { return std::make_unique<ReferenceDebugger>(f); };
    }
    case Target::Kind::Adapter: {
      const std::string cmd = target.command;
      const double timeout = cfg.case_time_budget_s;
      return [cmd, timeout] { return std::make_unique<AdapterDebugger>(cmd, timeout); };
    }
  }
  throw ConfigError("unsupported target");
}

namespace {

struct PlannedRun {
  RunResult run;
  ExpectationSet expect;
};

PlannedRun play(const SourceUnit& unit, const ActionPlan& plan, const DebuggerFactory& make,
                const CampaignConfig& cfg) {
  PlannedRun out;
  SimConfig sim = cfg.sim;
  sim.action_timeout_s = cfg.case_time_budget_s;
  PlannedPolicy policy(plan, cfg.policy.auto_continue_limit);
  try {
    auto dbg = make();
    out.run = run_to_completion(*dbg, unit, sim, policy);
  } catch (const DebuggerCrash& e) {
    out.run.failure = FailureKind::Crash;
    out.run.diagnostic = e.what();
  } catch (const SimTimeout& e) {
    out.run.failure = FailureKind::Timeout;
    out.run.diagnostic = e.what();
  }
  out.expect = policy.expectations();
  return out;
}

ExpectationSet resolved_only(const ExpectationSet& xs) {
  ExpectationSet out;
  for (const auto& e : xs)
    if (e.resolved) out.push_back(e);
  return out;
}

}  // namespace

CaseOutcome evaluate_case(const CaseSpec& spec, const DebuggerFactory& make, const CampaignConfig& cfg) {
  CaseOutcome out;
  const auto finish = [&](Verdict v, const char* stage) {
    out.verdict = std::move(v);
    out.stage = stage;
    return out;
  };

  std::optional<ProResult> pro;
  if (spec.use_pro) pro = replay_rtl_records(spec.seed, spec.rtl);
  std::optional<ActionPlan> act_plan;
  if (spec.use_act) {
    ActionPlan p = spec.base;
    for (const auto& rec : spec.act) p = apply_act_record(p, spec.seed, rec);
    act_plan = std::move(p);
  }

  const PlannedRun t = play(spec.seed, spec.base, make, cfg);
  if (t.run.failure) return finish(Verdict::failed(*t.run.failure, t.run.diagnostic), "t");
  std::optional<PlannedRun> t1, t2;
  if (pro) {
    t1 = play(pro->variant, remap_plan(spec.base, pro->line_map), make, cfg);
    if (t1->run.failure) return finish(Verdict::failed(*t1->run.failure, t1->run.diagnostic), "t'");
  }
  if (act_plan) {
    t2 = play(spec.seed, *act_plan, make, cfg);
    if (t2->run.failure) return finish(Verdict::failed(*t2->run.failure, t2->run.diagnostic), "t''");
  }

  if (auto v = check_pause_placement(t.run.trace); !v.is_consistent()) return finish(v, "t");
  if (t1)
    if (auto v = check_pause_placement(t1->run.trace); !v.is_consistent()) return finish(v, "t'");
  if (t2)
    if (auto v = check_pause_placement(t2->run.trace); !v.is_consistent()) return finish(v, "t''");

  if (t1) {
    NormalizeOptions base_opt;
    base_opt.deletions = &pro->line_map;
    NormalizeOptions var_opt;
    var_opt.variant_map = &pro->line_map;
    out.pro = compare(normalize(t.run, {}, cfg.sim, base_opt), normalize(t1->run, pro->expectations, cfg.sim, var_opt));
  }
  ExpectationSet expect;
  if (t2) {
    expect = resolved_only(t2->expect);
    out.act = compare(normalize(t.run, {}, cfg.sim), normalize(t2->run, expect, cfg.sim));
    out.expectations = check_expectations(t2->run, expect);
  }
  if (out.pro && !out.pro->is_consistent()) return finish(*out.pro, "t~t'");
  if (out.act && !out.act->is_consistent()) return finish(*out.act, "t~t''");
  if (out.expectations && !out.expectations->is_consistent()) return finish(*out.expectations, "expect");
  return finish(Verdict::consistent(), "");
}

CaseSpec build_case(std::size_t id, const CampaignConfig& cfg, const SourceUnit& seed, bool* pro_early,
                    bool* act_early) {
  Rng rng = case_rng(cfg.rng_seed, id, 1);
  CaseSpec spec;
  spec.seed = seed;
  spec.base = base_policy(seed, rng, cfg.policy);
  switch (cfg.mode) {
    case Mode::Full: break;
    case Mode::PTonly: spec.use_act = false; break;
    case Mode::ATonly: spec.use_pro = false; break;
    case Mode::RandomOne:
      spec.use_pro = std::bernoulli_distribution(0.5)(rng);
      spec.use_act = !spec.use_pro;
      break;
  }
  const int m = cfg.max_iterations;
  if (spec.use_pro) {
    const auto rounds = cfg.shared_budget ? std::uniform_int_distribution<int>(1, m)(rng) : m;
    auto pro = pro_pipeline(seed, rounds, rng, cfg.rtl_weights);
    spec.rtl = std::move(pro.records);
    if (pro_early) *pro_early = pro.stopped_early;
  }
  if (spec.use_act) {
    const int rounds = cfg.shared_budget && spec.use_pro ? m - static_cast<int>(spec.rtl.size()) : m;
    if (rounds <= 0) {
      spec.use_act = false;
    } else {
      auto act = act_pipeline(spec.base, seed, rounds, rng, cfg.act_weights);
      spec.act = std::move(act.records);
      if (act_early) *act_early = act.stopped_early;
      if (spec.act.empty()) spec.use_act = false;
    }
  }
  return spec;
}

CaseResult run_case(std::size_t id, const CampaignConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  CaseResult res;
  res.id = id;
  const Target target = Target::parse(cfg.target);
  if (target.kind == Target::Kind::FaultRotation) {
    const auto faults = all_faults();
    res.target = std::string("fault:") + fault_id(faults[id % faults.size()]);
  } else {
    res.target = target.to_string();
  }
  try {
    SourceUnit seed;
    if (!cfg.seeds.empty()) {
      res.design = cfg.seeds[id % cfg.seeds.size()];
      seed = parse_file(res.design);
    } else {
      Rng gen = case_rng(cfg.rng_seed, id, 0);
      SeedOptions opt;
      opt.min_lines = cfg.min_lines;
      opt.max_lines = cfg.max_lines;
      if (static_cast<int>(id) < cfg.large_cases) {
        opt.min_lines = 700;
        opt.max_lines = 1000;
      }
      seed = generate_seed(gen, opt);
      res.design = "gen:" + std::to_string(cfg.rng_seed) + ":" + std::to_string(id);
    }
    res.lines = seed.main().line_count();
    res.spec = build_case(id, cfg, seed, &res.pro_stopped_early, &res.act_stopped_early);
    res.outcome = evaluate_case(res.spec, make_factory(target, id, cfg), cfg);
  } catch (const ElaborationError& e) {
    res.outcome.verdict = Verdict::failed(FailureKind::Elaboration, e.what());
    res.outcome.stage = "t";
  } catch (const std::exception& e) {
    res.excluded = true;
    res.note = e.what();
  }
  res.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::string CampaignReport::to_text() const {
  std::ostringstream os;
  os << "hdldiff campaign report\n";
  os << "mode " << to_string(config.mode) << "\n";
  os << "target " << config.target << "\n";
  os << "cases " << config.cases << "\n";
  os << "max_iterations " << config.max_iterations << "\n";
  os << "rng_seed " << config.rng_seed << "\n";
  os << "designs_run " << designs_run << "\n";
  os << "excluded " << excluded << "\n";
  os << "inconsistent " << inconsistent << "\n";
  os << "failures " << failures << "\n";
  os << "discovery_rate " << std::fixed << std::setprecision(4) << discovery_rate() * 100 << "%\n";
  for (const auto& [k, v] : categories) os << "category " << k << " " << v << "\n";
  for (const auto& [k, v] : per_target) os << "target_hits " << k << " " << v << "\n";
  for (const auto& [k, v] : transform_hist) os << "transform " << k << " " << v << "\n";
  for (const auto& c : cases) {
    os << "case " << c.id << " design=" << c.design << " lines=" << c.lines << " target=" << c.target;
    if (c.excluded) {
      os << " excluded\n";
      continue;
    }
    os << " rtl=" << c.spec.rtl.size() << " act=" << c.spec.act.size() << " verdict=" << c.outcome.verdict.label();
    if (!c.outcome.stage.empty()) os << " stage=" << c.outcome.stage;
    os << "\n";
  }
  return os.str();
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
  Target::parse(cfg.target);
  CampaignReport rep;
  rep.config = cfg;
  rep.cases.resize(static_cast<std::size_t>(cfg.cases));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < rep.cases.size(); i = next++) rep.cases[i] = run_case(i, cfg);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < cfg.workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& c : rep.cases) {
    if (c.excluded) {
      ++rep.excluded;
      continue;
    }
    ++rep.designs_run;
    if (c.outcome.verdict.kind == Verdict::Kind::Failure) ++rep.failures;
    if (c.outcome.verdict.kind != Verdict::Kind::Inconsistent) continue;
    ++rep.inconsistent;
    ++rep.categories[to_string(c.outcome.verdict.category)];
    ++rep.per_target[c.target];
    std::set<std::string> ops;
    if (c.outcome.stage != "t~t''" && c.outcome.stage != "expect" && c.outcome.stage != "t''")
      for (const auto& r : c.spec.rtl) ops.insert(r.op);
    if (c.outcome.stage != "t~t'" && c.outcome.stage != "t'")
      for (const auto& r : c.spec.act) ops.insert(r.op);
    for (const auto& op : ops) ++rep.transform_hist[op];
  }

  if (!cfg.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    std::ofstream(fs::path(cfg.out_dir) / "report.txt") << rep.to_text();
    std::ofstream timing(fs::path(cfg.out_dir) / "timing.txt");
    for (const auto& c : rep.cases) timing << "case " << c.id << " " << std::fixed << std::setprecision(3) << c.wall_s << "\n";
    for (const auto& c : rep.cases) {
      if (c.excluded || c.outcome.verdict.is_consistent()) continue;
      Bundle b;
      b.spec = c.spec;
      b.target = c.target;
      b.sim = cfg.sim;
      b.outcome = c.outcome;
      write_bundle((fs::path(cfg.out_dir) / "cases" / ("case_" + std::to_string(c.id))).string(), b);
    }
  }
  return rep;
}

}  // namespace hdldiff
