#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdldiff/action/policy.hpp"
#include "hdldiff/debugger/debugger.hpp"
#include "hdldiff/debugger/faults.hpp"
#include "hdldiff/diff/diff.hpp"
#include "hdldiff/hdl/record.hpp"

namespace hdldiff {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Full, PTonly, ATonly, RandomOne };
const char* to_string(Mode m);
std::optional<Mode> parse_mode(const std::string& s);

/// Debugger under test: "reference", "fault:F2", "faults:rotate" or "adapter:<command>".
struct Target {
  enum class Kind { Reference, Fault, FaultRotation, Adapter };
  Kind kind = Kind::Reference;
  Fault fault = Fault::None;
  std::string command;

  static Target parse(const std::string& spec);  // throws ConfigError
  std::string to_string() const;
};

using DebuggerFactory = std::function<std::unique_ptr<Debugger>()>;

struct CampaignConfig {
  int cases = 2000;
  int max_iterations = 6;
  std::uint64_t rng_seed = 1;
  Mode mode = Mode::Full;
  std::string target = "reference";
  int workers = 1;
  int min_lines = 80;
  int max_lines = 120;
  int large_cases = 0;  // leading cases generated with 700-1000 lines
  std::vector<std::string> seeds;  // design files; generated seeds when empty
  double case_time_budget_s = 30.0;
  bool shared_budget = false;
  std::vector<double> rtl_weights;  // per RtlOp; uniform when empty
  std::vector<double> act_weights;  // per ActOp; uniform when empty
  SimConfig sim;
  PolicyConfig policy;
  std::string out_dir;  // report directory; nothing persisted when empty
};

/// key = value lines; '#' starts a comment. Unknown keys are errors.
CampaignConfig parse_config(const std::string& text);
CampaignConfig load_config(const std::string& path);
/// Path from the HDLDIFF_CONFIG environment variable, if set.
std::optional<std::string> default_config_path();

/// Factory for the debugger serving case `case_id`.
DebuggerFactory make_factory(const Target& target, std::size_t case_id, const CampaignConfig& cfg);

/// Everything needed to replay one differential case.
struct CaseSpec {
  SourceUnit seed;
  ActionPlan base;
  std::vector<TransformRecord> rtl;
  std::vector<TransformRecord> act;
  bool use_pro = true;
  bool use_act = true;
};

struct CaseOutcome {
  Verdict verdict;        // final classification
  std::string stage;      // which check produced it ("t", "t'", "t''", "t~t'", "t~t''", "expect")
  std::optional<Verdict> pro;  // t vs t'
  std::optional<Verdict> act;  // t vs t''
  std::optional<Verdict> expectations;
};

/// Runs t, t' and t'' and classifies: failures, then intrinsic pause placement,
/// then the pairwise comparisons, then the expectations of t''.
CaseOutcome evaluate_case(const CaseSpec& spec, const DebuggerFactory& make, const CampaignConfig& cfg);

struct CaseResult {
  std::size_t id = 0;
  std::string design;  // seed label
  int lines = 0;
  std::string target;
  CaseSpec spec;
  bool pro_stopped_early = false;
  bool act_stopped_early = false;
  CaseOutcome outcome;
  bool excluded = false;  // harness-side generation failure
  std::string note;
  double wall_s = 0;
};

/// Builds and evaluates case `id` of a campaign (deterministic in cfg.rng_seed and id).
CaseResult run_case(std::size_t id, const CampaignConfig& cfg);

/// Builds the spec of case `id` without running it.
CaseSpec build_case(std::size_t id, const CampaignConfig& cfg, const SourceUnit& seed, bool* pro_early = nullptr,
                    bool* act_early = nullptr);

struct CampaignReport {
  CampaignConfig config;
  std::vector<CaseResult> cases;
  int designs_run = 0;
  int inconsistent = 0;
  int failures = 0;
  int excluded = 0;
  std::map<std::string, int> categories;      // Inconsistent categories
  std::map<std::string, int> transform_hist;  // transformation kinds present in inconsistent cases
  std::map<std::string, int> per_target;      // inconsistent cases per target

  double discovery_rate() const { return designs_run ? static_cast<double>(inconsistent) / designs_run : 0.0; }
  /// Summary and per-case index; contains no timing.
  std::string to_text() const;
};

/// Runs cfg.cases cases on cfg.workers threads; writes the report when cfg.out_dir is set.
CampaignReport run_campaign(const CampaignConfig& cfg);

}  // namespace hdldiff
