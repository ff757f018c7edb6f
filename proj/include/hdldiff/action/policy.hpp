#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "hdldiff/action/expectation.hpp"
#include "hdldiff/debugger/debugger.hpp"
#include "hdldiff/hdl/ast.hpp"

namespace hdldiff {

using Rng = std::mt19937_64;

class NoExecutableLines : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlannedAction {
  DebugAction action;
  bool added = false;  // inserted by an action transformation
  int canonical = 0;   // request line of the untransformed AddBreakpoint
  bool folded = false;

  bool operator==(const PlannedAction&) const = default;
};

/// Expectation template that is completed from live events.
struct Probe {
  enum class Kind { Slide, Fold, Branch };
  Kind kind = Kind::Slide;
  std::size_t planned = 0;  // Slide, Fold: the AddBreakpoint it annotates
  int from = 0;             // Slide: requested line; Fold: view line; Branch: then line
  int to = 0;               // Slide, Fold: expected actual line; Branch: else line

  bool operator==(const Probe&) const = default;
};

/// Ordered planned actions plus the expectation templates attached to them.
struct ActionPlan {
  std::vector<PlannedAction> actions;
  std::vector<Probe> probes;
  ExpectationSet fixed;  // expectations known before the run

  /// Index of the first RunAll/Step (end of the breakpoint-insertion prefix).
  std::size_t prefix_end() const;
  std::vector<DebugAction> script() const;
  bool operator==(const ActionPlan&) const = default;
};

struct PolicyConfig {
  int cap = 256;            // planned actions
  double run_all_ratio = 0.7;
  int min_breakpoints = 1;
  int max_breakpoints = 4;
  int auto_continue_limit = 200000;
};

/// Breakpoints on random executable lines followed by interleaved RunAll/Step.
ActionPlan base_policy(const SourceUnit& unit, Rng& rng, const PolicyConfig& cfg = {});

/// Plan built from a bare action script (every action counts as base).
ActionPlan plan_from_script(const std::vector<DebugAction>& script);

/// Plays a plan interactively.
///
/// A pause at a line reached only through breakpoints added by a transformation is
/// followed by an automatic RunAll, so the base actions stay aligned with the
/// untransformed run. Expectations are resolved from the events as they arrive.
class PlannedPolicy : public ActionPolicy {
 public:
  explicit PlannedPolicy(ActionPlan plan, int auto_continue_limit = PolicyConfig{}.auto_continue_limit);

  std::optional<DebugAction> next(SessionState state, const Trace& trace) override;
  void observe(const DebugAction& action, const std::vector<TraceEvent>& events) override;

  /// Expectations for the run so far, in issued-action coordinates.
  ExpectationSet expectations() const;
  const std::set<int>& added_only_lines() const { return added_only_; }

 private:
  void refresh_added_only();

  ActionPlan plan_;
  int auto_limit_;
  std::size_t pos_ = 0;
  std::size_t issued_ = 0;
  int autos_ = 0;
  bool auto_pending_ = false;
  std::optional<std::size_t> last_planned_;
  std::map<std::size_t, std::size_t> issued_of_;  // planned index -> issued index
  std::multiset<int> base_actual_;
  std::multiset<int> added_actual_;
  std::set<int> added_only_;
  std::set<std::size_t> added_issued_;
  ExpectationSet live_;
};

}  // namespace hdldiff
