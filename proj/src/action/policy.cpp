#include "hdldiff/action/policy.hpp"

#include "hdldiff/hdl/analysis.hpp"

namespace hdldiff {

std::size_t ActionPlan::prefix_end() const {
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const auto k = actions[i].action.kind;
    if (k == DebugAction::Kind::RunAll || k == DebugAction::Kind::Step) return i;
  }
  return actions.size();
}

std::vector<DebugAction> ActionPlan::script() const {
  std::vector<DebugAction> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(a.action);
  return out;
}

ActionPlan base_policy(const SourceUnit& unit, Rng& rng, const PolicyConfig& cfg) {
  const auto lines = executable_lines(unit.main());
  if (lines.empty()) throw NoExecutableLines("design has no executable line");
  ActionPlan plan;
  std::uniform_int_distribution<int> count(cfg.min_breakpoints, cfg.max_breakpoints);
  std::uniform_int_distribution<std::size_t> pick(0, lines.size() - 1);
  const int k = std::min(count(rng), cfg.cap);
  for (int i = 0; i < k; ++i) {
    const int l = lines[pick(rng)];
    plan.actions.push_back({DebugAction::add_breakpoint(l), false, l, false});
  }
  std::bernoulli_distribution run_all(cfg.run_all_ratio);
  for (int i = k; i < cfg.cap; ++i) {
    const bool first = i == k;
    plan.actions.push_back({first || run_all(rng) ? DebugAction::run_all() : DebugAction::step(), false, 0, false});
  }
  return plan;
}

ActionPlan plan_from_script(const std::vector<DebugAction>& script) {
  ActionPlan plan;
  for (const auto& a : script)
    plan.actions.push_back({a, false, a.kind == DebugAction::Kind::AddBreakpoint ? a.line : 0, false});
  return plan;
}

PlannedPolicy::PlannedPolicy(ActionPlan plan, int auto_continue_limit)
    : plan_(std::move(plan)), auto_limit_(auto_continue_limit) {}

std::optional<DebugAction> PlannedPolicy::next(SessionState, const Trace&) {
  if (auto_pending_) {
    auto_pending_ = false;
    if (autos_++ >= auto_limit_) return std::nullopt;
    last_planned_.reset();
    ++issued_;
    return DebugAction::run_all();
  }
  if (pos_ >= plan_.actions.size()) return std::nullopt;
  const auto& pa = plan_.actions[pos_];
  issued_of_[pos_] = issued_;
  if (pa.added) added_issued_.insert(issued_);
  last_planned_ = pos_++;
  ++issued_;
  return pa.action;
}

void PlannedPolicy::refresh_added_only() {
  added_only_.clear();
  for (int l : added_actual_)
    if (!base_actual_.count(l)) added_only_.insert(l);
}

void PlannedPolicy::observe(const DebugAction& action, const std::vector<TraceEvent>& events) {
  if (action.kind == DebugAction::Kind::AddBreakpoint && last_planned_) {
    const auto& pa = plan_.actions[*last_planned_];
    for (const auto& e : events)
      if (e.kind == TraceEvent::Kind::BreakpointSet && e.actual) (pa.added ? added_actual_ : base_actual_).insert(*e.actual);
    refresh_added_only();
  }
  for (const auto& e : events) {
    if (e.kind != TraceEvent::Kind::Paused) continue;
    if (e.reason == PauseReason::Breakpoint && added_only_.count(e.line)) auto_pending_ = true;
    for (const auto& p : plan_.probes) {
      if (p.kind != Probe::Kind::Branch) continue;
      if (e.line == p.from) live_.push_back(Expectation::no_pause_at({p.to}, e.time));
      if (e.line == p.to) live_.push_back(Expectation::no_pause_at({p.from}, e.time));
    }
  }
}

ExpectationSet PlannedPolicy::expectations() const {
  ExpectationSet out = plan_.fixed;
  bool all_added_issued = true;
  for (std::size_t i = 0; i < plan_.actions.size(); ++i)
    if (plan_.actions[i].added && !issued_of_.count(i)) all_added_issued = false;
  if (!added_issued_.empty()) out.push_back(Expectation::exclude_action_events(added_issued_));
  auto exclude = Expectation::exclude_pauses_at(added_only_);
  exclude.resolved = all_added_issued;
  if (!added_only_.empty() || !all_added_issued) out.push_back(exclude);
  for (const auto& p : plan_.probes) {
    if (p.kind == Probe::Kind::Branch) continue;
    const auto it = issued_of_.find(p.planned);
    const std::size_t issued = it == issued_of_.end() ? 0 : it->second;
    const int canonical = plan_.actions[p.planned].canonical;
    auto e = p.kind == Probe::Kind::Slide ? Expectation::slide_equivalence(p.from, p.to, issued, canonical)
                                          : Expectation::fold_transparency(p.from, p.to, issued, canonical);
    e.resolved = it != issued_of_.end();
    out.push_back(e);
  }
  out.insert(out.end(), live_.begin(), live_.end());
  return out;
}

}  // namespace hdldiff
