#include "hdldiff/action/transforms.hpp"

#include <algorithm>

#include "hdldiff/hdl/analysis.hpp"

namespace hdldiff {

const char* act_op_name(ActOp op) {
  switch (op) {
    case ActOp::AddBreakpoint: return "add-breakpoint";
    case ActOp::BreakpointSlide: return "breakpoint-slide";
    case ActOp::IfElseProbe: return "if-else-probe";
    case ActOp::StepForLoop: return "step-for-loop";
    case ActOp::CodeFold: return "code-fold";
  }
  return "?";
}

std::optional<ActOp> parse_act_op(const std::string& name) {
  for (ActOp op : kActOps)
    if (name == act_op_name(op)) return op;
  return std::nullopt;
}

namespace {

struct BranchSite {
  int then_line;
  int else_line;
};

struct LoopSite {
  int body_line;
  int count;
};

struct Region {
  int start;
  int end;
};

template <class T>
const T& pick(const std::vector<T>& xs, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
  return xs[d(rng)];
}

// Prefix positions where a new AddBreakpoint can go without entering a fold bracket.
std::vector<std::size_t> insertion_points(const ActionPlan& plan) {
  std::vector<std::size_t> out;
  const std::size_t end = plan.prefix_end();
  int open = 0;
  for (std::size_t i = 0; i <= end; ++i) {
    if (open == 0) out.push_back(i);
    if (i == end) break;
    const auto k = plan.actions[i].action.kind;
    if (k == DebugAction::Kind::Fold) ++open;
    if (k == DebugAction::Kind::Unfold) --open;
  }
  return out;
}

void insert_action(ActionPlan& plan, std::size_t at, PlannedAction a) {
  plan.actions.insert(plan.actions.begin() + static_cast<std::ptrdiff_t>(at), a);
  for (auto& p : plan.probes)
    if (p.planned >= at && p.kind != Probe::Kind::Branch) ++p.planned;
}

PlannedAction added_breakpoint(int line) { return {DebugAction::add_breakpoint(line), true, line, false}; }

bool valid_insertion(const ActionPlan& plan, std::size_t at) {
  const auto pts = insertion_points(plan);
  return std::find(pts.begin(), pts.end(), at) != pts.end();
}

std::vector<BranchSite> branch_sites(const SourceUnit& unit) {
  std::vector<BranchSite> out;
  const auto atoms = atomic_statements_per_line(unit);
  const auto single = [&](int l) {
    const auto it = atoms.find(l);
    return it != atoms.end() && it->second == 1;
  };
  for (const auto& m : unit.main().modules) {
    if (instance_count(unit, m.name) != 1) continue;
    walk_statements(m, [&](const Stmt& s, const Stmt*, bool in_loop) {
      if (s.kind != Stmt::Kind::If || !s.else_branch || in_loop) return;
      const int t = entry_line(*s.then_branch);
      const int e = entry_line(*s.else_branch);
      if (t > 0 && e > 0 && t != e && single(t) && single(e)) out.push_back({t, e});
    });
  }
  return out;
}

std::vector<LoopSite> loop_sites(const SourceUnit& unit) {
  std::vector<LoopSite> out;
  const auto atoms = atomic_statements_per_line(unit);
  for (const auto& m : unit.main().modules) {
    if (instance_count(unit, m.name) != 1) continue;
    walk_statements(m, [&](const Stmt& s, const Stmt*, bool in_loop) {
      if (s.kind != Stmt::Kind::For || in_loop) return;
      const int body = entry_line(*s.then_branch);
      if (body <= 0) return;
      const auto it = atoms.find(body);
      if (it == atoms.end() || it->second != 1) return;
      if (const auto n = trip_count(unit, m, s)) out.push_back({body, *n});
    });
  }
  return out;
}

std::vector<Region> fold_regions(const SourceUnit& unit) {
  std::vector<Region> out;
  for (const auto& m : unit.main().modules) {
    if (m.end_line - m.loc.line >= 2) out.push_back({m.loc.line, m.end_line});
    for (const auto& item : m.items)
      if (const auto* p = std::get_if<Process>(&item))
        for_each_stmt(p->body, [&](const Stmt& s) {
          if (s.kind == Stmt::Kind::Block && s.end_line - s.loc.line >= 2) out.push_back({s.loc.line, s.end_line});
        });
  }
  return out;
}

bool is_plain_base_breakpoint(const PlannedAction& a) {
  return a.action.kind == DebugAction::Kind::AddBreakpoint && !a.added && !a.folded;
}

// Comment/blank lines p < l in l's module with no executable line in between.
std::vector<int> slide_sources(const SourceUnit& unit, int l) {
  std::vector<int> out;
  const auto& f = unit.main();
  if (f.line_class(l) != LineClass::Executable) return out;
  const Module* m = module_at(unit, l);
  if (!m) return out;
  for (int p = l - 1; p > m->loc.line; --p) {
    const auto c = f.line_class(p);
    if (c == LineClass::Executable) break;
    if (c == LineClass::Comment || c == LineClass::Blank) out.push_back(p);
  }
  return out;
}

ActionPlan do_add_breakpoint(const ActionPlan& plan, int line, std::size_t at) {
  if (line < 1 || !valid_insertion(plan, at)) throw NoActionSite("add-breakpoint: invalid position");
  ActionPlan out = plan;
  insert_action(out, at, added_breakpoint(line));
  return out;
}

ActionPlan do_slide(const ActionPlan& plan, const SourceUnit& unit, std::size_t action, int from, int to) {
  if (action >= plan.prefix_end() || !is_plain_base_breakpoint(plan.actions[action]) ||
      plan.actions[action].action.line != to || plan.actions[action].canonical != to)
    throw NoActionSite("breakpoint-slide: action is not an unslid base breakpoint");
  const auto srcs = slide_sources(unit, to);
  if (std::find(srcs.begin(), srcs.end(), from) == srcs.end())
    throw NoActionSite("breakpoint-slide: no comment or blank line slides to the breakpoint");
  ActionPlan out = plan;
  out.actions[action].action.line = from;
  out.probes.push_back({Probe::Kind::Slide, action, from, to});
  return out;
}

ActionPlan do_branch(const ActionPlan& plan, const SourceUnit& unit, int then_line, int else_line, std::size_t at_then,
                     std::size_t at_else) {
  const auto sites = branch_sites(unit);
  if (std::none_of(sites.begin(), sites.end(),
                   [&](const BranchSite& s) { return s.then_line == then_line && s.else_line == else_line; }))
    throw NoActionSite("if-else-probe: no if/else with these branch lines");
  if (!valid_insertion(plan, at_then)) throw NoActionSite("if-else-probe: invalid position");
  ActionPlan out = plan;
  insert_action(out, at_then, added_breakpoint(then_line));
  if (!valid_insertion(out, at_else)) throw NoActionSite("if-else-probe: invalid position");
  insert_action(out, at_else, added_breakpoint(else_line));
  out.probes.push_back({Probe::Kind::Branch, 0, then_line, else_line});
  return out;
}

ActionPlan do_loop(const ActionPlan& plan, const SourceUnit& unit, int body_line, int count, std::size_t at) {
  const auto sites = loop_sites(unit);
  if (std::none_of(sites.begin(), sites.end(),
                   [&](const LoopSite& s) { return s.body_line == body_line && s.count == count; }))
    throw NoActionSite("step-for-loop: no constant-trip loop with this body line");
  if (!valid_insertion(plan, at)) throw NoActionSite("step-for-loop: invalid position");
  ActionPlan out = plan;
  insert_action(out, at, added_breakpoint(body_line));
  out.fixed.push_back(Expectation::pause_count(body_line, count));
  return out;
}

ActionPlan do_fold(const ActionPlan& plan, const SourceUnit& unit, std::size_t action, int start, int end) {
  if (action >= plan.prefix_end() || !is_plain_base_breakpoint(plan.actions[action]))
    throw NoActionSite("code-fold: action is not an unfolded base breakpoint");
  const int request = plan.actions[action].action.line;
  const auto regions = fold_regions(unit);
  if (end >= request || std::none_of(regions.begin(), regions.end(),
                                     [&](const Region& r) { return r.start == start && r.end == end; }))
    throw NoActionSite("code-fold: no foldable region above the breakpoint");
  ActionPlan out = plan;
  auto& target = out.actions[action];
  target.action.line = request - (end - start);
  target.folded = true;
  out.probes.push_back({Probe::Kind::Fold, action, target.action.line, target.canonical});
  insert_action(out, action + 1, {DebugAction::unfold(start), true, 0, false});
  insert_action(out, action, {DebugAction::fold(start, end), true, 0, false});
  return out;
}

}  // namespace

ActResult xf_add_breakpoint(const ActionPlan& plan, const SourceUnit& unit, Rng& rng) {
  const int n = unit.main().line_count();
  if (n < 1) throw NoActionSite("add-breakpoint: empty file");
  std::uniform_int_distribution<int> line(1, n);
  const int l = line(rng);
  const std::size_t at = pick(insertion_points(plan), rng);
  TransformRecord r{act_op_name(ActOp::AddBreakpoint), {}};
  r.set("line", l).set("at", static_cast<long long>(at));
  return {do_add_breakpoint(plan, l, at), r};
}

ActResult xf_breakpoint_slide(const ActionPlan& plan, const SourceUnit& unit, Rng& rng) {
  std::vector<std::pair<std::size_t, int>> sites;
  for (std::size_t i = 0; i < plan.prefix_end(); ++i) {
    const auto& a = plan.actions[i];
    if (!is_plain_base_breakpoint(a) || a.action.line != a.canonical) continue;
    for (int p : slide_sources(unit, a.action.line)) sites.emplace_back(i, p);
  }
  if (sites.empty()) throw NoActionSite("breakpoint-slide: no comment or blank line precedes a breakpoint");
  const auto [action, from] = pick(sites, rng);
  const int to = plan.actions[action].action.line;
  TransformRecord r{act_op_name(ActOp::BreakpointSlide), {}};
  r.set("action", static_cast<long long>(action)).set("from", from).set("to", to);
  return {do_slide(plan, unit, action, from, to), r};
}

ActResult xf_if_else_probe(const ActionPlan& plan, const SourceUnit& unit, Rng& rng) {
  const auto sites = branch_sites(unit);
  if (sites.empty()) throw NoActionSite("if-else-probe: no if with an else branch");
  const auto s = pick(sites, rng);
  const std::size_t at_then = pick(insertion_points(plan), rng);
  ActionPlan tmp = plan;
  insert_action(tmp, at_then, added_breakpoint(s.then_line));
  const std::size_t at_else = pick(insertion_points(tmp), rng);
  TransformRecord r{act_op_name(ActOp::IfElseProbe), {}};
  r.set("then", s.then_line).set("else", s.else_line);
  r.set("at_then", static_cast<long long>(at_then)).set("at_else", static_cast<long long>(at_else));
  return {do_branch(plan, unit, s.then_line, s.else_line, at_then, at_else), r};
}

ActResult xf_step_for_loop(const ActionPlan& plan, const SourceUnit& unit, Rng& rng) {
  const auto sites = loop_sites(unit);
  if (sites.empty()) throw NoActionSite("step-for-loop: no loop with a constant trip count");
  const auto s = pick(sites, rng);
  const std::size_t at = pick(insertion_points(plan), rng);
  TransformRecord r{act_op_name(ActOp::StepForLoop), {}};
  r.set("line", s.body_line).set("count", s.count).set("at", static_cast<long long>(at));
  return {do_loop(plan, unit, s.body_line, s.count, at), r};
}

ActResult xf_code_fold(const ActionPlan& plan, const SourceUnit& unit, Rng& rng) {
  const auto regions = fold_regions(unit);
  std::vector<std::pair<std::size_t, Region>> sites;
  for (std::size_t i = 0; i < plan.prefix_end(); ++i) {
    if (!is_plain_base_breakpoint(plan.actions[i])) continue;
    for (const auto& rg : regions)
      if (rg.end < plan.actions[i].action.line) sites.emplace_back(i, rg);
  }
  if (sites.empty()) throw NoActionSite("code-fold: no foldable region above a breakpoint");
  const auto [action, rg] = pick(sites, rng);
  TransformRecord r{act_op_name(ActOp::CodeFold), {}};
  r.set("action", static_cast<long long>(action)).set("start", rg.start).set("end", rg.end);
  return {do_fold(plan, unit, action, rg.start, rg.end), r};
}

ActResult apply_act_op(ActOp op, const ActionPlan& plan, const SourceUnit& unit, Rng& rng) {
  switch (op) {
    case ActOp::AddBreakpoint: return xf_add_breakpoint(plan, unit, rng);
    case ActOp::BreakpointSlide: return xf_breakpoint_slide(plan, unit, rng);
    case ActOp::IfElseProbe: return xf_if_else_probe(plan, unit, rng);
    case ActOp::StepForLoop: return xf_step_for_loop(plan, unit, rng);
    case ActOp::CodeFold: return xf_code_fold(plan, unit, rng);
  }
  throw NoActionSite("unknown action transformation");
}

ActionPlan apply_act_record(const ActionPlan& plan, const SourceUnit& unit, const TransformRecord& r) {
  const auto op = parse_act_op(r.op);
  if (!op) throw NoActionSite("unknown action transformation '" + r.op + "'");
  const auto idx = [&](const char* key) {
    const long long v = r.get_int(key);
    if (v < 0) throw NoActionSite(r.op + ": negative " + key);
    return static_cast<std::size_t>(v);
  };
  const auto num = [&](const char* key) { return static_cast<int>(r.get_int(key)); };
  try {
    switch (*op) {
      case ActOp::AddBreakpoint: return do_add_breakpoint(plan, num("line"), idx("at"));
      case ActOp::BreakpointSlide: return do_slide(plan, unit, idx("action"), num("from"), num("to"));
      case ActOp::IfElseProbe:
        return do_branch(plan, unit, num("then"), num("else"), idx("at_then"), idx("at_else"));
      case ActOp::StepForLoop: return do_loop(plan, unit, num("line"), num("count"), idx("at"));
      case ActOp::CodeFold: return do_fold(plan, unit, idx("action"), num("start"), num("end"));
    }
  } catch (const std::invalid_argument& e) {
    throw NoActionSite(e.what());
  }
  throw NoActionSite("unknown action transformation");
}

ActPipelineResult act_pipeline(const ActionPlan& plan, const SourceUnit& unit, int rounds, Rng& rng,
                               const std::vector<double>& weights) {
  ActPipelineResult out{plan, {}, false};
  for (int round = 0; round < rounds; ++round) {
    std::vector<double> w(kActOps.size(), 1.0);
    for (std::size_t i = 0; i < w.size() && i < weights.size(); ++i) w[i] = weights[i];
    bool applied = false;
    while (std::any_of(w.begin(), w.end(), [](double x) { return x > 0; })) {
      std::discrete_distribution<std::size_t> choose(w.begin(), w.end());
      const std::size_t k = choose(rng);
      try {
        auto res = apply_act_op(kActOps[k], out.plan, unit, rng);
        out.plan = std::move(res.plan);
        out.records.push_back(std::move(res.record));
        applied = true;
        break;
      } catch (const NoActionSite&) {
        w[k] = 0;
      }
    }
    if (!applied) {
      out.stopped_early = true;
      break;
    }
  }
  return out;
}

}  // namespace hdldiff
