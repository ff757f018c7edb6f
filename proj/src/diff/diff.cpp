#include "hdldiff/diff/diff.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hdldiff/diff/trace_format.hpp"

namespace hdldiff {

const char* to_string(Category c) {
  switch (c) {
    case Category::BreakpointPlacement: return "BreakpointPlacement";
    case Category::PauseLocation: return "PauseLocation";
    case Category::PauseCount: return "PauseCount";
    case Category::WaveValue: return "WaveValue";
    case Category::Termination: return "Termination";
  }
  return "?";
}

std::optional<Category> parse_category(const std::string& s) {
  for (Category c : {Category::BreakpointPlacement, Category::PauseLocation, Category::PauseCount,
                     Category::WaveValue, Category::Termination})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

Verdict Verdict::inconsistent(Category c, std::size_t index, std::optional<TraceEvent> left,
                              std::optional<TraceEvent> right, std::string detail) {
  Verdict v;
  v.kind = Kind::Inconsistent;
  v.category = c;
  v.index = index;
  v.left = std::move(left);
  v.right = std::move(right);
  v.detail = std::move(detail);
  return v;
}

Verdict Verdict::failed(FailureKind k, std::string detail) {
  Verdict v;
  v.kind = Kind::Failure;
  v.failure = k;
  v.detail = std::move(detail);
  return v;
}

std::string Verdict::label() const {
  switch (kind) {
    case Kind::Consistent: return "Consistent";
    case Kind::Inconsistent: return std::string("Inconsistent(") + to_string(category) + ")";
    case Kind::Failure: return std::string("Failure(") + to_string(failure) + ")";
  }
  return "?";
}

namespace {

std::set<std::string> ignored_signals(const ExpectationSet& expect) {
  std::set<std::string> out;
  for (const auto& e : expect)
    if (e.kind == Expectation::Kind::IgnoreSignals) out.insert(e.signals.begin(), e.signals.end());
  return out;
}

int to_original(int line, const LineMap* map) {
  if (!map) return line;
  const auto l = map->inverse(line);
  return l ? *l : -line;
}

std::uint64_t event_time(const TraceEvent& e) { return e.kind == TraceEvent::Kind::BreakpointSet ? 0 : e.time; }

}  // namespace

NormalizedTrace normalize(const RunResult& run, const ExpectationSet& expect, const SimConfig& cfg,
                          const NormalizeOptions& opt) {
  std::set<std::size_t> excluded_actions;
  std::set<int> excluded_lines;
  std::map<std::size_t, int> canonical;
  for (const auto& e : expect) {
    switch (e.kind) {
      case Expectation::Kind::ExcludeActionEvents:
        excluded_actions.insert(e.actions.begin(), e.actions.end());
        break;
      case Expectation::Kind::ExcludePausesAt:
        excluded_lines.insert(e.lines.begin(), e.lines.end());
        break;
      case Expectation::Kind::ExpectSlideEquivalence:
      case Expectation::Kind::ExpectFoldTransparency:
        if (e.action) canonical[*e.action] = e.canonical;
        break;
      default:
        break;
    }
  }
  const auto ignored = ignored_signals(expect);

  NormalizedTrace out;
  bool drop_next_wave = false;
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    TraceEvent ev = run.trace[i];
    const std::size_t action = i < run.event_action.size() ? run.event_action[i] : SIZE_MAX;
    if (excluded_actions.count(action)) continue;
    if (ev.kind == TraceEvent::Kind::WaveOutput && drop_next_wave) {
      drop_next_wave = false;
      continue;
    }
    drop_next_wave = false;
    NormEvent ne;
    switch (ev.kind) {
      case TraceEvent::Kind::BreakpointSet: {
        const auto c = canonical.find(action);
        ev.requested = c != canonical.end() ? c->second : to_original(ev.requested, opt.variant_map);
        if (ev.actual) ev.actual = to_original(*ev.actual, opt.variant_map);
        if (opt.deletions && opt.deletions->is_dead(ev.requested)) ne.deleted = true;
        break;
      }
      case TraceEvent::Kind::Paused:
        if (ev.reason == PauseReason::Breakpoint && excluded_lines.count(ev.line)) {
          drop_next_wave = true;
          continue;
        }
        ev.line = to_original(ev.line, opt.variant_map);
        if (opt.deletions && opt.deletions->is_dead(ev.line)) ne.deleted = true;
        break;
      case TraceEvent::Kind::WaveOutput:
        if (ev.time < cfg.reset_window) continue;
        std::erase_if(ev.values, [&](const auto& nv) { return ignored.count(nv.first) > 0; });
        break;
      case TraceEvent::Kind::Finished:
        break;
    }
    ne.event = std::move(ev);
    out.events.push_back(std::move(ne));
  }

  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < run.waveform.names.size(); ++c)
    if (!ignored.count(run.waveform.names[c])) {
      keep.push_back(c);
      out.waves.names.push_back(run.waveform.names[c]);
    }
  for (const auto& [t, row] : run.waveform.samples) {
    if (t < cfg.reset_window) continue;
    std::vector<LogicVec> r;
    r.reserve(keep.size());
    for (std::size_t c : keep) r.push_back(row[c]);
    out.waves.samples.emplace_back(t, std::move(r));
  }
  return out;
}

namespace {

Category classify(const std::optional<TraceEvent>& a, const std::optional<TraceEvent>& b) {
  if (!a || !b) return Category::Termination;
  using K = TraceEvent::Kind;
  if (a->kind == K::BreakpointSet || b->kind == K::BreakpointSet) return Category::BreakpointPlacement;
  if (a->kind != b->kind) return Category::Termination;
  switch (a->kind) {
    case K::Paused: return a->line != b->line ? Category::PauseLocation : Category::PauseCount;
    case K::WaveOutput: return a->time != b->time ? Category::PauseCount : Category::WaveValue;
    default: return Category::Termination;
  }
}

struct WaveDiff {
  std::uint64_t time;
  std::string detail;
};

std::optional<WaveDiff> first_wave_difference(const WaveformLog& a, const WaveformLog& b) {
  if (a.names != b.names) {
    const std::uint64_t t = std::min(a.samples.empty() ? UINT64_MAX : a.samples.front().first,
                                     b.samples.empty() ? UINT64_MAX : b.samples.front().first);
    return WaveDiff{t == UINT64_MAX ? 0 : t, "signal sets differ"};
  }
  std::size_t i = 0, j = 0;
  while (i < a.samples.size() && j < b.samples.size()) {
    const auto& [ta, ra] = a.samples[i];
    const auto& [tb, rb] = b.samples[j];
    if (ta < tb) {
      ++i;
    } else if (tb < ta) {
      ++j;
    } else {
      for (std::size_t c = 0; c < ra.size(); ++c)
        if (!(ra[c] == rb[c]))
          return WaveDiff{ta, a.names[c] + " " + ra[c].to_string() + " vs " + rb[c].to_string() + " at " +
                                  std::to_string(ta)};
      ++i;
      ++j;
    }
  }
  return std::nullopt;
}

std::vector<NormEvent> comparable(const std::vector<NormEvent>& xs) {
  std::vector<NormEvent> out;
  for (const auto& e : xs)
    if (!(e.deleted && e.event.kind == TraceEvent::Kind::BreakpointSet)) out.push_back(e);
  return out;
}

}  // namespace

Verdict compare(const NormalizedTrace& a, const NormalizedTrace& b) {
  for (const auto* side : {&a, &b})
    for (std::size_t i = 0; i < side->events.size(); ++i)
      if (side->events[i].deleted && side->events[i].event.kind == TraceEvent::Kind::Paused)
        return Verdict::inconsistent(Category::PauseLocation, i, side->events[i].event, std::nullopt,
                                     "pause inside removed unreachable code");

  const auto ea = comparable(a.events);
  const auto eb = comparable(b.events);
  std::optional<Verdict> event_diff;
  std::uint64_t event_diff_time = UINT64_MAX;
  const std::size_t n = std::max(ea.size(), eb.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<TraceEvent> x, y;
    if (i < ea.size()) x = ea[i].event;
    if (i < eb.size()) y = eb[i].event;
    if (x && y && *x == *y) continue;
    const Category c = classify(x, y);
    event_diff_time = std::min(x ? event_time(*x) : UINT64_MAX, y ? event_time(*y) : UINT64_MAX);
    event_diff = Verdict::inconsistent(c, i, x, y,
                                       (x ? format_event(*x) : std::string("<end>")) + " | " +
                                           (y ? format_event(*y) : std::string("<end>")));
    break;
  }
  const auto wave = first_wave_difference(a.waves, b.waves);
  if (wave && (!event_diff || wave->time <= event_diff_time))
    return Verdict::inconsistent(Category::WaveValue, 0, std::nullopt, std::nullopt, "waveform: " + wave->detail);
  if (event_diff) return *event_diff;
  return Verdict::consistent();
}

Verdict check_expectations(const RunResult& run, const ExpectationSet& expect) {
  for (const auto& e : expect)
    if (!e.resolved) throw UnresolvedExpectation("unresolved expectation: " + describe(e));
  const bool finished = !run.trace.empty() && run.trace.back().kind == TraceEvent::Kind::Finished;

  for (const auto& e : expect) {
    if (e.kind != Expectation::Kind::ExpectSlideEquivalence && e.kind != Expectation::Kind::ExpectFoldTransparency)
      continue;
    for (std::size_t i = 0; i < run.trace.size(); ++i) {
      const auto& ev = run.trace[i];
      if (ev.kind != TraceEvent::Kind::BreakpointSet || i >= run.event_action.size() ||
          run.event_action[i] != *e.action)
        continue;
      if (ev.actual != std::optional<int>(e.to))
        return Verdict::inconsistent(Category::BreakpointPlacement, i, ev, std::nullopt,
                                     describe(e) + " violated by " + format_event(ev));
    }
  }
  for (const auto& e : expect) {
    if (e.kind != Expectation::Kind::ExpectPauseCount) continue;
    std::map<std::uint64_t, int> per_time;
    std::map<std::uint64_t, std::size_t> where;
    for (std::size_t i = 0; i < run.trace.size(); ++i) {
      const auto& ev = run.trace[i];
      if (ev.kind == TraceEvent::Kind::Paused && ev.line == e.line) {
        ++per_time[ev.time];
        where.emplace(ev.time, i);
      }
    }
    if (!finished && !per_time.empty()) per_time.erase(std::prev(per_time.end()));
    for (const auto& [t, n] : per_time)
      if (n != e.count)
        return Verdict::inconsistent(Category::PauseCount, where[t], run.trace[where[t]], std::nullopt,
                                     describe(e) + " violated: " + std::to_string(n) + " pauses at time " +
                                         std::to_string(t));
  }
  for (const auto& e : expect) {
    if (e.kind != Expectation::Kind::ExpectNoPauseAt) continue;
    for (std::size_t i = 0; i < run.trace.size(); ++i) {
      const auto& ev = run.trace[i];
      if (ev.kind == TraceEvent::Kind::Paused && e.lines.count(ev.line) && (!e.time || *e.time == ev.time))
        return Verdict::inconsistent(Category::PauseLocation, i, ev, std::nullopt, describe(e) + " violated");
    }
  }
  return Verdict::consistent();
}

Verdict check_pause_placement(const Trace& trace) {
  std::set<int> lines;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& ev = trace[i];
    if (ev.kind == TraceEvent::Kind::BreakpointSet && ev.actual) lines.insert(*ev.actual);
    if (ev.kind == TraceEvent::Kind::Paused && ev.reason == PauseReason::Breakpoint && !lines.count(ev.line))
      return Verdict::inconsistent(Category::PauseLocation, i, ev, std::nullopt,
                                   "breakpoint pause at line " + std::to_string(ev.line) + " with no breakpoint");
  }
  return Verdict::consistent();
}

}  // namespace hdldiff
