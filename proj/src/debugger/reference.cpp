#include "hdldiff/debugger/reference.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "hdldiff/hdl/elaborate.hpp"

namespace hdldiff {

const char* to_string(SessionState s) {
  switch (s) {
    case SessionState::PausedNotStarted: return "PausedNotStarted";
    case SessionState::Running: return "Running";
    case SessionState::PausedAtBreakpoint: return "PausedAtBreakpoint";
    case SessionState::PausedAfterStep: return "PausedAfterStep";
    case SessionState::Finished: return "Finished";
  }
  return "?";
}

const char* fault_id(Fault f) {
  switch (f) {
    case Fault::None: return "none";
    case Fault::NoSliding: return "F1";
    case Fault::NonBlockingAsBlocking: return "F2";
    case Fault::PauseLineOffByOne: return "F3";
    case Fault::FoldCoordinates: return "F4";
    case Fault::LoopLastIteration: return "F5";
  }
  return "?";
}

std::optional<Fault> parse_fault(const std::string& id) {
  for (Fault f : {Fault::None, Fault::NoSliding, Fault::NonBlockingAsBlocking, Fault::PauseLineOffByOne,
                  Fault::FoldCoordinates, Fault::LoopLastIteration})
    if (id == fault_id(f)) return f;
  return std::nullopt;
}

std::vector<Fault> all_faults() {
  return {Fault::NoSliding, Fault::NonBlockingAsBlocking, Fault::PauseLineOffByOne, Fault::FoldCoordinates,
          Fault::LoopLastIteration};
}

LogicVec stimulus_value(const std::string& name, unsigned width, std::uint64_t cycle) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  h ^= cycle + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  // splitmix finaliser
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return LogicVec(width, h);
}

namespace {

constexpr std::uint64_t kWorkLimit = 20'000'000;

struct Frame {
  const CStmt* stmt;
  int pc;
};

bool has_blocking_to_variable(const CStmt& s, const Design& d) {
  if (s.kind == Stmt::Kind::BlockingAssign &&
      d.signals[static_cast<std::size_t>(s.target)].kind != NetKind::Integer)
    return true;
  return std::any_of(s.children.begin(), s.children.end(),
                     [&](const CStmt& c) { return has_blocking_to_variable(c, d); });
}

int first_atomic_line(const CStmt& s) {
  switch (s.kind) {
    case Stmt::Kind::BlockingAssign:
    case Stmt::Kind::NonBlockingAssign:
    case Stmt::Kind::If:
      return s.line;
    case Stmt::Kind::For:
      return first_atomic_line(s.children[2]);
    case Stmt::Kind::Block:
      for (const auto& c : s.children) {
        const int l = first_atomic_line(c);
        if (l > 0) return l;
      }
      return 0;
  }
  return 0;
}

}  // namespace

struct ReferenceDebugger::Impl {
  Fault fault;
  SourceUnit unit;
  SimConfig cfg;
  Design design;
  SessionState state = SessionState::PausedNotStarted;

  std::vector<LogicVec> values;
  std::vector<std::pair<int, LogicVec>> nba;
  std::vector<bool> nba_as_blocking;  // per process, F2

  // Event schedule: 0 = time zero, 2k+1 = rising edge k, 2k+2 = falling edge k.
  std::uint64_t next_event = 0;
  bool in_event = false;
  std::uint64_t now = 0;
  std::vector<std::size_t> procs;
  std::size_t proc_pos = 0;
  bool frames_loaded = false;
  std::vector<Frame> frames;
  bool positioned = false;

  std::set<int> breakpoints;
  std::vector<std::pair<int, int>> folds;
  WaveformLog log;

  std::uint64_t work = 0;
  std::chrono::steady_clock::time_point action_start;

  explicit Impl(Fault f) : fault(f) {}

  // ---- simulation -------------------------------------------------------

  std::uint64_t event_time(std::uint64_t idx) const {
    if (idx == 0) return 0;
    const std::uint64_t k = (idx - 1) / 2;
    const std::uint64_t p = cfg.clock_period;
    return (idx % 2 == 1) ? k * p + p / 2 : (k + 1) * p;
  }

  void settle() {
    for (const auto& a : design.assigns) {
      const unsigned w = design.signals[static_cast<std::size_t>(a.target)].width;
      values[static_cast<std::size_t>(a.target)] = eval(a.value, std::max(w, a.value.width), values).resized(w);
    }
  }

  void apply_stimulus(std::uint64_t cycle) {
    for (int s : design.stimulus) {
      const auto& sig = design.signals[static_cast<std::size_t>(s)];
      values[static_cast<std::size_t>(s)] = stimulus_value(sig.name, sig.width, cycle);
    }
  }

  void start_event() {
    const std::uint64_t idx = next_event++;
    now = event_time(idx);
    procs.clear();
    if (idx == 0) {
      if (design.clock) values[static_cast<std::size_t>(*design.clock)] = LogicVec(1, 0);
      apply_stimulus(0);
      settle();
      for (std::size_t i = 0; i < design.processes.size(); ++i)
        if (design.processes[i].kind == Process::Kind::Initial) procs.push_back(i);
    } else if (idx % 2 == 1) {
      if (design.clock) values[static_cast<std::size_t>(*design.clock)] = LogicVec(1, 1);
      settle();
      for (std::size_t i = 0; i < design.processes.size(); ++i)
        if (design.processes[i].kind == Process::Kind::Always) procs.push_back(i);
    } else {
      if (design.clock) values[static_cast<std::size_t>(*design.clock)] = LogicVec(1, 0);
      apply_stimulus(idx / 2);
      settle();
    }
    proc_pos = 0;
    frames.clear();
    frames_loaded = false;
    in_event = true;
  }

  void end_event() {
    for (auto& [slot, v] : nba) values[static_cast<std::size_t>(slot)] = v;
    nba.clear();
    settle();
    sample();
    in_event = false;
  }

  void sample() {
    std::vector<LogicVec> row;
    row.reserve(design.waves.size());
    for (int s : design.waves) row.push_back(values[static_cast<std::size_t>(s)]);
    log.samples.emplace_back(now, std::move(row));
  }

  void charge() {
    if (++work > kWorkLimit) throw SimTimeout("work budget exhausted");
    if ((work & 0xFFF) == 0) {
      const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - action_start;
      if (spent.count() > cfg.action_timeout_s) throw SimTimeout("action exceeded wall-clock budget");
    }
  }

  void do_assign(const CStmt& s, bool force_blocking) {
    charge();
    const LogicVec v = eval(s.value, std::max(s.target_width, s.value.width), values).resized(s.target_width);
    if (s.kind == Stmt::Kind::BlockingAssign || force_blocking) {
      values[static_cast<std::size_t>(s.target)] = v;
    } else {
      nba.emplace_back(s.target, v);
    }
  }

  bool truth(const CExpr& e) const { return eval(e, e.width, values).truth() == Bit::One; }

  // Moves through structure until the top frame is an unexecuted assignment or if.
  bool find_next_atomic() {
    while (!frames.empty()) {
      Frame& f = frames.back();
      const CStmt& s = *f.stmt;
      switch (s.kind) {
        case Stmt::Kind::BlockingAssign:
        case Stmt::Kind::NonBlockingAssign:
        case Stmt::Kind::If:
          return true;
        case Stmt::Kind::Block:
          if (static_cast<std::size_t>(f.pc) < s.children.size()) {
            const CStmt* child = &s.children[static_cast<std::size_t>(f.pc++)];
            frames.push_back({child, 0});
          } else {
            frames.pop_back();
          }
          break;
        case Stmt::Kind::For:
          if (f.pc == 0) {
            do_assign(s.children[0], true);
            f.pc = 1;
          } else if (f.pc == 1) {
            charge();
            if (truth(s.cond)) {
              f.pc = 2;
              frames.push_back({&s.children[2], 0});
            } else {
              frames.pop_back();
            }
          } else {
            do_assign(s.children[1], true);
            f.pc = 1;
          }
          break;
      }
    }
    return false;
  }

  bool advance() {
    while (true) {
      if (in_event) {
        while (proc_pos < procs.size()) {
          if (!frames_loaded) {
            frames.push_back({&design.processes[procs[proc_pos]].body, 0});
            frames_loaded = true;
          }
          if (find_next_atomic()) return true;
          ++proc_pos;
          frames.clear();
          frames_loaded = false;
        }
        end_event();
      }
      if (event_time(next_event) >= cfg.total_time) return false;
      start_event();
    }
  }

  void execute_current() {
    const Frame f = frames.back();
    frames.pop_back();
    const CStmt& s = *f.stmt;
    if (s.kind == Stmt::Kind::If) {
      charge();
      if (truth(s.cond)) {
        frames.push_back({&s.children[0], 0});
      } else if (s.has_else) {
        frames.push_back({&s.children[1], 0});
      }
      return;
    }
    do_assign(s, fault == Fault::NonBlockingAsBlocking && nba_as_blocking[procs[proc_pos]]);
  }

  // F5: true when the pending statement opens the final iteration of its loop.
  bool final_iteration_skip(int line) {
    if (fault != Fault::LoopLastIteration) return false;
    for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
      const CStmt& s = *it->stmt;
      if (s.kind != Stmt::Kind::For || it->pc != 2) continue;
      if (first_atomic_line(s.children[2]) != line) return false;
      std::vector<LogicVec> saved = values;
      do_assign(s.children[1], true);
      const bool continues = truth(s.cond);
      values = std::move(saved);
      return !continues;
    }
    return false;
  }

  // ---- debugger surface -------------------------------------------------

  int reported_line(int line) const {
    if (fault == Fault::PauseLineOffByOne && line > 1) {
      const LineClass prev = unit.main().line_class(line - 1);
      if (prev == LineClass::Blank || prev == LineClass::Comment) return line + 1;
    }
    return line;
  }

  SignalValues snapshot() const {
    SignalValues out;
    for (std::size_t i = 0; i < design.waves.size(); ++i) {
      const auto& sig = design.signals[static_cast<std::size_t>(design.waves[i])];
      if (log.samples.empty()) {
        out.emplace_back(sig.name, LogicVec::all_x(sig.width));
      } else {
        out.emplace_back(sig.name, log.samples.back().second[i]);
      }
    }
    return out;
  }

  void pause(PauseReason reason, std::vector<TraceEvent>& out) {
    positioned = true;
    state = reason == PauseReason::Breakpoint ? SessionState::PausedAtBreakpoint : SessionState::PausedAfterStep;
    out.push_back(TraceEvent::paused(reported_line(frames.back().stmt->line), reason, now));
    out.push_back(TraceEvent::wave_output(now, snapshot()));
  }

  void finish(std::vector<TraceEvent>& out) {
    positioned = false;
    state = SessionState::Finished;
    now = cfg.total_time;
    out.push_back(TraceEvent::finished(cfg.total_time));
  }

  int view_to_source(int line) const {
    std::vector<std::pair<int, int>> sorted = folds;
    std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first < y.first : x.second > y.second;
    });
    int covered_until = 0;
    int src = line;
    for (const auto& [s, e] : sorted) {
      if (s <= covered_until && covered_until != 0) continue;  // nested inside an outer fold
      if (src > s) src += e - s;
      covered_until = std::max(covered_until, e);
    }
    return src;
  }

  std::optional<int> slide(int line) const {
    const auto& f = unit.main();
    if (f.line_class(line) == LineClass::Executable) return line;
    if (fault == Fault::NoSliding) return std::nullopt;
    for (const auto& m : f.modules) {
      if (line < m.loc.line || line > m.end_line) continue;
      for (int l = line + 1; l <= m.end_line; ++l)
        if (f.line_class(l) == LineClass::Executable) return l;
      return std::nullopt;
    }
    return std::nullopt;
  }

  std::vector<TraceEvent> apply(const DebugAction& a) {
    if (!is_paused(state)) throw ActionRejected(std::string("action not accepted in state ") + to_string(state));
    action_start = std::chrono::steady_clock::now();
    work = 0;
    std::vector<TraceEvent> out;
    switch (a.kind) {
      case DebugAction::Kind::AddBreakpoint: {
        if (a.line < 1) throw ActionRejected("breakpoint line must be positive");
        const int src = fault == Fault::FoldCoordinates ? a.line : view_to_source(a.line);
        const auto actual = slide(src);
        if (actual) breakpoints.insert(*actual);
        out.push_back(TraceEvent::breakpoint_set(src, actual));
        break;
      }
      case DebugAction::Kind::Fold:
        if (a.line < 1 || a.end_line <= a.line) throw ActionRejected("bad fold region");
        for (const auto& [s, e] : folds)
          if ((a.line < s && a.end_line >= s && a.end_line < e) || (s < a.line && e >= a.line && e < a.end_line))
            throw ActionRejected("fold regions overlap partially");
        folds.emplace_back(a.line, a.end_line);
        break;
      case DebugAction::Kind::Unfold: {
        const auto it = std::find_if(folds.begin(), folds.end(), [&](const auto& f) { return f.first == a.line; });
        if (it != folds.end()) folds.erase(it);
        break;
      }
      case DebugAction::Kind::RunAll: {
        state = SessionState::Running;
        if (positioned) execute_current();
        positioned = false;
        while (true) {
          if (!advance()) {
            finish(out);
            break;
          }
          const int line = frames.back().stmt->line;
          if (breakpoints.count(line) && !final_iteration_skip(line)) {
            pause(PauseReason::Breakpoint, out);
            break;
          }
          execute_current();
        }
        break;
      }
      case DebugAction::Kind::Step: {
        state = SessionState::Running;
        if (positioned) execute_current();
        positioned = false;
        if (!advance()) {
          finish(out);
        } else {
          pause(PauseReason::StepDone, out);
        }
        break;
      }
    }
    return out;
  }
};

ReferenceDebugger::ReferenceDebugger(Fault fault) : fault_(fault) {}
ReferenceDebugger::~ReferenceDebugger() = default;
ReferenceDebugger::ReferenceDebugger(ReferenceDebugger&&) noexcept = default;
ReferenceDebugger& ReferenceDebugger::operator=(ReferenceDebugger&&) noexcept = default;

void ReferenceDebugger::start(const SourceUnit& unit, const SimConfig& cfg) {
  if (cfg.clock_period < 2 || cfg.total_time <= cfg.reset_window)
    throw std::invalid_argument("invalid simulation configuration");
  auto impl = std::make_unique<Impl>(fault_);
  impl->unit = unit;
  impl->cfg = cfg;
  impl->design = elaborate(unit);
  impl->values.reserve(impl->design.signals.size());
  for (const auto& s : impl->design.signals) impl->values.push_back(LogicVec::all_x(s.width));
  for (const auto& p : impl->design.processes) impl->nba_as_blocking.push_back(has_blocking_to_variable(p.body, impl->design));
  for (int s : impl->design.waves) impl->log.names.push_back(impl->design.signals[static_cast<std::size_t>(s)].name);
  impl_ = std::move(impl);
}

std::vector<TraceEvent> ReferenceDebugger::apply(const DebugAction& action) {
  if (!impl_) throw ActionRejected("no design loaded");
  return impl_->apply(action);
}

SessionState ReferenceDebugger::state() const { return impl_ ? impl_->state : SessionState::PausedNotStarted; }

WaveformLog ReferenceDebugger::waveform() { return impl_ ? impl_->log : WaveformLog{}; }

std::string ReferenceDebugger::identity() const {
  return fault_ == Fault::None ? "reference" : std::string("fault:") + fault_id(fault_);
}

LogicVec ReferenceDebugger::value(const std::string& name) const {
  const int s = impl_->design.slot(name);
  if (s < 0) throw std::out_of_range("no signal '" + name + "'");
  return impl_->values[static_cast<std::size_t>(s)];
}

std::uint64_t ReferenceDebugger::time() const { return impl_ ? impl_->now : 0; }

}  // namespace hdldiff
