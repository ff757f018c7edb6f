#include "hdldiff/debugger/debugger.hpp"

#include "hdldiff/hdl/elaborate.hpp"

namespace hdldiff {

TraceEvent TraceEvent::breakpoint_set(int requested, std::optional<int> actual) {
  TraceEvent e;
  e.kind = Kind::BreakpointSet;
  e.requested = requested;
  e.actual = actual;
  return e;
}

TraceEvent TraceEvent::paused(int line, PauseReason reason, std::uint64_t time) {
  TraceEvent e;
  e.kind = Kind::Paused;
  e.line = line;
  e.reason = reason;
  e.time = time;
  return e;
}

TraceEvent TraceEvent::wave_output(std::uint64_t time, SignalValues values) {
  TraceEvent e;
  e.kind = Kind::WaveOutput;
  e.time = time;
  e.values = std::move(values);
  return e;
}

TraceEvent TraceEvent::finished(std::uint64_t time) {
  TraceEvent e;
  e.kind = Kind::Finished;
  e.time = time;
  return e;
}

const char* to_string(FailureKind k) {
  switch (k) {
    case FailureKind::Crash: return "Crash";
    case FailureKind::Timeout: return "Timeout";
    case FailureKind::Elaboration: return "Elaboration";
  }
  return "?";
}

std::optional<DebugAction> ScriptPolicy::next(SessionState, const Trace&) {
  if (pos_ >= actions_.size()) return std::nullopt;
  return actions_[pos_++];
}

RunResult run_to_completion(Debugger& dbg, const SourceUnit& unit, const SimConfig& cfg, ActionPolicy& policy) {
  RunResult r;
  try {
    dbg.start(unit, cfg);
    while (dbg.state() != SessionState::Finished) {
      const auto action = policy.next(dbg.state(), r.trace);
      if (!action) break;
      r.actions.push_back(*action);
      auto events = dbg.apply(*action);
      policy.observe(*action, events);
      r.trace.insert(r.trace.end(), events.begin(), events.end());
      r.event_action.insert(r.event_action.end(), events.size(), r.actions.size() - 1);
    }
    r.waveform = dbg.waveform();
  } catch (const ElaborationError& e) {
    r.failure = FailureKind::Elaboration;
    r.diagnostic = e.what();
  } catch (const SimTimeout& e) {
    r.failure = FailureKind::Timeout;
    r.diagnostic = e.what();
  } catch (const DebuggerCrash& e) {
    r.failure = FailureKind::Crash;
    r.diagnostic = e.what();
  } catch (const ActionRejected& e) {
    r.failure = FailureKind::Crash;
    r.diagnostic = std::string("action rejected: ") + e.what();
  }
  return r;
}

}  // namespace hdldiff
