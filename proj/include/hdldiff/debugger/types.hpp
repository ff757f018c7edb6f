#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hdldiff/hdl/logic.hpp"

namespace hdldiff {

struct DebugAction {
  enum class Kind { AddBreakpoint, RunAll, Step, Fold, Unfold };

  Kind kind = Kind::RunAll;
  int line = 0;      // AddBreakpoint line, Fold/Unfold region start
  int end_line = 0;  // Fold region end

  static DebugAction add_breakpoint(int line) { return {Kind::AddBreakpoint, line, 0}; }
  static DebugAction run_all() { return {Kind::RunAll, 0, 0}; }
  static DebugAction step() { return {Kind::Step, 0, 0}; }
  static DebugAction fold(int start, int end) { return {Kind::Fold, start, end}; }
  static DebugAction unfold(int start) { return {Kind::Unfold, start, 0}; }

  bool operator==(const DebugAction&) const = default;
};

enum class SessionState { PausedNotStarted, Running, PausedAtBreakpoint, PausedAfterStep, Finished };

const char* to_string(SessionState s);
inline bool is_paused(SessionState s) {
  return s == SessionState::PausedNotStarted || s == SessionState::PausedAtBreakpoint ||
         s == SessionState::PausedAfterStep;
}

enum class PauseReason { Breakpoint, StepDone };

using SignalValues = std::vector<std::pair<std::string, LogicVec>>;

struct TraceEvent {
  enum class Kind { BreakpointSet, Paused, WaveOutput, Finished };

  Kind kind = Kind::Finished;
  int requested = 0;          // BreakpointSet
  std::optional<int> actual;  // BreakpointSet
  int line = 0;               // Paused
  PauseReason reason = PauseReason::Breakpoint;
  std::uint64_t time = 0;     // Paused, WaveOutput, Finished
  SignalValues values;        // WaveOutput

  static TraceEvent breakpoint_set(int requested, std::optional<int> actual);
  static TraceEvent paused(int line, PauseReason reason, std::uint64_t time);
  static TraceEvent wave_output(std::uint64_t time, SignalValues values);
  static TraceEvent finished(std::uint64_t time);

  bool operator==(const TraceEvent&) const = default;
};

using Trace = std::vector<TraceEvent>;

/// Values of the top-level signals after every simulation step.
struct WaveformLog {
  std::vector<std::string> names;
  std::vector<std::pair<std::uint64_t, std::vector<LogicVec>>> samples;

  bool operator==(const WaveformLog&) const = default;
};

struct SimConfig {
  std::uint64_t clock_period = 10;
  std::uint64_t total_time = 400;
  std::uint64_t reset_window = 100;
  double action_timeout_s = 30.0;  // wall-clock budget of one action
};

/// The debugger refused an action in its current state.
class ActionRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single action exceeded its wall-clock or work budget.
class SimTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The debugger process died or spoke outside the protocol.
class DebuggerCrash : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hdldiff
