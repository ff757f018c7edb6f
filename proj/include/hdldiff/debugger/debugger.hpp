#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hdldiff/debugger/types.hpp"
#include "hdldiff/hdl/ast.hpp"

namespace hdldiff {

/// Session contract shared by the in-process reference and external adapters.
class Debugger {
 public:
  virtual ~Debugger() = default;

  /// Loads the design and enters PausedNotStarted. Throws ElaborationError on bad designs.
  virtual void start(const SourceUnit& unit, const SimConfig& cfg) = 0;
  virtual std::vector<TraceEvent> apply(const DebugAction& action) = 0;
  virtual SessionState state() const = 0;
  virtual WaveformLog waveform() = 0;
  virtual std::string identity() const = 0;
};

/// Decides the next action from the session state and the trace so far.
class ActionPolicy {
 public:
  virtual ~ActionPolicy() = default;
  virtual std::optional<DebugAction> next(SessionState state, const Trace& trace) = 0;
  /// Called with the events produced by the action just returned by next().
  virtual void observe(const DebugAction& action, const std::vector<TraceEvent>& events) {
    (void)action;
    (void)events;
  }
};

enum class FailureKind { Crash, Timeout, Elaboration };
const char* to_string(FailureKind k);

struct RunResult {
  Trace trace;
  WaveformLog waveform;
  std::vector<DebugAction> actions;  // actions actually issued
  std::vector<std::size_t> event_action;  // per trace event, index into `actions`
  std::optional<FailureKind> failure;
  std::string diagnostic;
};

/// Starts a session and drives it with the policy until the policy is done or the session finishes.
RunResult run_to_completion(Debugger& dbg, const SourceUnit& unit, const SimConfig& cfg, ActionPolicy& policy);

/// Plays a fixed action list.
class ScriptPolicy : public ActionPolicy {
 public:
  explicit ScriptPolicy(std::vector<DebugAction> actions) : actions_(std::move(actions)) {}
  std::optional<DebugAction> next(SessionState state, const Trace& trace) override;

 private:
  std::vector<DebugAction> actions_;
  std::size_t pos_ = 0;
};

}  // namespace hdldiff
