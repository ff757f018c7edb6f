#pragma once

#include <memory>

#include "hdldiff/debugger/debugger.hpp"
#include "hdldiff/debugger/faults.hpp"

namespace hdldiff {

/// Interactive debugger over an event-driven simulation of the subset.
///
/// Time 0 runs initial blocks. Rising clock edges fall at k*period + period/2 and
/// falling edges at (k+1)*period; non-clock inputs change at time 0 and on every
/// falling edge. Breakpoints pause before their statement executes.
class ReferenceDebugger : public Debugger {
 public:
  explicit ReferenceDebugger(Fault fault = Fault::None);
  ~ReferenceDebugger() override;
  ReferenceDebugger(ReferenceDebugger&&) noexcept;
  ReferenceDebugger& operator=(ReferenceDebugger&&) noexcept;

  void start(const SourceUnit& unit, const SimConfig& cfg) override;
  std::vector<TraceEvent> apply(const DebugAction& action) override;
  SessionState state() const override;
  WaveformLog waveform() override;
  std::string identity() const override;

  /// Committed value of a signal by hierarchical name (test hook).
  LogicVec value(const std::string& name) const;
  std::uint64_t time() const;

 private:
  struct Impl;
  Fault fault_;
  std::unique_ptr<Impl> impl_;
};

/// Value driven onto a stimulus input for a given cycle.
LogicVec stimulus_value(const std::string& name, unsigned width, std::uint64_t cycle);

}  // namespace hdldiff
