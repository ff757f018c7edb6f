#pragma once

#include <string>
#include <vector>

#include "hdldiff/debugger/debugger.hpp"

namespace hdldiff {

/// Debugger served by an external process over the line protocol in docs/adapter_protocol.md.
///
/// The command runs under /bin/sh with its standard streams attached to pipes. A
/// reply that misses its deadline raises SimTimeout; a dead child or an unparsable
/// line raises DebuggerCrash.
class AdapterDebugger : public Debugger {
 public:
  AdapterDebugger(std::string command, double timeout_s);
  ~AdapterDebugger() override;
  AdapterDebugger(const AdapterDebugger&) = delete;
  AdapterDebugger& operator=(const AdapterDebugger&) = delete;

  void start(const SourceUnit& unit, const SimConfig& cfg) override;
  std::vector<TraceEvent> apply(const DebugAction& action) override;
  SessionState state() const override { return state_; }
  WaveformLog waveform() override;
  std::string identity() const override { return identity_; }

 private:
  void spawn();
  void send(const std::string& text);
  std::string read_line();
  /// Sends one request and collects the payload lines up to its ack.
  std::vector<std::string> request(const std::string& text);
  void shutdown();

  std::string command_;
  double timeout_s_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::string identity_ = "adapter";
  SessionState state_ = SessionState::PausedNotStarted;
};

}  // namespace hdldiff
