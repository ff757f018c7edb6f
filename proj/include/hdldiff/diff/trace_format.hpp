#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hdldiff/debugger/types.hpp"

namespace hdldiff {

/// Malformed trace or action record.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One record per line, space separated:
//   BreakpointSet <requested> <actual|->
//   Paused <line> <Breakpoint|StepDone> <time>
//   WaveOutput <time> <name>=<width>'b<bits> ...
//   Finished <time>
std::string format_event(const TraceEvent& e);
TraceEvent parse_event(std::string_view line);

std::string format_trace(const Trace& t);
Trace parse_trace(std::string_view text);

//   AddBreakpoint <line> | RunAll | Step | Fold <start> <end> | Unfold <start>
std::string format_action(const DebugAction& a);
DebugAction parse_action(std::string_view line);

std::string format_waveform(const WaveformLog& log);
WaveformLog parse_waveform(std::string_view text);

std::vector<std::string> split_words(std::string_view line);

}  // namespace hdldiff
