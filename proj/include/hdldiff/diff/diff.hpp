#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdldiff/action/expectation.hpp"
#include "hdldiff/debugger/debugger.hpp"
#include "hdldiff/hdl/line_map.hpp"

namespace hdldiff {

class UnresolvedExpectation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Category { BreakpointPlacement, PauseLocation, PauseCount, WaveValue, Termination };
const char* to_string(Category c);
std::optional<Category> parse_category(const std::string& s);

struct Verdict {
  enum class Kind { Consistent, Inconsistent, Failure };

  Kind kind = Kind::Consistent;
  Category category = Category::Termination;  // Inconsistent
  FailureKind failure = FailureKind::Crash;    // Failure
  std::size_t index = 0;                      // first differing event position
  std::optional<TraceEvent> left;
  std::optional<TraceEvent> right;
  std::string detail;

  static Verdict consistent() { return {}; }
  static Verdict inconsistent(Category c, std::size_t index, std::optional<TraceEvent> left,
                              std::optional<TraceEvent> right, std::string detail);
  static Verdict failed(FailureKind k, std::string detail);

  bool is_consistent() const { return kind == Kind::Consistent; }
  /// "Consistent", "Inconsistent(WaveValue)", "Failure(Crash)".
  std::string label() const;
};

struct NormEvent {
  TraceEvent event;
  bool deleted = false;  // refers to an original line removed by the transformation
  bool operator==(const NormEvent&) const = default;
};

struct NormalizedTrace {
  std::vector<NormEvent> events;
  WaveformLog waves;
  bool operator==(const NormalizedTrace&) const = default;
};

struct NormalizeOptions {
  /// Maps original lines to the lines of the traced variant; events are mapped back
  /// through its inverse. Null for a run on the original design.
  const LineMap* variant_map = nullptr;
  /// For a run on the original: original lines this map removes are marked deleted.
  const LineMap* deletions = nullptr;
};

/// Lines mapped to original coordinates, reset-window samples dropped, excluded
/// events removed, ignored signals dropped. Variant lines with no original
/// counterpart become the negated variant line so they never compare equal.
NormalizedTrace normalize(const RunResult& run, const ExpectationSet& expect, const SimConfig& cfg,
                          const NormalizeOptions& opt = {});

/// First divergence of event sequences and windowed waveforms. When both differ
/// the earlier simulation time wins; a waveform difference wins ties.
Verdict compare(const NormalizedTrace& a, const NormalizedTrace& b);

/// Pause-count, no-pause, slide and fold expectations against a raw trace.
Verdict check_expectations(const RunResult& run, const ExpectationSet& expect);

/// Every breakpoint pause must be at the resolved line of a breakpoint set earlier.
Verdict check_pause_placement(const Trace& trace);

}  // namespace hdldiff
