#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hdldiff {

/// One entry consumed by normalization or by the expectation check.
///
/// Lines are in the coordinates of the run the entry annotates. `action` is an
/// index into the actions issued during that run.
struct Expectation {
  enum class Kind {
    ExcludePausesAt,         // drop breakpoint pauses at `lines` (and their WaveOutput)
    ExcludeActionEvents,     // drop every event produced by the actions in `actions`
    ExpectPauseCount,        // `count` pauses at `line` per simulation time step
    ExpectNoPauseAt,         // no pause at `lines` (at `time` when set)
    ExpectSlideEquivalence,  // action `action` requested `from` and must resolve to `to`
    ExpectFoldTransparency,  // action `action` requested view line `from` and must resolve to `to`
    IgnoreSignals,           // `signals` are absent from comparisons
  };

  Kind kind = Kind::ExcludePausesAt;
  std::set<int> lines;
  std::set<std::size_t> actions;
  int line = 0;
  int count = 0;
  int from = 0;
  int to = 0;
  int canonical = 0;  // request line of the untransformed action
  std::optional<std::uint64_t> time;
  std::optional<std::size_t> action;
  std::vector<std::string> signals;
  bool resolved = true;  // false while an interactive entry waits for a live event

  static Expectation exclude_pauses_at(std::set<int> lines);
  static Expectation exclude_action_events(std::set<std::size_t> actions);
  static Expectation pause_count(int line, int count);
  static Expectation no_pause_at(std::set<int> lines, std::optional<std::uint64_t> time = std::nullopt);
  static Expectation slide_equivalence(int from, int to, std::size_t action, int canonical);
  static Expectation fold_transparency(int view, int source, std::size_t action, int canonical);
  static Expectation ignore_signals(std::vector<std::string> signals);

  bool operator==(const Expectation&) const = default;
};

using ExpectationSet = std::vector<Expectation>;

const char* to_string(Expectation::Kind k);
std::string describe(const Expectation& e);

}  // namespace hdldiff
