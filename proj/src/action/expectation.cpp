#include "hdldiff/action/expectation.hpp"

#include <sstream>

namespace hdldiff {

Expectation Expectation::exclude_pauses_at(std::set<int> lines) {
  Expectation e;
  e.kind = Kind::ExcludePausesAt;
  e.lines = std::move(lines);
  return e;
}

Expectation Expectation::exclude_action_events(std::set<std::size_t> actions) {
  Expectation e;
  e.kind = Kind::ExcludeActionEvents;
  e.actions = std::move(actions);
  return e;
}

Expectation Expectation::pause_count(int line, int count) {
  Expectation e;
  e.kind = Kind::ExpectPauseCount;
  e.line = line;
  e.count = count;
  return e;
}

Expectation Expectation::no_pause_at(std::set<int> lines, std::optional<std::uint64_t> time) {
  Expectation e;
  e.kind = Kind::ExpectNoPauseAt;
  e.lines = std::move(lines);
  e.time = time;
  return e;
}

Expectation Expectation::slide_equivalence(int from, int to, std::size_t action, int canonical) {
  Expectation e;
  e.kind = Kind::ExpectSlideEquivalence;
  e.from = from;
  e.to = to;
  e.action = action;
  e.canonical = canonical;
  return e;
}

Expectation Expectation::fold_transparency(int view, int source, std::size_t action, int canonical) {
  Expectation e;
  e.kind = Kind::ExpectFoldTransparency;
  e.from = view;
  e.to = source;
  e.action = action;
  e.canonical = canonical;
  return e;
}

Expectation Expectation::ignore_signals(std::vector<std::string> signals) {
  Expectation e;
  e.kind = Kind::IgnoreSignals;
  e.signals = std::move(signals);
  return e;
}

const char* to_string(Expectation::Kind k) {
  switch (k) {
    case Expectation::Kind::ExcludePausesAt: return "ExcludePausesAt";
    case Expectation::Kind::ExcludeActionEvents: return "ExcludeActionEvents";
    case Expectation::Kind::ExpectPauseCount: return "ExpectPauseCount";
    case Expectation::Kind::ExpectNoPauseAt: return "ExpectNoPauseAt";
    case Expectation::Kind::ExpectSlideEquivalence: return "ExpectSlideEquivalence";
    case Expectation::Kind::ExpectFoldTransparency: return "ExpectFoldTransparency";
    case Expectation::Kind::IgnoreSignals: return "IgnoreSignals";
  }
  return "?";
}

std::string describe(const Expectation& e) {
  std::ostringstream os;
  os << to_string(e.kind);
  const auto list = [&](const auto& xs) {
    os << " {";
    bool first = true;
    for (const auto& x : xs) {
      os << (first ? "" : ",") << x;
      first = false;
    }
    os << "}";
  };
  switch (e.kind) {
    case Expectation::Kind::ExcludePausesAt:
      list(e.lines);
      break;
    case Expectation::Kind::ExcludeActionEvents:
      list(e.actions);
      break;
    case Expectation::Kind::ExpectPauseCount:
      os << " line=" << e.line << " count=" << e.count;
      break;
    case Expectation::Kind::ExpectNoPauseAt:
      list(e.lines);
      if (e.time) os << " time=" << *e.time;
      break;
    case Expectation::Kind::ExpectSlideEquivalence:
    case Expectation::Kind::ExpectFoldTransparency:
      os << " from=" << e.from << " to=" << e.to;
      break;
    case Expectation::Kind::IgnoreSignals:
      list(e.signals);
      break;
  }
  if (!e.resolved) os << " (unresolved)";
  return os.str();
}

}  // namespace hdldiff
