#include "hdldiff/diff/trace_format.hpp"

#include <charconv>
#include <sstream>

namespace hdldiff {

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

namespace {

template <class T>
T to_number(const std::string& s) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw FormatError("bad number '" + s + "'");
  return v;
}

void expect_words(const std::vector<std::string>& w, std::size_t n) {
  if (w.size() != n) throw FormatError("record '" + w.front() + "' expects " + std::to_string(n - 1) + " fields");
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

std::string format_event(const TraceEvent& e) {
  std::ostringstream os;
  switch (e.kind) {
    case TraceEvent::Kind::BreakpointSet:
      os << "BreakpointSet " << e.requested << ' ';
      if (e.actual) {
        os << *e.actual;
      } else {
        os << '-';
      }
      break;
    case TraceEvent::Kind::Paused:
      os << "Paused " << e.line << ' ' << (e.reason == PauseReason::Breakpoint ? "Breakpoint" : "StepDone") << ' '
         << e.time;
      break;
    case TraceEvent::Kind::WaveOutput:
      os << "WaveOutput " << e.time;
      for (const auto& [name, v] : e.values) os << ' ' << name << '=' << v.to_string();
      break;
    case TraceEvent::Kind::Finished:
      os << "Finished " << e.time;
      break;
  }
  return os.str();
}

TraceEvent parse_event(std::string_view line) {
  const auto w = split_words(line);
  if (w.empty()) throw FormatError("empty trace record");
  if (w[0] == "BreakpointSet") {
    expect_words(w, 3);
    std::optional<int> actual;
    if (w[2] != "-") actual = to_number<int>(w[2]);
    return TraceEvent::breakpoint_set(to_number<int>(w[1]), actual);
  }
  if (w[0] == "Paused") {
    expect_words(w, 4);
    PauseReason r;
    if (w[2] == "Breakpoint") {
      r = PauseReason::Breakpoint;
    } else if (w[2] == "StepDone") {
      r = PauseReason::StepDone;
    } else {
      throw FormatError("unknown pause reason '" + w[2] + "'");
    }
    return TraceEvent::paused(to_number<int>(w[1]), r, to_number<std::uint64_t>(w[3]));
  }
  if (w[0] == "WaveOutput") {
    if (w.size() < 2) throw FormatError("WaveOutput without time");
    SignalValues values;
    for (std::size_t i = 2; i < w.size(); ++i) {
      const auto eq = w[i].find('=');
      if (eq == std::string::npos || eq == 0) throw FormatError("bad signal value '" + w[i] + "'");
      try {
        values.emplace_back(w[i].substr(0, eq), LogicVec::parse(std::string_view(w[i]).substr(eq + 1)));
      } catch (const std::invalid_argument& ex) {
        throw FormatError(ex.what());
      }
    }
    return TraceEvent::wave_output(to_number<std::uint64_t>(w[1]), std::move(values));
  }
  if (w[0] == "Finished") {
    expect_words(w, 2);
    return TraceEvent::finished(to_number<std::uint64_t>(w[1]));
  }
  throw FormatError("unknown trace record '" + w[0] + "'");
}

std::string format_trace(const Trace& t) {
  std::string out;
  for (const auto& e : t) out += format_event(e) + "\n";
  return out;
}

Trace parse_trace(std::string_view text) {
  Trace t;
  for (auto line : split_lines(text))
    if (!split_words(line).empty()) t.push_back(parse_event(line));
  return t;
}

std::string format_action(const DebugAction& a) {
  switch (a.kind) {
    case DebugAction::Kind::AddBreakpoint: return "AddBreakpoint " + std::to_string(a.line);
    case DebugAction::Kind::RunAll: return "RunAll";
    case DebugAction::Kind::Step: return "Step";
    case DebugAction::Kind::Fold: return "Fold " + std::to_string(a.line) + " " + std::to_string(a.end_line);
    case DebugAction::Kind::Unfold: return "Unfold " + std::to_string(a.line);
  }
  return "?";
}

DebugAction parse_action(std::string_view line) {
  const auto w = split_words(line);
  if (w.empty()) throw FormatError("empty action record");
  if (w[0] == "AddBreakpoint") {
    expect_words(w, 2);
    return DebugAction::add_breakpoint(to_number<int>(w[1]));
  }
  if (w[0] == "RunAll") {
    expect_words(w, 1);
    return DebugAction::run_all();
  }
  if (w[0] == "Step") {
    expect_words(w, 1);
    return DebugAction::step();
  }
  if (w[0] == "Fold") {
    expect_words(w, 3);
    return DebugAction::fold(to_number<int>(w[1]), to_number<int>(w[2]));
  }
  if (w[0] == "Unfold") {
    expect_words(w, 2);
    return DebugAction::unfold(to_number<int>(w[1]));
  }
  throw FormatError("unknown action '" + w[0] + "'");
}

std::string format_waveform(const WaveformLog& log) {
  std::ostringstream os;
  os << "names";
  for (const auto& n : log.names) os << ' ' << n;
  os << '\n';
  for (const auto& [t, row] : log.samples) {
    os << "sample " << t;
    for (const auto& v : row) os << ' ' << v.to_string();
    os << '\n';
  }
  return os.str();
}

WaveformLog parse_waveform(std::string_view text) {
  WaveformLog log;
  bool have_names = false;
  for (auto line : split_lines(text)) {
    const auto w = split_words(line);
    if (w.empty()) continue;
    if (w[0] == "names") {
      log.names.assign(w.begin() + 1, w.end());
      have_names = true;
    } else if (w[0] == "sample") {
      if (!have_names || w.size() != log.names.size() + 2) throw FormatError("sample row does not match names");
      std::vector<LogicVec> row;
      try {
        for (std::size_t i = 2; i < w.size(); ++i) row.push_back(LogicVec::parse(w[i]));
      } catch (const std::invalid_argument& ex) {
        throw FormatError(ex.what());
      }
      log.samples.emplace_back(to_number<std::uint64_t>(w[1]), std::move(row));
    } else {
      throw FormatError("unknown waveform record '" + w[0] + "'");
    }
  }
  return log;
}

}  // namespace hdldiff
