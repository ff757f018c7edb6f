#include "hdldiff/adapter/server.hpp"

#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "hdldiff/debugger/reference.hpp"
#include "hdldiff/diff/trace_format.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/parser.hpp"

namespace hdldiff {

std::optional<Misbehave> parse_misbehave(const std::string& s) {
  if (s == "none") return Misbehave::None;
  if (s == "silent") return Misbehave::Silent;
  if (s == "garbage") return Misbehave::Garbage;
  if (s == "exit") return Misbehave::Exit;
  return std::nullopt;
}

namespace {

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int serve_adapter(std::istream& in, std::ostream& out, Fault fault, Misbehave mode) {
  ReferenceDebugger dbg(fault);
  bool loaded = false;
  std::string line;
  const auto ack = [&] { out << "ack\n" << std::flush; };
  const auto error = [&](const std::string& msg) { out << "error " << one_line(msg) << "\n" << std::flush; };

  while (std::getline(in, line)) {
    const auto w = split_words(line);
    if (w.empty()) continue;
    const std::string& cmd = w[0];
    try {
      if (cmd == "hello") {
        out << "identity " << dbg.identity() << "\n";
        ack();
      } else if (cmd == "quit") {
        ack();
        return 0;
      } else if (cmd == "load") {
        if (w.size() != 5) throw std::invalid_argument("load needs 4 fields");
        SimConfig cfg;
        cfg.clock_period = std::stoull(w[1]);
        cfg.total_time = std::stoull(w[2]);
        cfg.reset_window = std::stoull(w[3]);
        const int nfiles = std::stoi(w[4]);
        std::vector<std::pair<std::string, std::string>> files;
        for (int f = 0; f < nfiles; ++f) {
          if (!std::getline(in, line)) return 1;
          const auto h = split_words(line);
          if (h.size() < 3 || h[0] != "file") throw std::invalid_argument("expected file header");
          const int n = std::stoi(h[1]);
          const std::string path = line.substr(6 + h[1].size());
          std::string text;
          for (int i = 0; i < n; ++i) {
            if (!std::getline(in, line)) return 1;
            text += line + "\n";
          }
          files.emplace_back(path, std::move(text));
        }
        if (files.empty()) throw std::invalid_argument("load without files");
        std::map<std::string, std::string> includes(files.begin() + 1, files.end());
        try {
          const SourceUnit unit = parse(
              files.front().second,
              [&](const std::string& p) -> std::optional<std::string> {
                const auto it = includes.find(p);
                if (it == includes.end()) return std::nullopt;
                return it->second;
              },
              files.front().first);
          dbg.start(unit, cfg);
        } catch (const ParseError& e) {
          throw ElaborationError(e.what());
        }
        loaded = true;
        ack();
      } else if (!loaded) {
        error("rejected: no design loaded");
      } else if (cmd == "waves") {
        std::istringstream rows(format_waveform(dbg.waveform()));
        while (std::getline(rows, line)) out << "wave " << line << "\n";
        ack();
      } else {
        DebugAction a;
        if (cmd == "add_bp" && w.size() == 2)
          a = DebugAction::add_breakpoint(std::stoi(w[1]));
        else if (cmd == "run_all" && w.size() == 1)
          a = DebugAction::run_all();
        else if (cmd == "step" && w.size() == 1)
          a = DebugAction::step();
        else if (cmd == "fold" && w.size() == 3)
          a = DebugAction::fold(std::stoi(w[1]), std::stoi(w[2]));
        else if (cmd == "unfold" && w.size() == 2)
          a = DebugAction::unfold(std::stoi(w[1]));
        else
          throw std::invalid_argument("unknown request '" + line + "'");

        if (a.kind == DebugAction::Kind::RunAll) {
          if (mode == Misbehave::Silent)
            for (;;) std::this_thread::sleep_for(std::chrono::seconds(1));
          if (mode == Misbehave::Exit) {
            out << std::flush;
            std::_Exit(3);
          }
          if (mode == Misbehave::Garbage) {
            out << "event Teleported 7 0\n";
            ack();
            continue;
          }
        }
        for (const auto& e : dbg.apply(a)) out << "event " << format_event(e) << "\n";
        ack();
      }
    } catch (const ElaborationError& e) {
      error(std::string("elaboration: ") + e.what());
    } catch (const ActionRejected& e) {
      error(std::string("rejected: ") + e.what());
    } catch (const SimTimeout& e) {
      error(std::string("timeout: ") + e.what());
    } catch (const std::exception& e) {
      error(e.what());
    }
  }
  return 0;
}

}  // namespace hdldiff
