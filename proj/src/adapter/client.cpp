#include "hdldiff/adapter/client.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <sstream>
#include <thread>

#include "hdldiff/diff/trace_format.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/render.hpp"

namespace hdldiff {

AdapterDebugger::AdapterDebugger(std::string command, double timeout_s)
    : command_(std::move(command)), timeout_s_(timeout_s) {}

AdapterDebugger::~AdapterDebugger() { shutdown(); }

void AdapterDebugger::spawn() {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw DebuggerCrash("pipe: " + std::string(std::strerror(errno)));
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw DebuggerCrash("pipe: " + std::string(std::strerror(errno)));
  }
  signal(SIGPIPE, SIG_IGN);
  const pid_t pid = fork();
  if (pid < 0) throw DebuggerCrash("fork: " + std::string(std::strerror(errno)));
  if (pid == 0) {
    setpgid(0, 0);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(in_pipe[0]);
  close(out_pipe[1]);
  fcntl(in_pipe[1], F_SETFD, FD_CLOEXEC);
  fcntl(out_pipe[0], F_SETFD, FD_CLOEXEC);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

void AdapterDebugger::shutdown() {
  if (pid_ < 0) return;
  if (to_child_ >= 0) {
    static constexpr char kQuit[] = "quit\n";
    [[maybe_unused]] auto n = write(to_child_, kQuit, sizeof kQuit - 1);
    close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ >= 0) {
    close(from_child_);
    from_child_ = -1;
  }
  int status = 0;
  for (int i = 0; i < 50; ++i) {
    if (waitpid(pid_, &status, WNOHANG) == pid_) {
      kill(-pid_, SIGKILL);
      pid_ = -1;
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  kill(-pid_, SIGKILL);
  waitpid(pid_, &status, 0);
  pid_ = -1;
}

void AdapterDebugger::send(const std::string& text) {
  std::size_t off = 0;
  while (off < text.size()) {
    const auto n = write(to_child_, text.data() + off, text.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw DebuggerCrash("adapter closed its input: " + std::string(std::strerror(errno)));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string AdapterDebugger::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s_);
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw SimTimeout("adapter did not answer within " + std::to_string(timeout_s_) + " s");
    pollfd p{from_child_, POLLIN, 0};
    const int r = poll(&p, 1, static_cast<int>(left.count()));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw DebuggerCrash("poll: " + std::string(std::strerror(errno)));
    }
    if (r == 0) continue;
    char chunk[4096];
    const auto n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      int status = 0;
      std::string why = "adapter closed its output";
      if (waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        if (WIFEXITED(status)) why = "adapter exited with status " + std::to_string(WEXITSTATUS(status));
        else if (WIFSIGNALED(status)) why = "adapter killed by signal " + std::to_string(WTERMSIG(status));
      }
      throw DebuggerCrash(why);
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::vector<std::string> AdapterDebugger::request(const std::string& text) {
  send(text);
  std::vector<std::string> payload;
  for (;;) {
    std::string line = read_line();
    if (line == "ack") return payload;
    if (line.rfind("error", 0) == 0) {
      const std::string msg = line.size() > 6 ? line.substr(6) : "";
      if (msg.rfind("elaboration: ", 0) == 0) throw ElaborationError(msg.substr(13));
      if (msg.rfind("rejected: ", 0) == 0) throw ActionRejected(msg.substr(10));
      if (msg.rfind("timeout: ", 0) == 0) throw SimTimeout(msg.substr(9));
      throw DebuggerCrash("adapter error: " + msg);
    }
    payload.push_back(std::move(line));
  }
}

void AdapterDebugger::start(const SourceUnit& unit, const SimConfig& cfg) {
  if (pid_ < 0) {
    spawn();
    for (const auto& line : request("hello\n")) {
      if (line.rfind("identity ", 0) == 0)
        identity_ = line.substr(9);
      else
        throw DebuggerCrash("unexpected handshake line '" + line + "'");
    }
  }
  std::ostringstream os;
  os << "load " << cfg.clock_period << ' ' << cfg.total_time << ' ' << cfg.reset_window << ' ' << unit.files.size()
     << '\n';
  for (std::size_t i = 0; i < unit.files.size(); ++i) {
    const std::string text = render_file(unit, static_cast<int>(i));
    int lines = 0;
    for (char c : text) lines += c == '\n';
    if (!text.empty() && text.back() != '\n') ++lines;
    os << "file " << lines << ' ' << unit.files[i].path << '\n' << text;
    if (!text.empty() && text.back() != '\n') os << '\n';
  }
  if (!request(os.str()).empty()) throw DebuggerCrash("unexpected payload in load reply");
  state_ = SessionState::PausedNotStarted;
}

std::vector<TraceEvent> AdapterDebugger::apply(const DebugAction& action) {
  std::string req;
  switch (action.kind) {
    case DebugAction::Kind::AddBreakpoint: req = "add_bp " + std::to_string(action.line); break;
    case DebugAction::Kind::RunAll: req = "run_all"; break;
    case DebugAction::Kind::Step: req = "step"; break;
    case DebugAction::Kind::Fold: req = "fold " + std::to_string(action.line) + " " + std::to_string(action.end_line); break;
    case DebugAction::Kind::Unfold: req = "unfold " + std::to_string(action.line); break;
  }
  std::vector<TraceEvent> events;
  for (const auto& line : request(req + "\n")) {
    if (line.rfind("event ", 0) != 0) throw DebuggerCrash("unexpected reply line '" + line + "'");
    try {
      events.push_back(parse_event(line.substr(6)));
    } catch (const FormatError& e) {
      throw DebuggerCrash("protocol violation: " + std::string(e.what()));
    }
  }
  for (const auto& e : events) {
    if (e.kind == TraceEvent::Kind::Finished)
      state_ = SessionState::Finished;
    else if (e.kind == TraceEvent::Kind::Paused)
      state_ = e.reason == PauseReason::Breakpoint ? SessionState::PausedAtBreakpoint : SessionState::PausedAfterStep;
  }
  return events;
}

WaveformLog AdapterDebugger::waveform() {
  std::string text;
  for (const auto& line : request("waves\n")) {
    if (line.rfind("wave ", 0) != 0) throw DebuggerCrash("unexpected reply line '" + line + "'");
    text += line.substr(5) + "\n";
  }
  try {
    return parse_waveform(text);
  } catch (const FormatError& e) {
    throw DebuggerCrash("protocol violation: " + std::string(e.what()));
  }
}

}  // namespace hdldiff
