#include "hdldiff/campaign/bundle.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hdldiff/diff/trace_format.hpp"
#include "hdldiff/hdl/parser.hpp"
#include "hdldiff/hdl/render.hpp"

namespace hdldiff {
namespace fs = std::filesystem;

namespace {

const char* event_kind(const std::optional<TraceEvent>& e) {
  if (!e) return "none";
  switch (e->kind) {
    case TraceEvent::Kind::BreakpointSet: return "BreakpointSet";
    case TraceEvent::Kind::Paused: return "Paused";
    case TraceEvent::Kind::WaveOutput: return "WaveOutput";
    case TraceEvent::Kind::Finished: return "Finished";
  }
  return "?";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n') c = ' ';
  return s;
}

std::string inner(const std::string& label, const std::string& head) {
  if (label.rfind(head + "(", 0) != 0 || label.back() != ')') throw std::runtime_error("bad verdict '" + label + "'");
  return label.substr(head.size() + 1, label.size() - head.size() - 2);
}

void parse_label(const std::string& label, Verdict& v) {
  if (label == "Consistent") {
    v.kind = Verdict::Kind::Consistent;
  } else if (label.rfind("Inconsistent", 0) == 0) {
    const auto c = parse_category(inner(label, "Inconsistent"));
    if (!c) throw std::runtime_error("bad verdict '" + label + "'");
    v.kind = Verdict::Kind::Inconsistent;
    v.category = *c;
  } else {
    const std::string k = inner(label, "Failure");
    v.kind = Verdict::Kind::Failure;
    for (auto f : {FailureKind::Crash, FailureKind::Timeout, FailureKind::Elaboration})
      if (k == to_string(f)) v.failure = f;
  }
}

}  // namespace

std::string signature(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::Consistent: return "Consistent";
    case Verdict::Kind::Failure: return v.label();
    case Verdict::Kind::Inconsistent:
      return v.label() + ":" + event_kind(v.left) + "/" + event_kind(v.right);
  }
  return "?";
}

void write_bundle(const std::string& dir, const Bundle& b) {
  const fs::path root(dir);
  fs::create_directories(root / "design");
  write_unit(b.spec.seed, (root / "design").string());

  std::ofstream script(root / "script.txt");
  for (const auto& a : b.spec.base.script()) script << format_action(a) << "\n";

  std::ofstream rec(root / "records.txt");
  rec << "design " << b.spec.seed.main().path << "\n";
  rec << "sim " << b.sim.clock_period << " " << b.sim.total_time << " " << b.sim.reset_window << "\n";
  rec << "use pro=" << b.spec.use_pro << " act=" << b.spec.use_act << "\n";
  for (const auto& r : b.spec.rtl) rec << "rtl " << r.to_string() << "\n";
  for (const auto& r : b.spec.act) rec << "act " << r.to_string() << "\n";

  std::ofstream verdict(root / "verdict.txt");
  verdict << "verdict " << b.outcome.verdict.label() << "\n";
  verdict << "stage " << (b.outcome.stage.empty() ? "-" : b.outcome.stage) << "\n";
  verdict << "target " << b.target << "\n";
  verdict << "signature " << signature(b.outcome.verdict) << "\n";
  verdict << "detail " << one_line(b.outcome.verdict.detail) << "\n";
}

Bundle load_bundle(const std::string& dir) {
  const fs::path root(dir);
  Bundle b;
  std::string design;
  std::istringstream rec(slurp(root / "records.txt"));
  std::string line;
  while (std::getline(rec, line)) {
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    const std::string head = line.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (head == "design") {
      design = rest;
    } else if (head == "sim") {
      std::istringstream f(rest);
      if (!(f >> b.sim.clock_period >> b.sim.total_time >> b.sim.reset_window))
        throw std::runtime_error("bad sim line '" + line + "'");
    } else if (head == "use") {
      b.spec.use_pro = rest.find("pro=1") != std::string::npos;
      b.spec.use_act = rest.find("act=1") != std::string::npos;
    } else if (head == "rtl") {
      b.spec.rtl.push_back(TransformRecord::parse(rest));
    } else if (head == "act") {
      b.spec.act.push_back(TransformRecord::parse(rest));
    } else {
      throw std::runtime_error("bad records line '" + line + "'");
    }
  }
  if (design.empty()) throw std::runtime_error("records.txt names no design");
  b.spec.seed = parse_file((root / "design" / design).string());

  std::vector<DebugAction> script;
  std::istringstream sin(slurp(root / "script.txt"));
  while (std::getline(sin, line))
    if (!line.empty()) script.push_back(parse_action(line));
  b.spec.base = plan_from_script(script);

  std::istringstream vin(slurp(root / "verdict.txt"));
  while (std::getline(vin, line)) {
    if (line.rfind("target ", 0) == 0) b.target = line.substr(7);
    if (line.rfind("stage ", 0) == 0 && line != "stage -") b.outcome.stage = line.substr(6);
    if (line.rfind("detail ", 0) == 0) b.outcome.verdict.detail = line.substr(7);
    if (line.rfind("verdict ", 0) == 0) parse_label(line.substr(8), b.outcome.verdict);
  }
  return b;
}

}  // namespace hdldiff
