#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdldiff/hdl/ast.hpp"
#include "hdldiff/hdl/const_eval.hpp"

namespace hdldiff {

class ElaborationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Signal {
  std::string name;  // hierarchical, e.g. "u1.count"
  NetKind kind = NetKind::Wire;
  unsigned width = 1;
  bool top_level = false;
  bool top_input = false;
};

/// Statement with resolved targets and compiled expressions.
/// If: children = {then[, else]}; For: children = {init, step, body}; Block: children in order.
struct CStmt {
  Stmt::Kind kind = Stmt::Kind::Block;
  int line = 0;
  int target = -1;
  unsigned target_width = 1;
  CExpr value;
  CExpr cond;
  bool has_else = false;
  std::vector<CStmt> children;
};

struct ElabProcess {
  Process::Kind kind = Process::Kind::Always;
  int line = 0;
  std::string module;
  std::string instance;  // hierarchical prefix, empty for the top
  CStmt body;
};

struct ElabAssign {
  int target = -1;
  CExpr value;
  int line = 0;  // 0 for port connections
};

/// Flattened design ready for simulation.
struct Design {
  std::string top;
  std::vector<Signal> signals;
  std::vector<ElabProcess> processes;  // document order, depth first
  std::vector<ElabAssign> assigns;     // topological order
  std::optional<int> clock;
  std::vector<int> stimulus;  // top inputs other than the clock
  std::vector<int> waves;     // top-level wires and regs

  int slot(const std::string& name) const;  // -1 when absent
};

/// Flattens the unit below its unique top module.
Design elaborate(const SourceUnit& unit);

/// Names of modules not instantiated anywhere.
std::vector<std::string> top_candidates(const SourceUnit& unit);

/// Number of times each module is instantiated in the flattened design (top counts once).
std::vector<std::pair<std::string, int>> instance_counts(const SourceUnit& unit);

}  // namespace hdldiff
