#pragma once

#include <stdexcept>

#include "hdldiff/campaign/campaign.hpp"

namespace hdldiff {

class NonReproducible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReduceOptions {
  int max_checks = 20000;       // predicate evaluations
  double time_budget_s = 600.0;
};

struct ReduceResult {
  CaseSpec spec;
  CaseOutcome outcome;
  int original_lines = 0;
  int reduced_lines = 0;
  int checks = 0;
  bool budget_exceeded = false;
};

/// Shrinks a case while it keeps producing an Inconsistent verdict of the same category.
///
/// Phases, repeated to a fixed point: drop the transformation side that is not
/// needed, remove modules, module items and block statements by halving, drop
/// base actions, delete comment and blank lines. Every candidate is parsed and
/// elaborated before the debugger sees it; transformation records and the base
/// plan are carried through a line map of each deletion.
ReduceResult reduce_case(const CaseSpec& spec, const DebuggerFactory& make, const CampaignConfig& cfg,
                         const ReduceOptions& opt = {});

/// `spec` with the given main-file line ranges deleted and its plan and records
/// carried along; nullopt when the result does not parse, elaborate or remap.
/// Forwarded deletions move requests on deleted lines to the next surviving line.
std::optional<CaseSpec> delete_lines(const CaseSpec& spec, const std::vector<std::pair<int, int>>& ranges,
                                     bool forward);

/// Every valid candidate that removes exactly one module, module item or block statement.
std::vector<CaseSpec> single_node_removals(const CaseSpec& spec);

}  // namespace hdldiff
