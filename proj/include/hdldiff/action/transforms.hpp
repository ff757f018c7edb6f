#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdldiff/action/policy.hpp"
#include "hdldiff/hdl/record.hpp"

namespace hdldiff {

/// No site for the requested action transformation (or a replayed record no longer applies).
class NoActionSite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ActOp { AddBreakpoint, BreakpointSlide, IfElseProbe, StepForLoop, CodeFold };
inline constexpr std::array<ActOp, 5> kActOps = {ActOp::AddBreakpoint, ActOp::BreakpointSlide, ActOp::IfElseProbe,
                                                 ActOp::StepForLoop, ActOp::CodeFold};

const char* act_op_name(ActOp op);  // "add-breakpoint", ...
std::optional<ActOp> parse_act_op(const std::string& name);

struct ActResult {
  ActionPlan plan;
  TransformRecord record;
};

ActResult xf_add_breakpoint(const ActionPlan& plan, const SourceUnit& unit, Rng& rng);
ActResult xf_breakpoint_slide(const ActionPlan& plan, const SourceUnit& unit, Rng& rng);
ActResult xf_if_else_probe(const ActionPlan& plan, const SourceUnit& unit, Rng& rng);
ActResult xf_step_for_loop(const ActionPlan& plan, const SourceUnit& unit, Rng& rng);
ActResult xf_code_fold(const ActionPlan& plan, const SourceUnit& unit, Rng& rng);
ActResult apply_act_op(ActOp op, const ActionPlan& plan, const SourceUnit& unit, Rng& rng);

/// Re-applies a recorded transformation; throws NoActionSite when it no longer fits.
ActionPlan apply_act_record(const ActionPlan& plan, const SourceUnit& unit, const TransformRecord& record);

struct ActPipelineResult {
  ActionPlan plan;
  std::vector<TransformRecord> records;
  bool stopped_early = false;
};

/// Applies up to `rounds` randomly chosen applicable transformations.
ActPipelineResult act_pipeline(const ActionPlan& plan, const SourceUnit& unit, int rounds, Rng& rng,
                               const std::vector<double>& weights = {});

}  // namespace hdldiff
