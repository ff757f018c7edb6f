#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdldiff/action/expectation.hpp"
#include "hdldiff/action/policy.hpp"
#include "hdldiff/hdl/ast.hpp"
#include "hdldiff/hdl/line_map.hpp"
#include "hdldiff/hdl/record.hpp"

namespace hdldiff {

/// The targeted construct fails the transformation's eligibility analysis.
class IneligibleSite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RtlOp { AssignConv, LiteralExpr, BitMutate, DeadLoop, IncludeInject, IncludeRemove };
inline constexpr std::array<RtlOp, 6> kRtlOps = {RtlOp::AssignConv, RtlOp::LiteralExpr,   RtlOp::BitMutate,
                                                 RtlOp::DeadLoop,   RtlOp::IncludeInject, RtlOp::IncludeRemove};

const char* rtl_op_name(RtlOp op);  // "assign-conv", ...
std::optional<RtlOp> parse_rtl_op(const std::string& name);

/// A construct a transformation may rewrite. `ordinal` separates candidates of the
/// same kind starting on the same line, in document order.
struct TransformSite {
  RtlOp kind = RtlOp::AssignConv;
  SourceLoc loc;
  int ordinal = 0;
  std::string evidence;

  bool operator==(const TransformSite&) const = default;
};

struct TransformResult {
  SourceUnit variant;
  LineMap line_map;
  TransformRecord record;
  ExpectationSet expectations;
};

/// Eligible sites of one kind in document order.
std::vector<TransformSite> enumerate_sites(const SourceUnit& unit, RtlOp kind);

TransformResult convert_assignment(const SourceUnit& unit, const TransformSite& site);
TransformResult literal_to_expression(const SourceUnit& unit, const TransformSite& site, Rng& rng);
TransformResult bit_double_negate(const SourceUnit& unit, const TransformSite& site);
TransformResult remove_unreachable_loop(const SourceUnit& unit, const TransformSite& site);

enum class IncludeMode { Inject, Remove };
TransformResult mutate_includes(const SourceUnit& unit, IncludeMode mode, Rng& rng);

/// Applies `op` at a random eligible site; throws IneligibleSite when there is none.
TransformResult apply_rtl_op(RtlOp op, const SourceUnit& unit, Rng& rng);

/// Re-applies a recorded transformation; throws IneligibleSite when it no longer fits.
TransformResult apply_rtl_record(const SourceUnit& unit, const TransformRecord& record);

struct ProResult {
  SourceUnit variant;
  LineMap line_map;
  std::vector<TransformRecord> records;
  ExpectationSet expectations;
  bool stopped_early = false;
};

/// Applies up to `rounds` randomly chosen eligible transformations in sequence.
ProResult pro_pipeline(const SourceUnit& unit, int rounds, Rng& rng, const std::vector<double>& weights = {});

/// Replays records produced by pro_pipeline.
ProResult replay_rtl_records(const SourceUnit& unit, const std::vector<TransformRecord>& records);

/// Moves breakpoint requests through a line map; requests on dead lines are dropped.
ActionPlan remap_plan(const ActionPlan& plan, const LineMap& map);

/// Renders every file and parses the result again.
SourceUnit reparse(const SourceUnit& unit);

}  // namespace hdldiff
