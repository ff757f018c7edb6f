#pragma once

#include <string>

#include "hdldiff/campaign/campaign.hpp"

namespace hdldiff {

/// On-disk reproducer of one case.
///
///   design/        every file of the seed design
///   script.txt     base action script, one action per line
///   records.txt    "design <main file>", "sim <period> <total> <reset>", "use pro=<0|1> act=<0|1>",
///                  then "rtl <record>" / "act <record>"
///   verdict.txt    verdict, stage, target, signature and detail lines
struct Bundle {
  CaseSpec spec;
  std::string target = "reference";
  SimConfig sim;
  CaseOutcome outcome;
};

/// Category plus the kinds of the first differing events; stable across reductions.
std::string signature(const Verdict& v);

void write_bundle(const std::string& dir, const Bundle& b);
/// Throws std::runtime_error on missing or malformed files.
Bundle load_bundle(const std::string& dir);

}  // namespace hdldiff
