#pragma once

#include <stdexcept>
#include <string>

#include "hdldiff/action/policy.hpp"
#include "hdldiff/hdl/ast.hpp"

namespace hdldiff {

class GenerationRetryExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeedOptions {
  int min_lines = 80;
  int max_lines = 120;
  int max_attempts = 20;
  bool submodules = true;
};

/// Random clocked design whose text has a line count inside [min_lines, max_lines].
/// Always blocks use reset branches, non-blocking chains, blocking temporaries,
/// constant-trip loops and isolated sink registers; comments and blank lines are
/// interspersed. Fully determined by the generator state.
std::string generate_seed_text(Rng& rng, const SeedOptions& opt = {});

/// generate_seed_text, parsed, elaborated and run to completion once on the reference.
SourceUnit generate_seed(Rng& rng, const SeedOptions& opt = {});

}  // namespace hdldiff
