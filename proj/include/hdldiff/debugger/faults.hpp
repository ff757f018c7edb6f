#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hdldiff {

/// Switchable defects of the reference debugger.
enum class Fault {
  None,
  NoSliding,          // F1: breakpoints on non-executable lines are not moved
  NonBlockingAsBlocking,  // F2: `<=` behaves like `=` in bodies that also use `=`
  PauseLineOffByOne,  // F3: pause line reported one too low after a blank or comment line
  FoldCoordinates,    // F4: breakpoints added while folded use view lines as source lines
  LoopLastIteration,  // F5: loop-body breakpoints miss the final iteration
};

const char* fault_id(Fault f);  // "F1".."F5", "none"
std::optional<Fault> parse_fault(const std::string& id);
std::vector<Fault> all_faults();

}  // namespace hdldiff
