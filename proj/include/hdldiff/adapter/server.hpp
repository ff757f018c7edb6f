#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "hdldiff/debugger/faults.hpp"

namespace hdldiff {

/// Deliberate protocol violations of the loopback adapter, triggered by the first run_all.
enum class Misbehave { None, Silent, Garbage, Exit };
std::optional<Misbehave> parse_misbehave(const std::string& s);

/// Serves the adapter protocol on the given streams with a reference debugger.
/// Returns the process exit status.
int serve_adapter(std::istream& in, std::ostream& out, Fault fault = Fault::None, Misbehave mode = Misbehave::None);

}  // namespace hdldiff
