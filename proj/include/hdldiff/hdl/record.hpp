#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hdldiff {

/// Replayable description of one applied transformation: `op key=value ...`.
struct TransformRecord {
  std::string op;
  std::vector<std::pair<std::string, std::string>> params;

  TransformRecord& set(const std::string& key, const std::string& value);
  TransformRecord& set(const std::string& key, long long value);
  std::optional<std::string> get(const std::string& key) const;
  /// Throws std::invalid_argument when missing or not an integer.
  long long get_int(const std::string& key) const;

  std::string to_string() const;
  static TransformRecord parse(std::string_view line);

  bool operator==(const TransformRecord&) const = default;
};

}  // namespace hdldiff
