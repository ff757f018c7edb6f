#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hdldiff {

/// Correspondence between original and variant lines of one file.
///
/// Each original line is Kept (maps to a variant line), Forwarded (removed, but
/// requests move to the next surviving line) or Dead (removed with no image).
/// Lines past the described range shift by `tail_delta`.
class LineMap {
 public:
  enum class Fate { Kept, Forwarded, Dead };

  struct Entry {
    Fate fate = Fate::Kept;
    int target = 0;  // variant line for Kept and Forwarded
    bool operator==(const Entry&) const = default;
  };

  struct Segment {
    int orig_start;
    int orig_end;
    int delta;
  };

  LineMap() = default;
  static LineMap identity(int line_count);

  /// Deletes original lines [first, last] of a file with `line_count` lines.
  static LineMap deletion(int line_count, int first, int last, bool forward);
  /// Explicit per-line entries for lines 1..entries.size().
  static LineMap from_entries(std::vector<Entry> entries, int tail_delta);
  /// Inserts `count` new lines so the first new line has number `at`.
  static LineMap insertion(int line_count, int at, int count);

  /// Variant line for a Kept or Forwarded line; nullopt when Dead.
  std::optional<int> map(int line) const;
  bool is_dead(int line) const;
  Fate fate(int line) const;
  /// Original line whose Kept image is `variant_line`; nullopt for inserted lines.
  std::optional<int> inverse(int variant_line) const;

  int original_lines() const { return static_cast<int>(entries_.size()); }
  int tail_delta() const { return tail_delta_; }

  /// Kept runs with constant offset.
  std::vector<Segment> segments() const;
  std::set<int> deleted_lines() const;

  /// Applies `first`, then `second`.
  static LineMap compose(const LineMap& first, const LineMap& second);

  std::string to_string() const;
  bool operator==(const LineMap&) const = default;

 private:
  std::vector<Entry> entries_;  // index 0 is line 1
  int tail_delta_ = 0;
};

}  // namespace hdldiff
