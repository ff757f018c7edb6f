#include "hdldiff/hdl/line_map.hpp"

#include <algorithm>
#include <sstream>

namespace hdldiff {

LineMap LineMap::identity(int line_count) {
  LineMap m;
  m.entries_.resize(static_cast<std::size_t>(std::max(line_count, 0)));
  for (int l = 1; l <= line_count; ++l) m.entries_[static_cast<std::size_t>(l - 1)] = {Fate::Kept, l};
  return m;
}

LineMap LineMap::deletion(int line_count, int first, int last, bool forward) {
  LineMap m;
  const int removed = last - first + 1;
  m.entries_.resize(static_cast<std::size_t>(line_count));
  for (int l = 1; l <= line_count; ++l) {
    auto& e = m.entries_[static_cast<std::size_t>(l - 1)];
    if (l < first) {
      e = {Fate::Kept, l};
    } else if (l <= last) {
      e = forward ? Entry{Fate::Forwarded, first} : Entry{Fate::Dead, 0};
    } else {
      e = {Fate::Kept, l - removed};
    }
  }
  m.tail_delta_ = -removed;
  return m;
}

LineMap LineMap::from_entries(std::vector<Entry> entries, int tail_delta) {
  LineMap m;
  m.entries_ = std::move(entries);
  m.tail_delta_ = tail_delta;
  return m;
}

LineMap LineMap::insertion(int line_count, int at, int count) {
  LineMap m;
  m.entries_.resize(static_cast<std::size_t>(line_count));
  for (int l = 1; l <= line_count; ++l)
    m.entries_[static_cast<std::size_t>(l - 1)] = {Fate::Kept, l < at ? l : l + count};
  m.tail_delta_ = count;
  return m;
}

LineMap::Fate LineMap::fate(int line) const {
  if (line >= 1 && line <= original_lines()) return entries_[static_cast<std::size_t>(line - 1)].fate;
  return Fate::Kept;
}

bool LineMap::is_dead(int line) const { return fate(line) == Fate::Dead; }

std::optional<int> LineMap::map(int line) const {
  if (line >= 1 && line <= original_lines()) {
    const auto& e = entries_[static_cast<std::size_t>(line - 1)];
    if (e.fate == Fate::Dead) return std::nullopt;
    return e.target;
  }
  return line + tail_delta_;
}

std::optional<int> LineMap::inverse(int variant_line) const {
  for (int l = 1; l <= original_lines(); ++l) {
    const auto& e = entries_[static_cast<std::size_t>(l - 1)];
    if (e.fate == Fate::Kept && e.target == variant_line) return l;
  }
  const int l = variant_line - tail_delta_;
  if (l > original_lines() && l >= 1) return l;
  return std::nullopt;
}

std::vector<LineMap::Segment> LineMap::segments() const {
  std::vector<Segment> out;
  for (int l = 1; l <= original_lines(); ++l) {
    const auto& e = entries_[static_cast<std::size_t>(l - 1)];
    if (e.fate != Fate::Kept) continue;
    const int delta = e.target - l;
    if (!out.empty() && out.back().orig_end == l - 1 && out.back().delta == delta) {
      out.back().orig_end = l;
    } else {
      out.push_back({l, l, delta});
    }
  }
  return out;
}

std::set<int> LineMap::deleted_lines() const {
  std::set<int> out;
  for (int l = 1; l <= original_lines(); ++l)
    if (entries_[static_cast<std::size_t>(l - 1)].fate != Fate::Kept) out.insert(l);
  return out;
}

LineMap LineMap::compose(const LineMap& first, const LineMap& second) {
  LineMap m;
  const int n = std::max(first.original_lines(), second.original_lines() - first.tail_delta_);
  m.entries_.resize(static_cast<std::size_t>(std::max(n, 0)));
  for (int l = 1; l <= n; ++l) {
    auto& out = m.entries_[static_cast<std::size_t>(l - 1)];
    const Fate f1 = first.fate(l);
    const auto t = first.map(l);
    if (f1 == Fate::Dead || !t) {
      out = {Fate::Dead, 0};
      continue;
    }
    const Fate f2 = second.fate(*t);
    const auto t2 = second.map(*t);
    if (f2 == Fate::Dead || !t2) {
      out = {Fate::Dead, 0};
    } else if (f1 == Fate::Kept && f2 == Fate::Kept) {
      out = {Fate::Kept, *t2};
    } else {
      out = {Fate::Forwarded, *t2};
    }
  }
  m.tail_delta_ = first.tail_delta_ + second.tail_delta_;
  return m;
}

std::string LineMap::to_string() const {
  std::ostringstream os;
  for (const auto& s : segments()) os << "keep " << s.orig_start << "-" << s.orig_end << " " << (s.delta >= 0 ? "+" : "") << s.delta << "\n";
  for (int l = 1; l <= original_lines(); ++l) {
    const auto& e = entries_[static_cast<std::size_t>(l - 1)];
    if (e.fate == Fate::Forwarded) os << "forward " << l << " " << e.target << "\n";
    if (e.fate == Fate::Dead) os << "dead " << l << "\n";
  }
  os << "tail " << (tail_delta_ >= 0 ? "+" : "") << tail_delta_ << "\n";
  return os.str();
}

}  // namespace hdldiff
