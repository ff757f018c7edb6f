#include "hdldiff/hdl/record.hpp"

#include <charconv>
#include <stdexcept>

namespace hdldiff {

TransformRecord& TransformRecord::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : params)
    if (k == key) {
      v = value;
      return *this;
    }
  params.emplace_back(key, value);
  return *this;
}

TransformRecord& TransformRecord::set(const std::string& key, long long value) { return set(key, std::to_string(value)); }

std::optional<std::string> TransformRecord::get(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return std::nullopt;
}

long long TransformRecord::get_int(const std::string& key) const {
  const auto v = get(key);
  if (!v) throw std::invalid_argument(op + ": missing parameter '" + key + "'");
  long long out = 0;
  const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || p != v->data() + v->size())
    throw std::invalid_argument(op + ": parameter '" + key + "' is not an integer");
  return out;
}

std::string TransformRecord::to_string() const {
  std::string out = op;
  for (const auto& [k, v] : params) out += " " + k + "=" + v;
  return out;
}

TransformRecord TransformRecord::parse(std::string_view line) {
  TransformRecord r;
  std::size_t i = 0;
  bool first = true;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j == i) break;
    const std::string_view word = line.substr(i, j - i);
    if (first) {
      r.op = std::string(word);
      first = false;
    } else {
      const auto eq = word.find('=');
      if (eq == std::string_view::npos || eq == 0) throw std::invalid_argument("bad record field '" + std::string(word) + "'");
      r.params.emplace_back(std::string(word.substr(0, eq)), std::string(word.substr(eq + 1)));
    }
    i = j;
  }
  if (r.op.empty()) throw std::invalid_argument("empty transformation record");
  return r;
}

}  // namespace hdldiff
