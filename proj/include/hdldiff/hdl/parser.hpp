#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hdldiff/hdl/ast.hpp"

namespace hdldiff {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, int line, int col, const std::string& msg);
  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  std::string file_;
  int line_;
  int col_;
};

/// Returns the text of an included file, or nullopt when it cannot be found.
using IncludeResolver = std::function<std::optional<std::string>(const std::string& path)>;

SourceUnit parse(std::string_view text, const IncludeResolver& resolve = {}, const std::string& path = "design.v");

/// Reads `path` from disk; includes resolve relative to its directory.
SourceUnit parse_file(const std::string& path);

/// Parses an included declarations-only file.
SourceFile parse_include_file(std::string_view text, const std::string& path, int file_index);

}  // namespace hdldiff
