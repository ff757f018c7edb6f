#pragma once

#include <string>

#include "hdldiff/hdl/ast.hpp"

namespace hdldiff {

/// Renders one file of the unit; every node lands on the line recorded in its SourceLoc.
std::string render_file(const SourceUnit& unit, int file);

/// Renders the main file.
std::string render(const SourceUnit& unit);

std::string render_expr(const Expr& e);

/// Writes every file of the unit into `dir` (main file under its path label).
void write_unit(const SourceUnit& unit, const std::string& dir);

}  // namespace hdldiff
