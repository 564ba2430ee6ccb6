#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "infx/grid.hpp"
#include "infx/solvers.hpp"

namespace infx {

/// CSV with header "x,y,value", one row per node, y outer and x inner, every
/// number printed with 17 significant digits so that reading it back is exact.
void write_field_csv(std::ostream& out, const ScalarField& field, const Grid2D& grid);
void export_field(const ScalarField& field, const Grid2D& grid, const std::filesystem::path& path);

/// Reads a field written by export_field. Throws std::runtime_error on a
/// malformed file, a row count other than nx*ny, or coordinates that do not
/// match the grid.
ScalarField read_field_csv(std::istream& in, const Grid2D& grid);
ScalarField import_field(const Grid2D& grid, const std::filesystem::path& path);

std::string report_to_json(const SolveReport& report);
/// Throws std::runtime_error on malformed JSON or missing step fields.
SolveReport report_from_json(const std::string& text);
/// Indented "key: value" listing of a report.
std::string format_report(const SolveReport& report);

}  // namespace infx
