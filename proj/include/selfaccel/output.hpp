#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "selfaccel/propagator.hpp"
#include "selfaccel/residual.hpp"
#include "selfaccel/synthesis.hpp"

namespace selfaccel {

/// Shortest round-trip decimal form; "nan" / "inf" for non-finite values.
std::string format_number(double v);

/// Columns x,re,im,density.
void write_field_csv(const ComplexWaveField& field, const std::filesystem::path& path);

/// Generic numeric table with a header row.
void write_table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                     const std::filesystem::path& path);

/// Binary P5 16-bit map, rows = recorded times (earliest first), columns = x,
/// value = round(65535 |Psi|^2 / max |Psi|^2). Writes the JSON sidecar next to it
/// (same stem, .json). Throws InvalidArgument with < 2 stored snapshots,
/// NormalizationError when the map is identically zero, IOFailure on write errors.
void emit_density_pgm(const PropagationRecord& record, const std::filesystem::path& path);

/// gnuplot-friendly "t x density" blocks, columns decimated to at most max_columns.
void write_density_csv(const PropagationRecord& record, const std::filesystem::path& path, int max_columns = 512);

void write_json(const nlohmann::json& value, const std::filesystem::path& path);

nlohmann::json to_json(const ResidualReport& report);
nlohmann::json to_json(const ResidualLadder& ladder);
nlohmann::json to_json(const DecisionRecord& record);
nlohmann::json to_json(const BranchRule& branch);

/// Fixed-width text table of both ladders of a decision.
std::string format_ladder_table(const DecisionRecord& record);

}  // namespace selfaccel
