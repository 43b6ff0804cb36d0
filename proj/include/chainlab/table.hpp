#pragma once

// Plain-text artifacts: CSV tables (header row, 17 significant digits, LF
// line endings), LatticeWindow files and write-then-rename file output.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainlab/lattice.hpp"

namespace chainlab::table {

/// Shortest round-trip-safe text for v: 17 significant digits, '.' decimal
/// point, "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Appends a row; its length must match the header.
    void add(std::vector<double> row);
    std::string to_string() const;
};

/// Parses a CSV with a header row and numeric cells.
CsvTable parse_csv(const std::string& text);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// {"offset": int, "values": [..], "fill": "zero" | "none"}; fill is optional
/// on input and defaults to zero.
nlohmann::json window_to_json(const LatticeWindow& w);
LatticeWindow window_from_json(const nlohmann::json& j);

/// Two columns `site,value` with consecutive sites.
std::string window_to_csv(const LatticeWindow& w);
LatticeWindow window_from_csv(const std::string& text, Fill fill = Fill::zero);

/// Format chosen by extension: .json or .csv.
LatticeWindow load_window(const std::filesystem::path& path);
void save_window(const std::filesystem::path& path, const LatticeWindow& w);

}  // namespace chainlab::table
