/// @file csv.hpp
/// @brief CSV output: `#` metadata lines, one header row, then data rows.
///
/// Floating-point cells use 17 significant digits so values round-trip exactly.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mgrit_lfa {

using CsvCell = std::variant<double, std::int64_t, std::string, bool>;
using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string format_cell(const CsvCell& cell);

class CsvWriter {
public:
    /// The timestamp sits on its own comment line so the rest is reproducible.
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns, const Metadata& metadata,
              bool timestamp = true);

    void row(const std::vector<CsvCell>& cells);
    std::size_t rows_written() const { return rows_; }

private:
    std::ofstream out_;
    std::size_t n_columns_;
    std::size_t rows_ = 0;
};

struct CsvTable {
    Metadata metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace mgrit_lfa
