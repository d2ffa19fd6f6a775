#include "mgrit_lfa/csv.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>
#include <stdexcept>

namespace mgrit_lfa {

std::string format_cell(const CsvCell& cell) {
    struct Visitor {
        std::string operator()(double x) const {
            if (std::isnan(x)) return "nan";
            if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return buf;
        }
        std::string operator()(std::int64_t x) const { return std::to_string(x); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(bool b) const { return b ? "1" : "0"; }
    };
    return std::visit(Visitor{}, cell);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns, const Metadata& metadata,
                     bool timestamp)
    : n_columns_(columns.size()) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (const auto& [k, v] : metadata) out_ << "# " << k << ": " << v << '\n';
    if (timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        out_ << "# generated: " << buf << '\n';
    }
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
    if (cells.size() != n_columns_) throw std::invalid_argument("csv row has the wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format_cell(cells[i]);
    out_ << '\n';
    ++rows_;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    throw std::out_of_range("csv has no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(static_cast<std::size_t>(column(name))));
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    CsvTable t;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        return cells;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon != std::string::npos && line.size() > 2)
                t.metadata.emplace_back(line.substr(2, colon - 2),
                                        colon + 2 <= line.size() ? line.substr(colon + 2) : std::string());
            continue;
        }
        if (t.columns.empty()) {
            t.columns = split(line);
            continue;
        }
        auto cells = split(line);
        if (cells.size() != t.columns.size()) throw std::runtime_error("csv row width differs from header");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

}  // namespace mgrit_lfa
