#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace beliefcoop::cli {

using Json = nlohmann::ordered_json;

/// Output file could not be created or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest text that reads back to the same double ("%.17g").
std::string format_number(double x);

/// Empty string for an absent value.
std::string format_number(const std::optional<double>& x);

/// Comma-separated table built row by row; fields are not quoted.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add(std::vector<std::string> row);
    std::size_t rows() const noexcept { return rows_; }
    std::string str() const;

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

/// Writes `content` to `dir / name`, creating `dir` if needed.
/// Returns `name` so callers can collect manifest entries.
std::string write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content);

Json read_json(const std::filesystem::path& path);

}  // namespace beliefcoop::cli
