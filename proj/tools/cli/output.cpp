#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace beliefcoop::cli {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_number(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
    add(std::move(header));
    rows_ = 0;
}

void CsvTable::add(std::vector<std::string> row) {
    if (row.size() != columns_) throw std::logic_error("csv row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) text_ += ',';
        text_ += row[i];
    }
    text_ += '\n';
    ++rows_;
}

std::string CsvTable::str() const { return text_; }

std::string write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
    return name;
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
        throw IoError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

}  // namespace beliefcoop::cli
