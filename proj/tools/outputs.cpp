#include "outputs.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace kppfbcli {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

void emit_plotdata(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns, const std::string& path) {
    std::ostringstream os;
    for (size_t i = 0; i < header.size(); ++i) os << (i ? " " : "# ") << header[i];
    os << "\n";
    const size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns)
        if (col.size() != rows)
            throw std::runtime_error("plot data columns have mismatched lengths");
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c) os << (c ? " " : "") << fmt(columns[c][r]);
        os << "\n";
    }
    write_file_atomic(path, os.str());
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

void write_error_json(const std::string& path, int code, const std::string& message,
                      const std::string& context) {
    std::ostringstream os;
    os << "{\n  \"code\": " << code << ",\n  \"message\": \"" << json_escape(message)
       << "\",\n  \"context\": \"" << json_escape(context) << "\"\n}\n";
    write_file_atomic(path, os.str());
}

} // namespace kppfbcli
