#pragma once

// Result writers: CSV with a fixed column set per command, whitespace
// plot-data files, and the error JSON. All writes are atomic (temp file in
// the target directory, then rename) and floating-point values are printed
// with 12 significant digits so identical runs produce identical bytes.

#include <string>
#include <vector>

namespace kppfbcli {

std::string fmt(double v);

void write_file_atomic(const std::string& path, const std::string& content);

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

/// Whitespace-separated columns with a single header line (plot-ready).
void emit_plotdata(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns, const std::string& path);

void write_error_json(const std::string& path, int code, const std::string& message,
                      const std::string& context);

std::string json_escape(const std::string& s);

} // namespace kppfbcli
