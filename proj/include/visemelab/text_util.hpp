#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace visemelab {

/// Drops everything from the first '#'.
std::string_view strip_comment(std::string_view line);

/// Splits on ASCII whitespace, dropping empty fields.
std::vector<std::string> split_fields(std::string_view line);

std::string trim(std::string_view s);

std::string read_text_file(const std::string& path);

/// Writes to `path.tmp.<pid>` and renames over `path`, so readers never see a
/// half-written file.
void write_file_atomic(const std::string& path, std::string_view contents);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace visemelab
