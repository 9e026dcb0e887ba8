#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace techconv {

std::string read_file(const std::filesystem::path& path);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// RFC-4180 quoting when the field needs it.
std::string csv_field(std::string_view s);

}  // namespace techconv
