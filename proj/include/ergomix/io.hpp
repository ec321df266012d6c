#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace ergomix {

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`, so readers never
/// observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace ergomix
