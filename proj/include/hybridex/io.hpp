#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace hybridex {

/// Whole-file read; throws IoError.
std::string read_text_file(const std::filesystem::path& path);

/// Creates parent directories as needed; throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace hybridex
