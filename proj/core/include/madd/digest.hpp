#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace madd {

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// Lower-case hex SHA-256 of a file's contents; throws std::runtime_error
/// when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace madd
