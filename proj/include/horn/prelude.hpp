#pragma once

#include <filesystem>
#include <span>
#include <string_view>

namespace horn {

/// A library source compiled into the binary.
struct PreludeFile {
  std::string_view name;
  std::string_view text;
};

/// In load order.
std::span<const PreludeFile> prelude_files();

/// Writes every prelude file into `dir`, creating it if needed. Throws
/// std::runtime_error on I/O failure.
void extract_prelude(const std::filesystem::path& dir);

}  // namespace horn
