#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace dcdiff::cli {

/// Lowercase hex SHA-256 of a file's bytes.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

/// Writes dir/manifest.json: the config echo, tool and library versions, the
/// stages run, and the size and SHA-256 of every other file in dir, sorted by
/// name. Nothing time-dependent is recorded, so reruns give identical bytes.
void write_manifest(const std::filesystem::path& dir, const nlohmann::json& config, const std::string& stages);

}  // namespace dcdiff::cli
