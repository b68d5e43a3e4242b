#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nap/config.hpp"

namespace nap {

/// SHA-1 of "blob <size>\0<content>", as `git hash-object` prints it.
std::string git_blob_hash(std::string_view content);
std::string git_blob_hash_file(const std::filesystem::path& path);

/// Hashes of an input: one entry for a file, one per regular file
/// (sorted by relative path) for a directory.
nlohmann::ordered_json input_hashes(const std::filesystem::path& path);

struct Manifest {
  std::string command;
  Settings settings;
  nlohmann::ordered_json seeds = nlohmann::ordered_json::object();
  std::vector<std::filesystem::path> inputs;
  std::vector<std::string> outputs;

  nlohmann::ordered_json to_json() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace nap
