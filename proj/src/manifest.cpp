#include "nap/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <memory>

#include "nap/error.hpp"

namespace nap {

std::string git_blob_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1)
    throw Error("SHA-1 computation failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string git_blob_hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return git_blob_hash(content);
}

nlohmann::ordered_json input_hashes(const std::filesystem::path& path) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(path))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::ranges::sort(files);
    for (const auto& f : files)
      out.push_back({{"path", f.generic_string()}, {"sha1", git_blob_hash_file(f)}});
  } else {
    out.push_back({{"path", path.generic_string()}, {"sha1", git_blob_hash_file(path)}});
  }
  return out;
}

nlohmann::ordered_json Manifest::to_json() const {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : settings.values()) config[k] = v;
  nlohmann::ordered_json hashes = nlohmann::ordered_json::array();
  for (const auto& in : inputs)
    for (auto& h : input_hashes(in)) hashes.push_back(std::move(h));
  return {{"command", command},
          {"config", config},
          {"seeds", seeds},
          {"inputs", hashes},
          {"outputs", outputs}};
}

void Manifest::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json().dump(2) << '\n';
}

}  // namespace nap
