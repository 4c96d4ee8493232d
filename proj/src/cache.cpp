#include "galois/cache.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace galois {

using json = nlohmann::json;

namespace {

std::string sha256_hex(std::string_view data)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* const hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

} // namespace

ResultCache::ResultCache(std::filesystem::path dir, std::string version)
: dir_(std::move(dir)), version_(std::move(version))
{}

std::string ResultCache::make_key(std::string_view operation, std::string_view canonical_input,
                                  std::string_view bounds)
{
  std::string material;
  for (const auto part : {operation, canonical_input, bounds}) {
    material += std::to_string(part.size());
    material += ':';
    material += part;
  }
  return sha256_hex(material);
}

std::filesystem::path ResultCache::path_for(const std::string& key) const
{
  return dir_ / (key + ".json");
}

std::optional<CacheEntry> ResultCache::load(const std::string& key, std::ostream& warnings) const
{
  const auto path = path_for(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    const auto j = json::parse(buffer.str());
    CacheEntry e{j.at("key").get<std::string>(), j.at("value").get<std::string>(), j.at("exit_code").get<int>(),
                 j.at("tool_version").get<std::string>()};
    if (e.key != key) {
      throw std::runtime_error("key mismatch");
    }
    if (e.tool_version != version_) {
      return std::nullopt;
    }
    return e;
  } catch (const std::exception& ex) {
    warnings << "warning: ignoring corrupt cache entry " << path.string() << " (" << ex.what() << ")\n";
    return std::nullopt;
  }
}

void ResultCache::store(CacheEntry entry) const
{
  entry.tool_version = version_;
  std::filesystem::create_directories(dir_);
  const json j = {{"key", entry.key},
                  {"value", entry.value},
                  {"exit_code", entry.exit_code},
                  {"tool_version", entry.tool_version}};
  const auto final_path = path_for(entry.key);
  auto tmp = final_path;
  tmp += ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << j.dump() << "\n";
    if (!out) {
      throw std::runtime_error("cannot write cache entry " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, final_path);
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag)
{
  if (flag && !flag->empty()) {
    return std::filesystem::path(*flag);
  }
  if (const char* env = std::getenv(cache_dir_variable); env && *env) {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

} // namespace galois
