#pragma once

// On-disk result cache. Entries are keyed by a SHA-256 of the operation,
// its canonical input and its bounds, and carry the tool version; an entry
// from another version is a miss. Writes go through a temporary file and a
// rename so readers never see a partial entry.

#include "galois/io.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace galois {

inline constexpr const char* cache_dir_variable = "GALOIS_CACHE_DIR";

struct CacheEntry
{
  std::string key;
  std::string value;
  int exit_code = 0;
  std::string tool_version;
};

class ResultCache
{
public:
  explicit ResultCache(std::filesystem::path dir, std::string version = tool_version);

  static std::string make_key(std::string_view operation, std::string_view canonical_input,
                              std::string_view bounds);

  /// Miss on absent or stale entries; corrupt entries are reported on
  /// `warnings` and treated as misses.
  std::optional<CacheEntry> load(const std::string& key, std::ostream& warnings) const;
  void store(CacheEntry entry) const;

  std::filesystem::path path_for(const std::string& key) const;
  const std::filesystem::path& dir() const { return dir_; }

private:
  std::filesystem::path dir_;
  std::string version_;
};

/// The flag wins over the environment variable; nullopt disables caching.
std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag);

} // namespace galois
