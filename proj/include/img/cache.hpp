#ifndef IMG_CACHE_HPP
#define IMG_CACHE_HPP

// On-disk cache of enumerated groups. One text file per (system, name, level):
//
//   name level order
//   <wire string>        (sorted, one per line)
//   ...
//   # fnv1a64 <hex>      (checksum of everything above)
//
// Files that fail validation are ignored and rewritten.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "img/arith_model.hpp"
#include "img/self_sim.hpp"

namespace img::cache {

using selfsim::LevelGroup;

std::uint64_t fnv1a64(std::string_view data);

std::string serializeGroup(const std::string& name, const LevelGroup& g);
/// nullopt if the header, the element lines or the checksum do not match.
std::optional<LevelGroup> parseGroup(const std::string& text, const std::string& name, int level);

/// "F", "Frattini(M)", 4 -> "F__Frattini_M___4.txt"
std::string cacheFileName(const std::string& system, const std::string& name, int level);

class GroupCache {
 public:
  GroupCache() = default;  // disabled
  explicit GroupCache(std::filesystem::path dir);

  bool enabled() const { return dir_.has_value(); }
  const std::optional<std::filesystem::path>& directory() const { return dir_; }
  std::optional<LevelGroup> load(const std::string& system, const std::string& name, int level);
  void store(const std::string& system, const std::string& name, int level, const LevelGroup& g);
  LevelGroup fetch(const std::string& system, const std::string& name, int level,
                   const std::function<LevelGroup()>& compute);

  std::size_t hits() const { return hits_; }
  std::size_t rejected() const { return rejected_; }

 private:
  std::optional<std::filesystem::path> dir_;
  std::size_t hits_ = 0;
  std::size_t rejected_ = 0;
};

selfsim::GeometricData cachedGeometricData(GroupCache& cache, int level);

/// Loads M, Frattini(M) and Mmax-xx for one level, building the chain and
/// storing every level when something is missing.
arithmodel::ArithLevelModel cachedModel(GroupCache& cache, int level, const arithmodel::ModelOptions& options = {});

}  // namespace img::cache

#endif  // IMG_CACHE_HPP
