#ifndef IMG_TOOLS_COMMANDS_HPP
#define IMG_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "img/cache.hpp"
#include "img/report.hpp"
#include "json.hpp"

namespace img::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kInvariantFailure = 1, kBadInput = 2, kResourceLimit = 3 };

struct Settings {
  std::string format = "text";
  std::optional<std::string> cacheDir;
  int groupCap = 6;
  int modelCap = 5;
  int discCap = 4;
  bool allowLevel6 = false;
  std::uint32_t primeBound = 10000;
  unsigned precision = 256;
  std::size_t samples = 20;
  std::uint64_t seed = 1;
};

/// key = value lines; '#' starts a comment. Unknown keys are rejected.
void applyConfigFile(const std::string& path, Settings& s);

struct Output {
  Json json;
  std::string text;
  int exitCode = kOk;
};

Json reportToJson(const Report& r);

Output runGroup(const Settings& s, cache::GroupCache& cache, int level);
Output runArith(const Settings& s, cache::GroupCache& cache, int level);
Output runDisc(const Settings& s, std::optional<int> n);
Output runMaximality(const Settings& s, cache::GroupCache& cache, const std::string& a);
Output runRadical(const Settings& s);
/// quickLevel caps every suite at that level.
Output runVerify(const Settings& s, cache::GroupCache& cache, std::optional<int> quickLevel);

}  // namespace img::cli

#endif  // IMG_TOOLS_COMMANDS_HPP
