#include "img/cache.hpp"

#include <bit>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "img/errors.hpp"

namespace img::cache {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

LevelGroup withGenerators(const LevelGroup& g) {
  return LevelGroup(g.level(), selfsim::greedyGenerators(g), g.elements());
}

}  // namespace

std::string serializeGroup(const std::string& name, const LevelGroup& g) {
  std::string body = name + " " + std::to_string(g.level()) + " " + std::to_string(g.order()) + "\n";
  for (const auto& e : g.elements()) body += treeauto::encode(e) + "\n";
  return body + "# fnv1a64 " + hex64(fnv1a64(body)) + "\n";
}

std::optional<LevelGroup> parseGroup(const std::string& text, const std::string& name, int level) {
  const auto trailer = text.rfind("# fnv1a64 ");
  if (trailer == std::string::npos) return std::nullopt;
  const std::string body = text.substr(0, trailer);
  std::string stored = text.substr(trailer + 10);
  while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
  if (stored != hex64(fnv1a64(body))) return std::nullopt;

  std::istringstream in(body);
  std::string header;
  if (!std::getline(in, header)) return std::nullopt;
  std::istringstream hs(header);
  std::string hName, extra;
  int hLevel = -1;
  std::size_t order = 0;
  if (!(hs >> hName >> hLevel >> order) || (hs >> extra) || hName != name || hLevel != level) return std::nullopt;
  std::vector<treeauto::Portrait> elems;
  std::string line;
  try {
    while (std::getline(in, line)) {
      auto p = treeauto::decode(line);
      if (p.level() != level) return std::nullopt;
      if (!elems.empty() && !(elems.back() < p)) return std::nullopt;
      elems.push_back(std::move(p));
    }
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
  if (elems.size() != order) return std::nullopt;
  try {
    LevelGroup g = withGenerators(LevelGroup(level, {}, std::move(elems)));
    if (selfsim::closure(level, g.generators(), g.order()) == g) return g;
  } catch (const ResourceLimit&) {
  }
  return std::nullopt;
}

std::string cacheFileName(const std::string& system, const std::string& name, int level) {
  auto clean = [](const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-') ? c : '_';
    return out;
  };
  return clean(system) + "__" + clean(name) + "__" + std::to_string(level) + ".txt";
}

GroupCache::GroupCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(*dir_, ec);
  if (ec) throw InvalidArgument("cannot create cache directory " + dir_->string() + ": " + ec.message());
}

std::optional<LevelGroup> GroupCache::load(const std::string& system, const std::string& name, int level) {
  if (!dir_) return std::nullopt;
  const fs::path path = *dir_ / cacheFileName(system, name, level);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream text;
  text << in.rdbuf();
  auto g = parseGroup(text.str(), name, level);
  if (g)
    ++hits_;
  else
    ++rejected_;
  return g;
}

void GroupCache::store(const std::string& system, const std::string& name, int level, const LevelGroup& g) {
  if (!dir_) return;
  const fs::path path = *dir_ / cacheFileName(system, name, level);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;  // advisory
    out << serializeGroup(name, g);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
}

LevelGroup GroupCache::fetch(const std::string& system, const std::string& name, int level,
                             const std::function<LevelGroup()>& compute) {
  if (auto g = load(system, name, level)) return *g;
  LevelGroup g = compute();
  store(system, name, level, g);
  return g;
}

selfsim::GeometricData cachedGeometricData(GroupCache& cache, int level) {
  const auto sys = selfsim::builtinSystemF();
  static const char* names[] = {"G", "H1", "H2", "H3", "U", "comm"};
  std::vector<std::optional<LevelGroup>> got;
  for (const char* n : names) got.push_back(cache.load(sys.name(), n, level));
  bool complete = true;
  for (const auto& g : got) complete = complete && g.has_value();
  if (complete) return {level, *got[0], *got[1], *got[2], *got[3], *got[4], *got[5]};
  selfsim::GeometricData d = selfsim::geometricData(sys, level);
  const LevelGroup* groups[] = {&d.G, &d.H1, &d.H2, &d.H3, &d.U, &d.commutator};
  for (std::size_t i = 0; i < 6; ++i) cache.store(sys.name(), names[i], level, *groups[i]);
  return d;
}

namespace {

constexpr const char* kModelSystem = "arith";

std::optional<arithmodel::ArithLevelModel> loadModel(GroupCache& cache, int level) {
  auto m = cache.load(kModelSystem, "M", level);
  auto phi = cache.load(kModelSystem, "Frattini(M)", level);
  if (!m || !phi || m->order() % phi->order() != 0) return std::nullopt;
  const std::size_t quotient = m->order() / phi->order();
  if (!std::has_single_bit(quotient)) return std::nullopt;
  arithmodel::ArithLevelModel model;
  model.level = level;
  for (std::size_t i = 0; i + 1 < quotient; ++i) {
    auto h = cache.load(kModelSystem, arithmodel::maximalSubgroupName(i), level);
    if (!h) return std::nullopt;
    model.maximalSubgroups.push_back(std::move(*h));
  }
  const auto geo = cachedGeometricData(cache, level);
  model.M = std::move(*m);
  model.frattini = std::move(*phi);
  model.G = geo.G;
  model.U = geo.U;
  return model;
}

}  // namespace

arithmodel::ArithLevelModel cachedModel(GroupCache& cache, int level, const arithmodel::ModelOptions& options) {
  if (level < 1 || level > 6) throw InvalidArgument("model level must lie in 1..6, got " + std::to_string(level));
  if (level > options.levelCap || (level == 6 && !options.allowLevel6))
    throw ResourceLimit("model level " + std::to_string(level) + " exceeds the configured cap");
  if (auto m = loadModel(cache, level)) return *m;
  auto chain = arithmodel::buildModelChain(level, options);
  for (const auto& m : chain) {
    cache.store(kModelSystem, "M", m.level, m.M);
    cache.store(kModelSystem, "Frattini(M)", m.level, m.frattini);
    for (std::size_t i = 0; i < m.maximalSubgroups.size(); ++i)
      cache.store(kModelSystem, arithmodel::maximalSubgroupName(i), m.level, m.maximalSubgroups[i]);
  }
  return chain.back();
}

}  // namespace img::cache
