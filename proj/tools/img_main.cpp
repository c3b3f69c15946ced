#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "img/errors.hpp"

using namespace img;
using namespace img::cli;

int main(int argc, char** argv) {
  CLI::App app{"img: iterated monodromy groups of f(x) = 2/(x-1)^2"};
  app.require_subcommand(1);
  app.allow_extras(false);

  std::string format = "text";
  std::optional<std::string> cacheDir, configPath;
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--cache-dir", cacheDir, "directory for cached groups (also IMG_CACHE_DIR)");
  app.add_option("--config", configPath, "key = value file overriding caps");

  int level = 0;
  std::optional<int> n, quickLevel;
  std::string a;
  std::optional<std::uint32_t> primeBound;
  std::optional<unsigned> precision;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;

  auto* group = app.add_subcommand("group", "orders, indices and centralizers of G_n and its subgroups");
  group->add_option("--level", level, "tree level")->required();
  auto* arith = app.add_subcommand("arith", "arithmetic model M_n and the growth table");
  arith->add_option("--level", level, "tree level")->required();
  auto* disc = app.add_subcommand("disc", "discriminant shapes of the iterates");
  disc->add_option("--n", n, "iterate (default: all up to the cap)");
  auto* maxim = app.add_subcommand("maximality", "level-4 maximality verdict at a rational base point");
  maxim->add_option("--a", a, "base point u/v or integer")->required();
  maxim->add_option("--prime-bound", primeBound, "largest prime sampled");
  auto* radical = app.add_subcommand("radical", "radical identities at seeded complex base points");
  radical->add_option("--precision", precision, "working precision in bits");
  radical->add_option("--samples", samples, "number of base points");
  radical->add_option("--seed", seed, "sample seed");
  auto* verify = app.add_subcommand("verify", "run every invariant suite");
  verify->add_option("--level", quickLevel, "quick mode: cap every suite at this level");
  verify->add_option("--prime-bound", primeBound, "largest prime sampled");
  verify->add_option("--precision", precision, "working precision in bits");
  verify->add_option("--samples", samples, "number of radical sample points");
  verify->add_option("--seed", seed, "seed for random suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  Settings s;
  int code = kOk;
  try {
    if (configPath) applyConfigFile(*configPath, s);
    s.format = format;
    if (const char* env = std::getenv("IMG_CACHE_DIR"); env && *env) s.cacheDir = env;
    if (cacheDir) s.cacheDir = *cacheDir;
    if (primeBound) s.primeBound = *primeBound;
    if (precision) s.precision = *precision;
    if (samples) s.samples = *samples;
    if (seed) s.seed = *seed;

    cache::GroupCache cache = s.cacheDir ? cache::GroupCache(*s.cacheDir) : cache::GroupCache();
    Output out;
    if (*group) {
      out = runGroup(s, cache, level);
    } else if (*arith) {
      out = runArith(s, cache, level);
    } else if (*disc) {
      out = runDisc(s, n);
    } else if (*maxim) {
      out = runMaximality(s, cache, a);
    } else if (*radical) {
      out = runRadical(s);
    } else {
      out = runVerify(s, cache, quickLevel);
      if (out.exitCode != kOk)
        for (const auto& id : out.json["failed"]) std::cerr << "failing claim: " << id.get<std::string>() << "\n";
    }
    if (s.format == "json")
      std::cout << out.json.dump(2) << "\n";
    else
      std::cout << out.text;
    code = out.exitCode;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kBadInput;
  } catch (const DegenerateTree& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kBadInput;
  } catch (const InsufficientData& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kBadInput;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    code = kResourceLimit;
  } catch (const VerificationFailure& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    code = kInvariantFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kInvariantFailure;
  }
  return code;
}
