#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "img/arith_model.hpp"
#include "img/constant_field.hpp"
#include "img/errors.hpp"
#include "img/maximality.hpp"
#include "img/poly_arith.hpp"
#include "img/self_sim.hpp"
#include "img/tree_auto.hpp"

namespace img::cli {

namespace {

using treeauto::CycleType;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

long long parseInteger(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("config key '" + key + "' needs an integer, got '" + value + "'");
}

Json cycleTypeJson(const CycleType& t) { return Json(t.parts); }

Json tableJson(const std::set<CycleType>& table) {
  Json out = Json::array();
  for (const auto& t : table) out.push_back(cycleTypeJson(t));
  return out;
}

std::string reportText(const Report& r) {
  std::ostringstream os;
  os << r.title << "\n";
  for (const auto& c : r.checks) {
    os << (c.passed ? "  PASS " : "  FAIL ") << c.id << "  " << c.claim;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

arithmodel::ModelOptions modelOptions(const Settings& s) {
  arithmodel::ModelOptions o;
  o.levelCap = s.modelCap;
  o.allowLevel6 = s.allowLevel6;
  return o;
}

std::vector<arithmodel::ArithLevelModel> modelChain(const Settings& s, cache::GroupCache& cache, int n) {
  const auto opts = modelOptions(s);
  if (!cache.enabled()) return arithmodel::buildModelChain(n, opts);
  auto top = cache::cachedModel(cache, n, opts);
  std::vector<arithmodel::ArithLevelModel> out;
  for (int k = 1; k < n; ++k) out.push_back(cache::cachedModel(cache, k, opts));
  out.push_back(std::move(top));
  return out;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace

void applyConfigFile(const std::string& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(path + ":" + std::to_string(lineNo) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "group_cap") {
      s.groupCap = static_cast<int>(parseInteger(key, value));
    } else if (key == "model_cap") {
      s.modelCap = static_cast<int>(parseInteger(key, value));
    } else if (key == "disc_cap") {
      s.discCap = static_cast<int>(parseInteger(key, value));
    } else if (key == "allow_level6") {
      if (value != "true" && value != "false") throw InvalidArgument("allow_level6 must be true or false");
      s.allowLevel6 = value == "true";
    } else if (key == "prime_bound") {
      s.primeBound = static_cast<std::uint32_t>(parseInteger(key, value));
    } else if (key == "precision") {
      s.precision = static_cast<unsigned>(parseInteger(key, value));
    } else if (key == "samples") {
      s.samples = static_cast<std::size_t>(parseInteger(key, value));
    } else if (key == "seed") {
      s.seed = static_cast<std::uint64_t>(parseInteger(key, value));
    } else if (key == "cache_dir") {
      s.cacheDir = value;
    } else if (key == "format") {
      s.format = value;
    } else {
      throw InvalidArgument(path + ":" + std::to_string(lineNo) + ": unknown key '" + key + "'");
    }
  }
  if (s.groupCap < 1 || s.groupCap > 8) throw InvalidArgument("group_cap must lie in 1..8");
  if (s.modelCap < 1 || s.modelCap > 6) throw InvalidArgument("model_cap must lie in 1..6");
  if (s.discCap < 1 || s.discCap > 5) throw InvalidArgument("disc_cap must lie in 1..5");
}

Json reportToJson(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"id", c.id}, {"claim", c.claim}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"title", r.title}, {"passed", r.allPassed()}, {"checks", checks}};
}

Output runGroup(const Settings& s, cache::GroupCache& cache, int level) {
  if (level < 1) throw InvalidArgument("--level must be at least 1");
  if (level > treeauto::kMaxLevel) throw ResourceLimit("group level above " + std::to_string(treeauto::kMaxLevel));
  (void)s;
  const auto d = cache::cachedGeometricData(cache, level);
  const auto sys = selfsim::builtinSystemF();
  Output out;
  Json subgroups = Json::array();
  std::ostringstream text;
  text << "geometric group at level " << level << "\n";
  text << "  " << pad("subgroup", 10) << pad("order", 8) << "index\n";
  const std::vector<std::pair<std::string, const selfsim::LevelGroup*>> named{
      {"G", &d.G}, {"H1", &d.H1}, {"H2", &d.H2}, {"H3", &d.H3}, {"U", &d.U}, {"[G,G]", &d.commutator}};
  for (const auto& [name, g] : named) {
    const std::size_t index = selfsim::subgroupIndex(d.G, *g);
    subgroups.push_back({{"name", name}, {"order", g->order()}, {"index", index}});
    text << "  " << pad(name, 10) << pad(std::to_string(g->order()), 8) << index << "\n";
  }
  Json centralizers = Json::object();
  text << "  centralizers:";
  for (const char* a : {"a1", "a2", "a3"}) {
    const std::size_t c = selfsim::centralizer(d.G, selfsim::unfoldGenerator(sys, a, level)).order();
    centralizers[a] = c;
    text << " |C(" << a << ")| = " << c;
  }
  const std::size_t z = selfsim::center(d.G).order();
  const auto inv = selfsim::abelianInvariants(d.G);
  text << "\n  |Z(G)| = " << z << "\n  abelian invariants: (";
  for (std::size_t i = 0; i < inv.size(); ++i) text << (i ? ", " : "") << inv[i];
  text << ")\n";
  out.json = {{"level", level}, {"order", d.G.order()}, {"subgroups", subgroups}, {"centralizers", centralizers},
              {"center_order", z}, {"abelian_invariants", inv}};
  if (level >= 3) {
    const Report r = selfsim::verifyGeometricStructure(level);
    out.json["checks"] = reportToJson(r);
    text << reportText(r);
    if (!r.allPassed()) out.exitCode = kInvariantFailure;
  }
  out.text = text.str();
  return out;
}

Output runArith(const Settings& s, cache::GroupCache& cache, int level) {
  if (level < 1 || level > 6) throw InvalidArgument("--level must lie in 1..6");
  if (level > s.modelCap || (level == 6 && !s.allowLevel6))
    throw ResourceLimit("model level " + std::to_string(level) + " exceeds the configured cap");
  const auto chain = modelChain(s, cache, level);
  const auto& m = chain.back();
  Output out;
  std::ostringstream text;
  text << "arithmetic model at level " << level << "\n";
  text << "  |M| = " << m.M.order() << "  |G| = " << m.G.order() << "  |U| = " << m.U.order()
       << "  |Frattini(M)| = " << m.frattini.order() << "  maximal subgroups: " << m.maximalSubgroups.size() << "\n";
  out.json = {{"level", level},
              {"order_M", m.M.order()},
              {"order_G", m.G.order()},
              {"order_U", m.U.order()},
              {"order_frattini", m.frattini.order()},
              {"frattini_rank", arithmodel::frattiniRank(m.M)},
              {"maximal_subgroups", m.maximalSubgroups.size()}};
  if (m.stats.candidates > 0) {
    out.json["stats"] = {{"candidates", m.stats.candidates},
                         {"pass_ratio", m.stats.passRatio},
                         {"pass_normalize_G", m.stats.passNormalizeG},
                         {"pass_normalize_U", m.stats.passNormalizeU}};
    text << "  candidates " << m.stats.candidates << ", ratio " << m.stats.passRatio << ", normalize G "
         << m.stats.passNormalizeG << ", normalize U " << m.stats.passNormalizeU << "\n";
  }
  const auto table = arithmodel::cycleTypeTable(m.M);
  out.json["cycle_types"] = tableJson(table);
  text << "  cycle types:";
  for (const auto& t : table) text << " " << t.toString();
  text << "\n";

  const auto growth = arithmodel::growthReport(chain);
  Json rows = Json::array();
  text << "  " << pad("n", 4) << pad("|G_n|", 8) << pad("|M_n|", 8) << pad("2^2n", 8) << "log2|M_n|/(2^n-1)\n";
  for (const auto& row : growth.rows) {
    rows.push_back({{"n", row.level},
                    {"order_G", row.orderG},
                    {"order_M", row.orderM},
                    {"bound", row.bound},
                    {"dimension_ratio", row.dimensionRatio}});
    std::ostringstream ratio;
    ratio.precision(4);
    ratio << row.dimensionRatio;
    text << "  " << pad(std::to_string(row.level), 4) << pad(std::to_string(row.orderG), 8)
         << pad(std::to_string(row.orderM), 8) << pad(std::to_string(row.bound), 8) << ratio.str() << "\n";
  }
  out.json["growth"] = rows;

  Report checks = arithmodel::verifyModelProperties(m, chain.size() > 1 ? &chain[chain.size() - 2] : nullptr);
  for (const auto& c : growth.checks.checks) checks.checks.push_back(c);
  if (level <= 4)
    for (const auto& c : arithmodel::bruteNormalizerCrossCheck(level).checks) checks.checks.push_back(c);
  checks.title = "model checks at level " + std::to_string(level);
  out.json["checks"] = reportToJson(checks);
  text << reportText(checks);
  if (!checks.allPassed()) out.exitCode = kInvariantFailure;
  out.text = text.str();
  return out;
}

Output runDisc(const Settings& s, std::optional<int> n) {
  if (n && *n < 1) throw InvalidArgument("--n must be at least 1");
  if (n && *n > s.discCap) throw ResourceLimit("--n " + std::to_string(*n) + " exceeds the discriminant cap " + std::to_string(s.discCap));
  const int lo = n ? *n : 1, hi = n ? *n : s.discCap;
  Output out;
  Json rows = Json::array();
  std::ostringstream text;
  for (int k = lo; k <= hi; ++k) {
    const auto shape = polyarith::discriminantShape(k);
    const auto meta = polyarith::iterateMetadata(k);
    rows.push_back({{"n", k},
                    {"shape", shape.toString()},
                    {"sign", shape.sign},
                    {"power_of_2", shape.c},
                    {"power_of_t", shape.a},
                    {"power_of_2_minus_t", shape.b},
                    {"D", meta.D.get_str()}});
    text << "n=" << k << "  " << shape.toString() << "  D_n = " << meta.D.get_str() << "\n";
  }
  out.json = {{"rows", rows}};
  out.text = text.str();
  return out;
}

Output runMaximality(const Settings& s, cache::GroupCache& cache, const std::string& aText) {
  const mpq_class a = polyarith::parseRational(aText);
  maximality::validateBasePoint(a);
  auto opts = modelOptions(s);
  opts.levelCap = std::max(opts.levelCap, 4);
  const auto tables = maximality::tablesFromModel(cache::cachedModel(cache, 4, opts));
  const auto v = maximality::maximalityVerdict(a, s.primeBound, tables);

  Json parts = Json::object();
  for (std::size_t i = 0; i < 4; ++i)
    parts[maximality::SquareClassResult::kLabels[i]] = v.squareClass.parts[i].get_str();
  Json dependency = Json::array();
  for (int i : v.squareClass.dependency) dependency.push_back(maximality::SquareClassResult::kLabels[static_cast<std::size_t>(i)]);
  Json eliminations = Json::array();
  for (const auto& [i, o] : v.elimination.eliminated)
    eliminations.push_back({{"subgroup", arithmodel::maximalSubgroupName(i)},
                            {"prime", o.prime},
                            {"cycle_type", cycleTypeJson(o.type)}});
  Json surviving = Json::array();
  for (std::size_t k = 0; k < v.elimination.surviving.size(); ++k)
    surviving.push_back({{"subgroup", arithmodel::maximalSubgroupName(v.elimination.surviving[k])},
                         {"cycle_types", tableJson(v.survivorTables[k])}});

  Output out;
  out.json = {{"a", polyarith::formatRational(a)},
              {"verdict", maximality::verdictName(v.kind)},
              {"square_class", {{"passed", v.squareClass.passed}, {"parts", parts}, {"dependency", dependency}}},
              {"eliminations", eliminations},
              {"primes_tried", v.primesTried},
              {"observations", v.observations},
              {"prime_bound", s.primeBound},
              {"surviving", surviving}};
  if (!v.reason.empty()) out.json["reason"] = v.reason;
  if (!v.derivation.empty()) out.json["derivation"] = v.derivation;

  std::ostringstream text;
  text << "a = " << polyarith::formatRational(a) << ": " << maximality::verdictName(v.kind) << "\n";
  text << "  squarefree parts (-1, 2, a, 2-a):";
  for (const auto& p : v.squareClass.parts) text << " " << p.get_str();
  text << "\n";
  if (!v.reason.empty()) text << "  " << v.reason << "\n";
  for (const auto& line : v.derivation) text << "    " << line << "\n";
  if (v.squareClass.passed) {
    text << "  primes tried " << v.primesTried << ", usable " << v.observations << "\n";
    for (const auto& [i, o] : v.elimination.eliminated)
      text << "  " << arithmodel::maximalSubgroupName(i) << " eliminated at p = " << o.prime << " by "
           << o.type.toString() << "\n";
    for (std::size_t k = 0; k < v.elimination.surviving.size(); ++k) {
      text << "  " << arithmodel::maximalSubgroupName(v.elimination.surviving[k]) << " survives; its types:";
      for (const auto& t : v.survivorTables[k]) text << " " << t.toString();
      text << "\n";
    }
  }
  out.text = text.str();
  return out;
}

Output runRadical(const Settings& s) {
  if (s.samples < 1 || s.samples > 10000) throw InvalidArgument("--samples must lie in 1..10000");
  if (s.precision < 64 || s.precision > 65536) throw InvalidArgument("--precision must lie in 64..65536 bits");
  const auto points = constantfield::samplePoints(s.samples, s.seed, s.precision);
  constantfield::PrecisionScope scope(s.precision);
  Output out;
  Json rows = Json::array();
  std::ostringstream text;
  text << "radical identities, " << s.precision << " bits, tolerance "
       << constantfield::toleranceFor(s.precision).str(3, std::ios_base::scientific) << "\n";
  for (const auto& t0 : points) {
    const auto tree = constantfield::preimageTreeNumeric(t0, 3, s.precision);
    const auto rec = constantfield::maxRecursionResidual(tree);
    const auto res = constantfield::radicalIdentityResiduals(t0, s.precision);
    Json residuals = Json::array();
    text << "  t0 = " << pad(t0.toString(12), 36) << " recursion " << rec.str(3, std::ios_base::scientific);
    for (std::size_t i = 0; i < 4; ++i) {
      residuals.push_back(res.relative[i].str(3, std::ios_base::scientific));
      text << "  (" << i + 1 << ") " << res.relative[i].str(3, std::ios_base::scientific);
    }
    text << "\n";
    rows.push_back({{"t0", t0.toString(20)},
                    {"recursion", rec.str(3, std::ios_base::scientific)},
                    {"residuals", residuals}});
  }
  const Report r = constantfield::verifyIdentitySamples(s.samples, s.seed, s.precision);
  out.json = {{"precision", s.precision}, {"seed", s.seed}, {"points", rows}, {"checks", reportToJson(r)}};
  text << reportText(r);
  if (!r.allPassed()) out.exitCode = kInvariantFailure;
  out.text = text.str();
  return out;
}

Output runVerify(const Settings& s, cache::GroupCache& cache, std::optional<int> quickLevel) {
  if (quickLevel && (*quickLevel < 1 || *quickLevel > 8)) throw InvalidArgument("--level must lie in 1..8");
  const int cap = quickLevel.value_or(8);
  const int groupMax = std::min(s.groupCap, cap);
  const int modelMax = std::min(s.modelCap, cap);
  const int discMax = std::min(s.discCap, cap);
  const bool quick = quickLevel.has_value();

  Json claims = Json::array();
  std::vector<std::string> failing;
  std::ostringstream text;
  auto record = [&](const std::string& prefix, const std::string& suffix, const Report& r) {
    for (const auto& c : r.checks) {
      const std::string id = prefix + "." + c.id + suffix;
      claims.push_back({{"id", id}, {"passed", c.passed}, {"claim", c.claim}, {"detail", c.detail}});
      text << (c.passed ? "PASS " : "FAIL ") << id << "  " << c.claim << "\n";
      if (!c.passed) failing.push_back(id);
    }
  };
  auto at = [](int n) { return "@" + std::to_string(n); };

  for (int n = 1; n <= std::min(3, cap); ++n) record("treeauto.conjugacy", at(n), treeauto::verifyConjugacyBruteForce(n));
  record("treeauto.random", "", treeauto::randomCrossChecks(quick ? 1000 : 10000, s.seed, std::min(7, std::max(cap, 1))));

  for (int n = 1; n <= groupMax; ++n) record("selfsim.presentation", at(n), selfsim::verifyGeometricPresentation(n));
  for (int n = 1; n <= std::min(3, cap); ++n) record("selfsim.triple", at(n), selfsim::verifyTripleTheorem(n));
  for (int n = 3; n <= groupMax; ++n) record("selfsim.structure", at(n), selfsim::verifyGeometricStructure(n));

  const auto chain = modelChain(s, cache, modelMax);
  for (std::size_t i = 0; i < chain.size(); ++i)
    record("arithmodel.model", at(chain[i].level),
           arithmodel::verifyModelProperties(chain[i], i > 0 ? &chain[i - 1] : nullptr));
  record("arithmodel.growth", "", arithmodel::growthReport(chain).checks);
  for (int n = 1; n <= std::min(4, modelMax); ++n)
    record("arithmodel.normalizer", at(n), arithmodel::bruteNormalizerCrossCheck(n));
  {
    Report r;
    for (const auto& m : chain) {
      const std::string lv = " [n=" + std::to_string(m.level) + "]";
      const auto viaKernels = arithmodel::frattiniByIndexTwoSubgroups(m.M);
      r.add("frattini-agree@" + std::to_string(m.level), "Frattini subgroup via squares and commutators equals the intersection of index-2 subgroups" + lv,
            viaKernels == m.frattini);
    }
    if (modelMax >= 4) {
      const auto& m4 = chain[3];
      r.add("frattini-rank@4", "Frattini quotient of M_4 is elementary abelian of rank 4 with 15 maximal subgroups",
            arithmodel::frattiniRank(m4.M) == 4 && m4.maximalSubgroups.size() == 15,
            "rank " + std::to_string(arithmodel::frattiniRank(m4.M)) + ", " + std::to_string(m4.maximalSubgroups.size()) +
                " maximal subgroups");
      r.add("order@4", "|M_4| = 2^8", m4.M.order() == 256, std::to_string(m4.M.order()));
    }
    if (modelMax >= 5) {
      const auto& m5 = chain[4];
      r.add("order@5", "|M_5| = 2^10", m5.M.order() == 1024, std::to_string(m5.M.order()));
      r.add("constant-field-ratio@5", "|M_5| / |G_5| = 8", m5.M.order() == 8 * m5.G.order(),
            std::to_string(m5.M.order()) + " / " + std::to_string(m5.G.order()));
    }
    record("arithmodel", "", r);
  }

  record("polyarith.iterates", "", polyarith::verifyIterateInvariants(std::min(8, cap), std::min(6, cap), std::min(5, cap)));
  record("polyarith.disc", "", polyarith::verifyDiscriminantShapes(discMax));
  const std::vector<mpq_class> points{polyarith::parseRational("5"), polyarith::parseRational("-1"),
                                      polyarith::parseRational("7/3"), polyarith::parseRational("-5/2")};
  record("polyarith.specialization", "", polyarith::verifySpecializationConsistency(std::min(3, discMax), std::min(4, discMax), points));
  record("polyarith.resultant", "", polyarith::compareResultantAlgorithms(quick ? 20 : 100, s.seed));

  if (modelMax >= 4) {
    const auto tables = maximality::tablesFromModel(chain[3]);
    Report r;
    const auto v5 = maximality::maximalityVerdict(mpq_class(5), s.primeBound, tables);
    r.add("verdict-a5", "a = 5 is certified maximal at level 4",
          v5.kind == maximality::VerdictKind::Maximal && maximality::recheckCertificate(v5, tables),
          maximality::verdictName(v5.kind) + ", " + std::to_string(v5.elimination.surviving.size()) + " subgroups survive");
    const auto v1 = maximality::maximalityVerdict(mpq_class(1), s.primeBound, tables);
    r.add("verdict-a1", "a = 1 is not maximal by square classes", v1.kind == maximality::VerdictKind::NotMaximal);
    bool rejected = true;
    for (int bad : {0, 2}) {
      try {
        maximality::maximalityVerdict(mpq_class(bad), s.primeBound, tables);
        rejected = false;
      } catch (const ExcludedBasePoint&) {
      }
    }
    r.add("excluded-points", "a = 0 and a = 2 are rejected", rejected);
    record("maximality", "", r);
    record("maximality.certifier", "", maximality::verifyCertifierProperties(tables, quick ? 10 : 100, s.seed, s.primeBound));
  }

  record("constantfield.radical", "", constantfield::verifyIdentitySamples(quick ? 5 : s.samples, s.seed, s.precision));
  record("constantfield.dihedral", "", constantfield::dihedralConstantFieldCheck());

  Output out;
  out.json = {{"mode", quick ? "quick" : "full"},
              {"level_cap", cap},
              {"claims", claims},
              {"total", claims.size()},
              {"failed", failing},
              {"passed", failing.empty()}};
  text << claims.size() << " claims, " << failing.size() << " failed\n";
  out.text = text.str();
  if (!failing.empty()) out.exitCode = kInvariantFailure;
  return out;
}

}  // namespace img::cli
