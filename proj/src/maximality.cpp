#include "img/maximality.hpp"

#include <algorithm>
#include <random>

#include "img/errors.hpp"
#include "img/poly_arith.hpp"

namespace img::maximality {

void validateBasePoint(const mpq_class& a) {
  if (a == 0 || a == 2)
    throw ExcludedBasePoint("base point " + polyarith::formatRational(a) + " is postcritical (0 and 2 are excluded)");
}

SquareClassResult squareClassTest(const mpq_class& a) {
  validateBasePoint(a);
  SquareClassResult r;
  r.parts = {mpz_class(-1), mpz_class(2), polyarith::squarefreePart(a), polyarith::squarefreePart(mpq_class(2 - a))};
  std::vector<std::vector<int>> subsets;
  for (int mask = 1; mask < 16; ++mask) {
    std::vector<int> s;
    for (int i = 0; i < 4; ++i)
      if (mask >> i & 1) s.push_back(i);
    subsets.push_back(std::move(s));
  }
  std::stable_sort(subsets.begin(), subsets.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  for (const auto& s : subsets) {
    mpz_class prod = 1;
    for (int i : s) prod *= r.parts[static_cast<std::size_t>(i)];
    if (prod > 0 && mpz_perfect_square_p(prod.get_mpz_t())) {
      r.dependency = s;
      return r;
    }
  }
  r.passed = true;
  return r;
}

FrobeniusSample sampleFrobenius(const mpq_class& a, std::uint32_t primeBound) {
  validateBasePoint(a);
  if (primeBound < 3) throw InvalidArgument("prime bound must be at least 3");
  if (primeBound > 100000000) throw ResourceLimit("prime bound above 10^8");
  const polyarith::IntPoly f = polyarith::specializeNumerator(4, a);
  std::vector<bool> composite(primeBound + 1, false);
  FrobeniusSample out;
  for (std::uint32_t p = 2; p <= primeBound; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t m = std::uint64_t{p} * p; m <= primeBound; m += p) composite[m] = true;
    if (p == 2) continue;
    ++out.primesTried;
    if (mpz_divisible_ui_p(f.leading().get_mpz_t(), p)) continue;
    if (auto t = polyarith::factorDegreesModP(f, p)) out.observations.push_back({p, std::move(*t)});
  }
  if (out.observations.size() < kMinObservations)
    throw InsufficientData("only " + std::to_string(out.observations.size()) + " usable primes up to " +
                           std::to_string(primeBound));
  return out;
}

LevelFourTables tablesFromModel(const arithmodel::ArithLevelModel& model) {
  if (model.level != 4) throw InvalidArgument("maximality tables need the level-4 model");
  LevelFourTables t;
  t.full = arithmodel::cycleTypeTable(model.M);
  for (const auto& h : model.maximalSubgroups) t.maximal.push_back(arithmodel::cycleTypeTable(h));
  return t;
}

EliminationReport eliminateMaximalSubgroups(const std::vector<FrobeniusObservation>& obs,
                                            const LevelFourTables& tables) {
  std::vector<FrobeniusObservation> sorted = obs;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.prime < y.prime; });
  EliminationReport r;
  for (const auto& o : sorted) {
    if (!tables.full.count(o.type))
      throw ModelInconsistency("prime " + std::to_string(o.prime) + " gives cycle type " + o.type.toString() +
                               ", which no element of M_4 has");
    for (std::size_t i = 0; i < tables.maximal.size(); ++i)
      if (!r.eliminated.count(i) && !tables.maximal[i].count(o.type)) r.eliminated.emplace(i, o);
  }
  for (std::size_t i = 0; i < tables.maximal.size(); ++i)
    if (!r.eliminated.count(i)) r.surviving.push_back(i);
  return r;
}

std::string verdictName(VerdictKind k) {
  switch (k) {
    case VerdictKind::Maximal:
      return "maximal";
    case VerdictKind::NotMaximal:
      return "not_maximal";
    case VerdictKind::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

MaximalityVerdict maximalityVerdict(const mpq_class& a, std::uint32_t primeBound, const LevelFourTables& tables) {
  MaximalityVerdict v;
  v.a = a;
  v.squareClass = squareClassTest(a);
  if (!v.squareClass.passed) {
    v.kind = VerdictKind::NotMaximal;
    std::string dep;
    for (int i : v.squareClass.dependency) dep += (dep.empty() ? "" : " * ") + std::string(SquareClassResult::kLabels[static_cast<std::size_t>(i)]);
    v.reason = "square-class dependency: " + dep + " is a rational square";
    v.derivation = {
        "Frattini(M_4) has index 16 and its fixed field is generated by sqrt(-1), sqrt(2), sqrt(t), sqrt(2-t)",
        "specializing t = a maps these to sqrt(-1), sqrt(2), sqrt(a), sqrt(2-a)",
        "the classes are dependent mod squares, so the specialized field has degree < 16",
        "a surjection onto M_4 would force degree 16, so the level-4 group is a proper subgroup"};
    return v;
  }
  const FrobeniusSample sample = sampleFrobenius(a, primeBound);
  v.primesTried = sample.primesTried;
  v.observations = sample.observations.size();
  v.elimination = eliminateMaximalSubgroups(sample.observations, tables);
  if (v.elimination.surviving.empty()) {
    v.kind = VerdictKind::Maximal;
  } else {
    v.kind = VerdictKind::Inconclusive;
    for (std::size_t i : v.elimination.surviving) v.survivorTables.push_back(tables.maximal[i]);
  }
  return v;
}

MaximalityVerdict maximalityVerdict(const mpq_class& a, std::uint32_t primeBound) {
  validateBasePoint(a);
  return maximalityVerdict(a, primeBound, tablesFromModel(arithmodel::buildModel(4)));
}

bool recheckCertificate(const MaximalityVerdict& v, const LevelFourTables& tables) {
  if (v.kind != VerdictKind::Maximal) return false;
  if (v.elimination.eliminated.size() != tables.maximal.size()) return false;
  for (const auto& [i, o] : v.elimination.eliminated) {
    if (i >= tables.maximal.size()) return false;
    if (!tables.full.count(o.type) || tables.maximal[i].count(o.type)) return false;
  }
  return true;
}

std::vector<mpq_class> randomBasePoints(std::size_t count, std::uint64_t seed, long height) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-height, height), den(1, height);
  std::vector<mpq_class> out;
  while (out.size() < count) {
    mpq_class a(num(rng), den(rng));
    a.canonicalize();
    if (a != 0 && a != 2) out.push_back(a);
  }
  return out;
}

Report verifyCertifierProperties(const LevelFourTables& tables, std::size_t randomPoints, std::uint64_t seed,
                                 std::uint32_t primeBound) {
  Report r;
  r.title = "maximality certifier properties";
  std::size_t inconsistent = 0, sampled = 0, certificates = 0, badCertificates = 0;
  std::string firstInconsistency;
  for (const auto& a : randomBasePoints(randomPoints, seed)) {
    try {
      const FrobeniusSample s = sampleFrobenius(a, primeBound);
      ++sampled;
      const EliminationReport e = eliminateMaximalSubgroups(s.observations, tables);
      if (e.surviving.empty()) {
        MaximalityVerdict v = maximalityVerdict(a, primeBound, tables);
        if (v.kind == VerdictKind::Maximal) {
          ++certificates;
          if (!recheckCertificate(v, tables)) ++badCertificates;
        }
      }
    } catch (const ModelInconsistency& e) {
      if (firstInconsistency.empty()) firstInconsistency = polyarith::formatRational(a) + ": " + e.what();
      ++inconsistent;
    }
  }
  r.add("consistency", "sampled cycle types of random base points all occur in M_4", inconsistent == 0,
        std::to_string(sampled) + " base points sampled" +
            (firstInconsistency.empty() ? std::string() : "; first: " + firstInconsistency));
  r.add("soundness", "every Maximal verdict carries a certificate that re-checks by table lookup", badCertificates == 0,
        std::to_string(certificates) + " certificates");

  bool monotone = true;
  std::string monoDetail;
  for (const char* text : {"5", "7/3", "-4"}) {
    const mpq_class a = polyarith::parseRational(text);
    std::vector<std::size_t> previous;
    for (std::uint32_t bound : {primeBound / 8, primeBound / 2, primeBound}) {
      if (bound < 3) continue;
      std::vector<std::size_t> now;
      try {
        for (const auto& [i, o] : eliminateMaximalSubgroups(sampleFrobenius(a, bound).observations, tables).eliminated)
          now.push_back(i);
      } catch (const InsufficientData&) {
        continue;
      }
      monotone = monotone && std::includes(now.begin(), now.end(), previous.begin(), previous.end());
      previous = now;
    }
    monoDetail += std::string(text) + ": " + std::to_string(previous.size()) + " eliminated; ";
  }
  r.add("monotonicity", "eliminated subgroups never shrink as the prime bound grows", monotone, monoDetail);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  bool invariant = true;
  for (const auto& a : randomBasePoints(randomPoints, seed + 1)) {
    const long w = 1 + static_cast<long>(rng() % 9);
    const mpz_class u = a.get_num() * w * w, v = a.get_den() * w * w;
    const mpq_class rewritten = polyarith::parseRational(u.get_str() + "/" + v.get_str());
    const SquareClassResult x = squareClassTest(a), y = squareClassTest(rewritten);
    invariant = invariant && x.passed == y.passed && x.dependency == y.dependency;
  }
  r.add("square-class-representation", "square-class test is unchanged by rewriting u/v as (u w^2)/(v w^2)", invariant);
  return r;
}

}  // namespace img::maximality
