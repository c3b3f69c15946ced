#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "img/errors.hpp"
#include "img/maximality.hpp"
#include "img/poly_arith.hpp"

using namespace img;
using namespace img::maximality;

namespace {

const LevelFourTables& tables() {
  static const auto t = tablesFromModel(arithmodel::buildModel(4));
  return t;
}

std::size_t oddPrimesUpTo(std::uint32_t n) {
  std::size_t count = 0;
  for (std::uint32_t k = 3; k <= n; k += 2) {
    bool prime = true;
    for (std::uint32_t d = 3; d * d <= k; d += 2)
      if (k % d == 0) {
        prime = false;
        break;
      }
    count += prime;
  }
  return count;
}

}  // namespace

TEST_CASE("square classes") {
  auto dep = [](const char* a) { return squareClassTest(polyarith::parseRational(a)).dependency; };
  CHECK(dep("1") == std::vector<int>{2});
  CHECK(dep("-2") == std::vector<int>{3});
  CHECK(dep("1/2") == std::vector<int>{1, 2});
  CHECK(dep("-1") == std::vector<int>{0, 2});
  CHECK(dep("3") == std::vector<int>{0, 3});
  CHECK(dep("-7") == std::vector<int>{3});
  CHECK(dep("8/3") == std::vector<int>{0, 2, 3});
  CHECK(dep("8") == std::vector<int>{1, 2});
  const auto five = squareClassTest(mpq_class(5));
  CHECK(five.passed);
  CHECK(five.dependency.empty());
  CHECK(five.parts[2] == 5);
  CHECK(five.parts[3] == -3);
  CHECK_THROWS_AS(squareClassTest(mpq_class(0)), ExcludedBasePoint);
  CHECK_THROWS_AS(squareClassTest(mpq_class(2)), ExcludedBasePoint);
}

TEST_CASE("Frobenius sampling") {
  const auto s = sampleFrobenius(mpq_class(5), 10000);
  CHECK(s.primesTried == oddPrimesUpTo(10000));
  CHECK(s.observations.size() <= s.primesTried);
  CHECK(s.observations.size() >= 1200);
  for (std::size_t i = 1; i < s.observations.size(); ++i) CHECK(s.observations[i - 1].prime < s.observations[i].prime);
  for (const auto& o : s.observations) {
    CHECK(o.type.total() == 16);
    for (auto d : o.type.parts) CHECK((d & (d - 1)) == 0);
    CHECK(tables().full.count(o.type) == 1);
  }
  CHECK_THROWS_AS(sampleFrobenius(mpq_class(5), 10), InsufficientData);
  CHECK_THROWS_AS(sampleFrobenius(mpq_class(5), 2), InvalidArgument);
  CHECK_THROWS_AS(sampleFrobenius(mpq_class(5), 200000000), ResourceLimit);
}

TEST_CASE("level-1 analogue at p = 3") {
  // 2 - 5 (x - 1)^2 = x (x + 1) * (-5) mod 3 up to units
  const auto t = polyarith::factorDegreesModP(polyarith::specializeNumerator(1, mpq_class(5)), 3);
  REQUIRE(t.has_value());
  CHECK(t->parts == std::vector<std::size_t>{1, 1});
}

TEST_CASE("elimination") {
  CHECK(eliminateMaximalSubgroups({}, tables()).surviving.size() == 15);
  std::vector<FrobeniusObservation> all;
  for (const auto& t : tables().full) all.push_back({3, t});
  const auto everything = eliminateMaximalSubgroups(all, tables());
  for (std::size_t i = 0; i < 15; ++i)
    CHECK((everything.eliminated.count(i) == 1) == (tables().maximal[i].size() < tables().full.size()));

  const CycleType eight{{8, 8}};
  std::vector<FrobeniusObservation> obs{{101, eight}, {7, CycleType{{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}}}};
  const auto e = eliminateMaximalSubgroups(obs, tables());
  CHECK(e.eliminated.size() + e.surviving.size() == 15);
  for (std::size_t i : e.surviving) CHECK(tables().maximal[i].count(eight) == 1);
  for (const auto& [i, o] : e.eliminated) {
    CHECK(o.prime == 101);
    CHECK(tables().maximal[i].count(eight) == 0);
  }
  std::vector<FrobeniusObservation> foreign{{3, CycleType{{16}}}};
  CHECK_THROWS_AS(eliminateMaximalSubgroups(foreign, tables()), ModelInconsistency);
}

TEST_CASE("verdicts") {
  const auto one = maximalityVerdict(mpq_class(1), 10000, tables());
  CHECK(one.kind == VerdictKind::NotMaximal);
  CHECK(!one.derivation.empty());
  CHECK_THROWS_AS(maximalityVerdict(mpq_class(0), 10000, tables()), ExcludedBasePoint);
  CHECK_THROWS_AS(maximalityVerdict(mpq_class(2), 10000, tables()), ExcludedBasePoint);

  const auto five = maximalityVerdict(mpq_class(5), 10000, tables());
  CHECK(five.kind != VerdictKind::NotMaximal);
  CHECK(five.primesTried == 1228);
  CHECK(five.elimination.eliminated.size() + five.elimination.surviving.size() == 15);
  CHECK(five.survivorTables.size() == five.elimination.surviving.size());
  CHECK(recheckCertificate(five, tables()) == (five.kind == VerdictKind::Maximal));
  CHECK(verdictName(VerdictKind::Inconclusive) == "inconclusive");
}

TEST_CASE("certificate re-check rejects tampering") {
  MaximalityVerdict v;
  v.a = 5;
  v.kind = VerdictKind::Maximal;
  for (std::size_t i = 0; i < 15; ++i) v.elimination.eliminated.emplace(i, FrobeniusObservation{3, CycleType{{8, 8}}});
  // some maximal subgroup contains an (8,8) element, so this certificate is false
  bool someContain = false;
  for (const auto& t : tables().maximal) someContain = someContain || t.count(CycleType{{8, 8}});
  CHECK(someContain);
  CHECK_FALSE(recheckCertificate(v, tables()));
  v.elimination.eliminated.erase(0);
  CHECK_FALSE(recheckCertificate(v, tables()));
}

TEST_CASE("random base points") {
  const auto pts = randomBasePoints(100, 1);
  CHECK(pts.size() == 100);
  for (const auto& a : pts) {
    CHECK(a != 0);
    CHECK(a != 2);
  }
  CHECK(randomBasePoints(100, 1) == pts);
}

TEST_CASE("certifier properties") {
  const Report r = verifyCertifierProperties(tables(), 30, 5, 3000);
  for (const auto& c : r.checks) CHECK_MESSAGE(c.passed, c.id << ": " << c.detail);
}
