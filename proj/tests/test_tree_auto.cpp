#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "img/errors.hpp"
#include "img/tree_auto.hpp"
#include "oracles.hpp"

using namespace img;
using namespace img::treeauto;

TEST_CASE("leaf action matches the path-walking oracle") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 8; ++n)
    for (int k = 0; k < 50; ++k) {
      const Portrait u = randomPortrait(n, rng);
      CHECK(leafPermutation(u) == oracle::perm(u));
    }
}

TEST_CASE("composition acts left to right") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 7; ++n)
    for (int k = 0; k < 50; ++k) {
      const Portrait u = randomPortrait(n, rng), v = randomPortrait(n, rng);
      CHECK(oracle::perm(compose(u, v)) == oracle::then(oracle::perm(u), oracle::perm(v)));
      CHECK(oracle::perm(invert(u)) == oracle::inverse(oracle::perm(u)));
      // v^-1 u v
      CHECK(oracle::perm(conjugate(u, v)) ==
            oracle::then(oracle::then(oracle::inverse(oracle::perm(v)), oracle::perm(u)), oracle::perm(v)));
    }
}

TEST_CASE("sections rebuild the portrait") {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 6; ++n) {
    const Portrait u = randomPortrait(n, rng);
    CHECK(Portrait::fromSections(section(u, "1"), section(u, "2"), u.rootSwap()) == u);
    CHECK(restrict(u, n - 1).level() == n - 1);
    for (std::size_t leaf = 0; leaf < (std::size_t{1} << (n - 1)); ++leaf)
      CHECK(restrict(u, n - 1).leafImage(leaf) == (u.leafImage(leaf << 1) >> 1));
  }
}

TEST_CASE("basic elements") {
  CHECK(oracle::perm(Portrait::sigma(1)) == oracle::Perm{1, 0});
  CHECK(Portrait::identity(5).isIdentity());
  CHECK(elementOrder(Portrait::sigma(4)) == 2);
  for (int n = 1; n <= 8; ++n) {
    const Portrait w = addingMachine(n);
    CHECK(isLevelOdometer(w));
    CHECK(oracle::cycleLengths(oracle::perm(w)) == std::vector<std::size_t>{std::size_t{1} << n});
    CHECK(elementOrder(w) == (std::size_t{1} << n));
    CHECK_FALSE(isLevelOdometer(Portrait::sigma(n)) != (n == 1));
  }
}

TEST_CASE("cycle types and signs against the oracle") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 6; ++n)
    for (int k = 0; k < 40; ++k) {
      const Portrait u = randomPortrait(n, rng);
      const auto lengths = oracle::cycleLengths(oracle::perm(u));
      CHECK(cycleType(u).parts == lengths);
      std::size_t even = 0;
      for (auto l : lengths) even += (l % 2 == 0);
      CHECK(sign(u, n) == (even % 2 ? -1 : 1));
    }
}

TEST_CASE("wire format") {
  CHECK(encode(Portrait::sigma(2)) == "2:4");
  CHECK(encode(Portrait::identity(1)) == "1:0");
  CHECK(encode(Portrait::identity(0)) == "0:");
  // root, vertex "2" and vertex "22" swap
  CHECK(encode(addingMachine(3)) == "3:51");
  std::mt19937_64 rng(9);
  for (int n = 0; n <= 8; ++n) {
    const Portrait u = randomPortrait(n, rng);
    CHECK(decode(encode(u)) == u);
  }
  CHECK_THROWS_AS(decode("3"), InvalidArgument);
  CHECK_THROWS_AS(decode("3:zz"), InvalidArgument);
  CHECK_THROWS_AS(decode("2:8"), InvalidArgument);
  CHECK_THROWS_AS(decode("9:0"), InvalidArgument);
  CHECK_THROWS_AS(Portrait::identity(9), InvalidArgument);
}

TEST_CASE("conjugacy against orbits of Omega_n") {
  for (int n = 1; n <= 2; ++n) {
    const auto omega = oracle::allPortraits(n);
    for (const auto& u : omega) {
      std::set<Portrait> orbit;
      for (const auto& b : omega) orbit.insert(conjugate(u, b));
      for (const auto& v : omega) {
        CHECK(areConjugate(u, v) == (orbit.count(v) == 1));
        CHECK((conjugacyClassKey(u) == conjugacyClassKey(v)) == (orbit.count(v) == 1));
      }
    }
  }
  CHECK(verifyConjugacyBruteForce(3).allPassed());
}

TEST_CASE("conjugate elements share a cycle type") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    const Portrait u = randomPortrait(5, rng), b = randomPortrait(5, rng);
    CHECK(areConjugate(u, conjugate(u, b)));
    CHECK(cycleType(u) == cycleType(conjugate(u, b)));
  }
}

TEST_CASE("random cross-check suite") {
  const Report r = randomCrossChecks(2000, 42);
  for (const auto& c : r.checks) CHECK_MESSAGE(c.passed, c.id << ": " << c.detail);
}
