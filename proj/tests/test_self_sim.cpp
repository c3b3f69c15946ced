#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "img/errors.hpp"
#include "img/self_sim.hpp"
#include "oracles.hpp"

using namespace img;
using namespace img::selfsim;

namespace {

std::size_t permGroupOrder(const std::vector<Portrait>& gens) {
  std::vector<oracle::Perm> perms;
  for (const auto& g : gens) perms.push_back(oracle::perm(g));
  return oracle::generate(perms).size();
}

}  // namespace

TEST_CASE("recursion unfolds as stated") {
  const auto sys = builtinSystemF();
  for (int n = 2; n <= 7; ++n) {
    const Portrait a1 = sys.unfold("a1", n), a2 = sys.unfold("a2", n), a3 = sys.unfold("a3", n);
    CHECK(a1 == Portrait::sigma(n));
    CHECK(a2 == Portrait::fromSections(treeauto::invert(sys.unfold("a3", n - 1)), treeauto::invert(sys.unfold("a2", n - 1)), true));
    CHECK(a3 == Portrait::fromSections(sys.unfold("a2", n - 1), sys.unfold("a3", n - 1), false));
    CHECK(treeauto::compose(treeauto::compose(a1, a2), a3).isIdentity());
  }
  CHECK_THROWS_AS(sys.unfold("a4", 3), InvalidArgument);
}

TEST_CASE("words") {
  const Word w = parseWord("a1 a3^-1 a2");
  REQUIRE(w.size() == 3);
  CHECK(w[1].symbol == "a3");
  CHECK(w[1].inverse);
  CHECK(formatWord(w) == "a1 a3^-1 a2");
  const auto sys = builtinSystemF();
  CHECK(sys.element("g1", 4) == sys.evaluate(parseWord("a2 a3^-1"), 4));
}

TEST_CASE("order of G_n against permutation closure") {
  const auto sys = builtinSystemF();
  const std::vector<std::size_t> expected{2, 8, 32, 64, 128, 256, 512};
  for (int n = 1; n <= 7; ++n) {
    const std::vector<Portrait> gens{sys.unfold("a1", n), sys.unfold("a3", n)};
    const auto g = closure(n, gens);
    CHECK(g.order() == expected[static_cast<std::size_t>(n - 1)]);
    CHECK(g.order() == permGroupOrder(gens));
    CHECK(g.contains(sys.unfold("a2", n)));
  }
}

TEST_CASE("closure of a3 at level 3 is cyclic of order 4") {
  const auto sys = builtinSystemF();
  const std::vector<Portrait> gens{sys.unfold("a3", 3)};
  const auto c = closure(3, gens);
  CHECK(c.order() == 4);
  CHECK(abelianInvariants(c) == std::vector<std::size_t>{4});
}

TEST_CASE("subgroup ledger for n = 3..6") {
  const auto sys = builtinSystemF();
  for (int n = 3; n <= 6; ++n) {
    CAPTURE(n);
    const auto d = geometricData(sys, n);
    CHECK(d.G.order() == (std::size_t{1} << (n + 2)));
    CHECK(subgroupIndex(d.G, d.H1) == 4);
    CHECK(subgroupIndex(d.G, d.H2) == 2);
    CHECK(subgroupIndex(d.G, d.H3) == 2);
    CHECK(subgroupIndex(d.G, d.U) == 4);
    CHECK(subgroupIndex(d.G, d.commutator) == 8);
    CHECK(d.commutator == intersection(d.H1, d.H3));
    CHECK(isAbelian(d.U));
    CHECK(abelianInvariants(d.G) == std::vector<std::size_t>{2, 4});
    for (const char* a : {"a1", "a2", "a3"}) CHECK(centralizer(d.G, sys.unfold(a, n)).order() == 8);
    // [G,G] = {(x, x^-1) : x in U_(n-1)}
    const auto below = geometricData(sys, n - 1);
    std::size_t pairs = 0;
    for (const auto& x : below.U.elements())
      pairs += d.commutator.contains(Portrait::fromSections(x, treeauto::invert(x), false));
    CHECK(pairs == d.commutator.order());
    CHECK(below.U.order() == d.commutator.order());
  }
}

TEST_CASE("commutator subgroup against the permutation oracle") {
  const auto sys = builtinSystemF();
  const int n = 4;
  const auto d = geometricData(sys, n);
  std::set<oracle::Perm> comms;
  for (const auto& x : d.G.elements())
    for (const auto& y : d.G.elements()) comms.insert(oracle::perm(treeauto::commutator(x, y)));
  std::vector<oracle::Perm> gens(comms.begin(), comms.end());
  CHECK(oracle::generate(gens).size() == d.commutator.order());
}

TEST_CASE("normal closure and normality") {
  const auto sys = builtinSystemF();
  for (int n = 2; n <= 5; ++n) {
    const auto d = geometricData(sys, n);
    CHECK(isNormalIn(d.U, d.G));
    CHECK(isNormalIn(d.commutator, d.G));
    CHECK(d.commutator.isSubsetOf(d.U));
  }
}

TEST_CASE("closure cap") {
  const auto sys = builtinSystemF();
  const std::vector<Portrait> gens{sys.unfold("a1", 6), sys.unfold("a3", 6)};
  CHECK_THROWS_AS(closure(6, gens, 100), ResourceLimit);
}

TEST_CASE("presentation and triple theorem") {
  for (int n = 1; n <= 6; ++n) CHECK(verifyGeometricPresentation(n).allPassed());
  for (int n = 1; n <= 3; ++n) {
    const Report r = verifyTripleTheorem(n);
    for (const auto& c : r.checks) CHECK_MESSAGE(c.passed, n << " " << c.id << ": " << c.detail);
  }
  CHECK_THROWS_AS(verifyTripleTheorem(4), InvalidArgument);
}

TEST_CASE("a broken triple fails the presentation check") {
  const auto sys = builtinSystemF();
  const int n = 4;
  const std::array<Portrait, 3> triple{sys.unfold("a1", n), sys.unfold("a3", n), sys.unfold("a3", n)};
  CHECK_FALSE(verifyGeometricPresentation(n, triple).allPassed());
}

TEST_CASE("structure suite") {
  for (int n = 3; n <= 6; ++n) {
    const Report r = verifyGeometricStructure(n);
    for (const auto& c : r.checks) CHECK_MESSAGE(c.passed, n << " " << c.id << ": " << c.detail);
  }
}
