#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "img/errors.hpp"
#include "img/poly_arith.hpp"

using namespace img;
using namespace img::polyarith;

namespace {

IntPoly P(std::vector<long> c) {
  std::vector<mpz_class> z;
  for (long x : c) z.emplace_back(x);
  return IntPoly(z);
}

// prod (x - r)
IntPoly fromRoots(const std::vector<long>& roots, long lead = 1) {
  IntPoly p = P({lead});
  for (long r : roots) p = p * P({-r, 1});
  return p;
}

mpq_class iterateF(mpq_class x, int n) {
  for (int i = 0; i < n; ++i) {
    const mpq_class d = x - 1;
    x = mpq_class(2) / (d * d);
  }
  return x;
}

std::size_t rootsModP(const IntPoly& f, long p) {
  std::size_t count = 0;
  for (long x = 0; x < p; ++x) {
    mpz_class v = f.eval(mpz_class(x)) % p;
    count += (v == 0);
  }
  return count;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
  const IntPoly a = P({1, 2, 3}), b = P({-1, 1});
  CHECK((a * b).coeffs() == P({-1, -1, -1, 3}).coeffs());
  CHECK(divExact(a * b, b) == a);
  CHECK_THROWS(divExact(a, b));
  CHECK((a - a).isZero());
  CHECK((a - a).degree() == -1);
  CHECK(P({6, 4, 2}).content() == 2);
  CHECK(primitivePart(P({6, 4, 2})) == P({3, 2, 1}));
  CHECK(a.derivative() == P({2, 6}));
  CHECK(IntPoly::parse("1 2 3") == a);
  CHECK(a.eval(mpq_class(1, 2)) == mpq_class(11, 4));
}

TEST_CASE("iterates agree with direct evaluation of f") {
  for (int n = 1; n <= 5; ++n) {
    const auto it = iteratePair(n);
    for (long x : {3L, -2L, 5L, 7L}) {
      const mpq_class x0(x);
      CHECK(mpq_class(it.g.eval(x0) / it.h.eval(x0)) == iterateF(x0, n));
    }
    CHECK(it.g.eval(mpq_class(1, 3)) / it.h.eval(mpq_class(1, 3)) == iterateF(mpq_class(1, 3), n));
  }
  for (int n = 2; n <= 8; ++n) {
    const auto it = iteratePair(n);
    CHECK(it.g.degree() == (1 << n));
    CHECK(it.h.degree() == (1 << n));
    CHECK(it.g.leading() == 2);
    CHECK(it.h.leading() == 1);
  }
  CHECK(iteratePair(1).g == P({2}));
  CHECK(iteratePair(1).h == P({1, -2, 1}));
  CHECK_THROWS_AS(iteratePair(0), InvalidArgument);
  CHECK_THROWS_AS(iteratePair(9), InvalidArgument);
}

TEST_CASE("wronskian leading coefficient") {
  for (int n = 1; n <= 6; ++n) {
    const auto m = iterateMetadata(n);
    const auto it = iteratePair(n);
    CHECK(m.wronskian == it.h * it.g.derivative() - it.g * it.h.derivative());
    CHECK(abs(m.D) == mpz_class(1) << (2 * n));
  }
}

TEST_CASE("resultant of linear and product-over-roots oracles") {
  // ax + b, cx + d: Res = a d - b c
  CHECK(resultant(P({3, 2}), P({-1, 5})) == 2 * -1 - 3 * 5);
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<long> r(-6, 6);
  for (int k = 0; k < 50; ++k) {
    std::vector<long> roots;
    const int d = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < d; ++i) roots.push_back(r(rng));
    const IntPoly p = fromRoots(roots);
    IntPoly q = P({r(rng), r(rng), r(rng), 1});
    mpz_class expected = 1;
    for (long x : roots) expected *= q.eval(mpz_class(x));
    CHECK(resultant(p, q) == expected);
    CHECK(resultantModular(p, q) == expected);
    CHECK(resultantSylvester(p, q, p.degree(), q.degree()) == expected);
  }
  // g_2 = 2 (x - 1)^4, so Res(g_2, h_2) = 2^4 h_2(1)^4
  const auto it = iteratePair(2);
  const mpz_class h1 = it.h.eval(mpz_class(1));
  CHECK(resultant(it.g, it.h) == 16 * h1 * h1 * h1 * h1);
}

TEST_CASE("discriminant of quadratics and cubics") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> r(-20, 20);
  for (int k = 0; k < 100; ++k) {
    long a = r(rng), b = r(rng), c = r(rng);
    if (a == 0) a = 1;
    CHECK(discriminant(P({c, b, a})) == b * b - 4 * a * c);
  }
  // prod (ri - rj)^2 for a monic cubic with integer roots
  const IntPoly cubic = fromRoots({1, 4, -2});
  CHECK(discriminant(cubic) == 9 * 36 * 9);
}

TEST_CASE("discriminant shapes") {
  CHECK(discriminantPolynomial(1) == P({0, 8}));
  CHECK(discriminantShape(1).toString() == "+2^3 * t^1 * (2-t)^0");
  for (int n = 1; n <= 4; ++n) {
    const auto s = discriminantShape(n);
    IntPoly rebuilt = P({s.sign});
    rebuilt = mpz_class(mpz_class(1) << s.c) * rebuilt;
    for (unsigned long i = 0; i < s.a; ++i) rebuilt = rebuilt * P({0, 1});
    for (unsigned long i = 0; i < s.b; ++i) rebuilt = rebuilt * P({2, -1});
    CHECK(rebuilt == s.delta);
    // direct discriminant of g_n - t h_n at integer t
    const auto it = iteratePair(n);
    for (long t : {-1L, 3L, 5L}) {
      const IntPoly f = it.g - mpz_class(t) * it.h;
      CHECK(discriminant(f) == s.delta.eval(mpz_class(t)));
    }
  }
}

TEST_CASE("specialization") {
  CHECK_THROWS_AS(specializeNumerator(3, mpq_class(0)), ExcludedBasePoint);
  CHECK_THROWS_AS(specializeNumerator(3, mpq_class(2)), ExcludedBasePoint);
  // a = 5: 2 - 5 (x - 1)^2
  CHECK(specializeNumerator(1, mpq_class(5)) == P({-3, 10, -5}));
  const IntPoly f = specializeNumerator(2, mpq_class(7, 3));
  CHECK(f.content() == 1);
  const auto it = iteratePair(2);
  const IntPoly raw = mpz_class(3) * it.g - mpz_class(7) * it.h;
  CHECK(f == divExact(raw, raw.content()));
}

TEST_CASE("factor degrees mod p") {
  CHECK(factorDegreesModP(P({1, 0, 1}), 3)->parts == std::vector<std::size_t>{2});
  CHECK(factorDegreesModP(P({-1, 0, 1}), 3)->parts == std::vector<std::size_t>{1, 1});
  CHECK(factorDegreesModP(P({0, -1, 0, 1}), 3)->parts == std::vector<std::size_t>{1, 1, 1});
  CHECK(factorDegreesModP(P({2, 1, 0, 1}), 3)->parts == std::vector<std::size_t>{1, 2});
  CHECK_FALSE(factorDegreesModP(P({1, 2, 1}), 5).has_value());
  CHECK_THROWS_AS(factorDegreesModP(P({1, 0, 1}), 9), BadPrime);
  CHECK_THROWS_AS(factorDegreesModP(P({1, 0, 3}), 3), BadPrime);

  // cubics: the pattern is fixed by the number of roots
  std::mt19937_64 rng(8);
  for (long p : {5L, 7L, 11L, 13L}) {
    for (int k = 0; k < 40; ++k) {
      const IntPoly f = P({static_cast<long>(rng() % 50), static_cast<long>(rng() % 50), static_cast<long>(rng() % 50), 1});
      const auto t = factorDegreesModP(f, static_cast<std::uint32_t>(p));
      if (!t) continue;
      const std::size_t roots = rootsModP(f, p);
      const std::vector<std::vector<std::size_t>> byRoots{{3}, {1, 2}, {}, {1, 1, 1}};
      CHECK(t->parts == byRoots[roots]);
    }
  }
}

TEST_CASE("factor degrees of the level-4 numerator") {
  const IntPoly f = specializeNumerator(4, mpq_class(5));
  for (std::uint32_t p : {7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u}) {
    const auto t = factorDegreesModP(f, p);
    if (!t) continue;
    CHECK(t->total() == 16);
    std::size_t ones = 0;
    for (auto d : t->parts) ones += (d == 1);
    CHECK(ones == rootsModP(f, p));
  }
}

TEST_CASE("squarefree parts") {
  CHECK(squarefreePart(mpq_class(12)) == 3);
  CHECK(squarefreePart(mpq_class(18, 5)) == 10);
  CHECK(squarefreePart(mpq_class(-8)) == -2);
  CHECK(squarefreePart(mpq_class(1)) == 1);
  CHECK(squarefreePart(mpq_class(1, 4)) == 1);
  const mpz_class p("1000003"), q("1000033");
  CHECK(squarefreePart(mpq_class(p * q)) == p * q);
  CHECK(squarefreePart(mpq_class(p * p * 3)) == 3);
  CHECK(squarefreePart(mpq_class(p * p * q * q * q)) == q);
  CHECK_THROWS(squarefreePart(mpq_class(0)));
}

TEST_CASE("rational literals") {
  CHECK(parseRational("5") == 5);
  CHECK(parseRational("-6/4") == mpq_class(-3, 2));
  CHECK(formatRational(mpq_class(5)) == "5/1");
  CHECK(formatRational(mpq_class(-6, 4)) == "-3/2");
  for (const char* bad : {"", "1/0", "abc", "1/-2", "1.5", "2/ 3"}) CHECK_THROWS_AS(parseRational(bad), InvalidArgument);
}

TEST_CASE("invariant suites") {
  CHECK(verifyIterateInvariants(8, 6, 5).allPassed());
  CHECK(verifyDiscriminantShapes(4).allPassed());
  const std::vector<mpq_class> pts{mpq_class(5), mpq_class(-1), mpq_class(7, 3)};
  CHECK(verifySpecializationConsistency(3, 4, pts).allPassed());
  CHECK(compareResultantAlgorithms(40, 3).allPassed());
}
