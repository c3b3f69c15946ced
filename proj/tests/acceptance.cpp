// One PASS/FAIL line per acceptance criterion. Exits 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "img/arith_model.hpp"
#include "img/constant_field.hpp"
#include "img/errors.hpp"
#include "img/maximality.hpp"
#include "img/poly_arith.hpp"
#include "img/self_sim.hpp"
#include "img/tree_auto.hpp"

using namespace img;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kOrdersSeconds = 10;
constexpr double kLedgerSeconds = 60;
constexpr double kModelSeconds = 300;
constexpr double kVerdictSeconds = 30;
constexpr double kResidualBound = 1e-40;
constexpr double kShrinkFactor = 1e10;
constexpr unsigned kPrecision = 256;
constexpr std::size_t kRadicalSamples = 20;
constexpr std::size_t kRandomSamples = 10000;
constexpr std::size_t kRandomBasePoints = 100;
constexpr std::uint32_t kPrimeBound = 10000;
constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

int failures = 0;

void criterion(int number, const std::string& title, double limitSeconds, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.passed = false;
    o.detail << "[exception: " << e.what() << "] ";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limitSeconds > 0 && secs > limitSeconds) o.require(false, "time limit " + std::to_string(limitSeconds) + " s");
  if (!o.passed) ++failures;
  std::printf("criterion %d %s  %s  (%.2f s) %s\n", number, o.passed ? "PASS" : "FAIL", title.c_str(), secs,
              o.detail.str().c_str());
  std::fflush(stdout);
}

const std::vector<arithmodel::ArithLevelModel>& chain() {
  static const auto c = arithmodel::buildModelChain(5);
  return c;
}

}  // namespace

int main() {
  const auto sys = selfsim::builtinSystemF();

  criterion(1, "|G_n| = 2^(n+2) for 3 <= n <= 7", kOrdersSeconds, [&](Outcome& o) {
    for (int n = 3; n <= 7; ++n) {
      const std::vector<treeauto::Portrait> gens{sys.unfold("a1", n), sys.unfold("a3", n)};
      const std::size_t order = selfsim::closure(n, gens).order();
      o.detail << "|G_" << n << "| = " << order << "; ";
      o.require(order == (std::size_t{1} << (n + 2)), "order at n = " + std::to_string(n));
    }
  });

  criterion(2, "subgroup ledger for n = 3..6", kLedgerSeconds, [&](Outcome& o) {
    for (int n = 3; n <= 6; ++n) {
      const Report r = selfsim::verifyGeometricStructure(n);
      for (const char* id : {"index-H1", "index-H2", "index-H3", "index-U", "index-comm", "comm=H1&H3",
                             "comm=inverse-pairs", "U-abelian", "abelianization", "centralizer-a1", "centralizer-a2",
                             "centralizer-a3"}) {
        const Check* c = r.find(id);
        o.require(c && c->passed, std::string(id) + " at n = " + std::to_string(n));
      }
    }
    o.detail << "12 checks at each of n = 3..6";
  });

  criterion(3, "arithmetic model orders, growth, odometer, Frattini quotient", kModelSeconds, [&](Outcome& o) {
    const auto& c = chain();
    o.require(c[3].M.order() == 256, "|M_4| = 2^8");
    o.require(c[4].M.order() == 1024, "|M_5| = 2^10");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int n = c[i].level;
      o.detail << "|M_" << n << "| = " << c[i].M.order() << "; ";
      o.require(c[i].M.order() <= (std::size_t{1} << (2 * n)), "|M_n| <= 2^(2n) at n = " + std::to_string(n));
      if (i > 0)
        o.require(c[i].M.order() <= 4 * c[i - 1].M.order(), "|M_n| <= 4 |M_(n-1)| at n = " + std::to_string(n));
    }
    bool odometer = false;
    for (const auto& x : c[4].M.elements()) odometer = odometer || treeauto::isLevelOdometer(x);
    o.require(!odometer, "no 32-cycle in M_5");
    o.require(arithmodel::frattiniRank(c[3].M) == 4, "Frattini rank 4");
    o.require(c[3].maximalSubgroups.size() == 15, "15 maximal subgroups");
  });

  criterion(4, "|M_5| / |G_5| = 8", 0, [&](Outcome& o) {
    const auto& m = chain()[4];
    o.detail << m.M.order() << " / " << m.G.order();
    o.require(m.M.order() == 8 * m.G.order(), "ratio 8");
  });

  criterion(5, "discriminants, wronskian, degrees, resultants", 0, [&](Outcome& o) {
    for (int n = 1; n <= 4; ++n) {
      try {
        const auto s = polyarith::discriminantShape(n);
        o.detail << s.toString() << "; ";
      } catch (const ShapeViolation& e) {
        o.require(false, e.what());
      }
    }
    polyarith::IntPoly eightT({mpz_class(0), mpz_class(8)});
    o.require(polyarith::discriminantPolynomial(1) == eightT, "Delta_1 = 8t");
    for (int n = 1; n <= 6; ++n)
      o.require(abs(polyarith::iterateMetadata(n).D) == mpz_class(1) << (2 * n), "|D_n| = 4^n at n = " + std::to_string(n));
    const Report r = polyarith::verifyIterateInvariants(8, 6, 5);
    for (const auto& c : r.checks) o.require(c.passed, c.id);
  });

  criterion(6, "maximality verdicts", kVerdictSeconds, [&](Outcome& o) {
    const auto tables = maximality::tablesFromModel(chain()[3]);
    const auto five = maximality::maximalityVerdict(mpq_class(5), kPrimeBound, tables);
    o.detail << "a = 5: " << maximality::verdictName(five.kind) << ", " << five.elimination.eliminated.size()
             << " eliminated, " << five.elimination.surviving.size() << " surviving; ";
    o.require(five.kind == maximality::VerdictKind::Maximal, "a = 5 maximal");
    o.require(maximality::recheckCertificate(five, tables), "a = 5 certificate re-checks for all 15 subgroups");
    o.require(maximality::maximalityVerdict(mpq_class(1), kPrimeBound, tables).kind ==
                  maximality::VerdictKind::NotMaximal,
              "a = 1 not maximal");
    for (int bad : {0, 2}) {
      bool rejected = false;
      try {
        maximality::maximalityVerdict(mpq_class(bad), kPrimeBound, tables);
      } catch (const ExcludedBasePoint&) {
        rejected = true;
      }
      o.require(rejected, "a = " + std::to_string(bad) + " rejected");
    }
    std::size_t inconsistent = 0;
    for (const auto& a : maximality::randomBasePoints(kRandomBasePoints, kSeed)) {
      try {
        maximality::maximalityVerdict(a, kPrimeBound, tables);
      } catch (const ModelInconsistency&) {
        ++inconsistent;
      } catch (const InsufficientData&) {
      }
    }
    o.detail << inconsistent << " model inconsistencies in " << kRandomBasePoints << " random base points";
    o.require(inconsistent == 0, "no model inconsistency");
  });

  criterion(7, "radical identities at 20 points, 256 bits", 0, [&](Outcome& o) {
    using constantfield::Real;
    constantfield::PrecisionScope scope(2 * kPrecision);
    const Real bound(kResidualBound), floor = pow(Real(2), -static_cast<int>(kPrecision));
    Real worst = 0, worstRatio = 0;
    for (const auto& t0 : constantfield::samplePoints(kRadicalSamples, kSeed, kPrecision)) {
      const auto base = constantfield::radicalIdentityResiduals(t0, kPrecision);
      const auto fine = constantfield::radicalIdentityResiduals(t0, 2 * kPrecision);
      for (std::size_t i = 0; i < 4; ++i) {
        worst = std::max(worst, base.relative[i]);
        o.require(base.relative[i] < bound, "identity " + std::to_string(i + 1) + " residual");
        const Real ratio = fine.relative[i] / std::max(base.relative[i], floor);
        worstRatio = std::max(worstRatio, ratio);
        o.require(ratio * Real(kShrinkFactor) <= 1, "identity " + std::to_string(i + 1) + " shrink");
      }
    }
    o.detail << "max residual " << worst.str(3, std::ios_base::scientific) << ", max fine/coarse "
             << worstRatio.str(3, std::ios_base::scientific);
  });

  criterion(8, "conjugacy on Omega_3 x Omega_3, triple theorem, random cross-checks", 0, [&](Outcome& o) {
    o.require(treeauto::verifyConjugacyBruteForce(3).allPassed(), "conjugacy brute force");
    for (int n = 1; n <= 3; ++n)
      o.require(selfsim::verifyTripleTheorem(n).allPassed(), "triple theorem at n = " + std::to_string(n));
    const Report r = treeauto::randomCrossChecks(kRandomSamples, kSeed);
    for (const auto& c : r.checks) o.require(c.passed, c.id);
    o.detail << kRandomSamples << " random samples";
  });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
