#ifndef IMG_MAXIMALITY_HPP
#define IMG_MAXIMALITY_HPP

// Level-4 maximality certifier for a rational base point a: square classes
// plus elimination of the maximal subgroups of M_4 by Frobenius cycle types.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "img/arith_model.hpp"
#include "img/report.hpp"
#include "img/tree_auto.hpp"

namespace img::maximality {

using treeauto::CycleType;

inline constexpr std::uint32_t kDefaultPrimeBound = 10000;
inline constexpr std::size_t kMinObservations = 5;

/// Throws ExcludedBasePoint for a in {0, 2}.
void validateBasePoint(const mpq_class& a);

struct SquareClassResult {
  static constexpr std::array<const char*, 4> kLabels{"-1", "2", "a", "2-a"};
  std::array<mpz_class, 4> parts;  // squarefree parts, in label order
  bool passed = false;
  /// Smallest (then lexicographically first) index set whose product is a square.
  std::vector<int> dependency;
};

SquareClassResult squareClassTest(const mpq_class& a);

struct FrobeniusObservation {
  std::uint32_t prime = 0;
  CycleType type;
};

struct FrobeniusSample {
  std::vector<FrobeniusObservation> observations;  // sorted by prime
  std::size_t primesTried = 0;                      // odd primes examined
};

/// Factorization patterns of the level-4 specialized numerator modulo the odd
/// primes up to the bound at which it stays squarefree.
FrobeniusSample sampleFrobenius(const mpq_class& a, std::uint32_t primeBound);

/// Cycle-type tables of M_4 and of its maximal subgroups, in model order.
struct LevelFourTables {
  std::set<CycleType> full;
  std::vector<std::set<CycleType>> maximal;
};

LevelFourTables tablesFromModel(const arithmodel::ArithLevelModel& model);

struct EliminationReport {
  std::map<std::size_t, FrobeniusObservation> eliminated;  // subgroup index -> witness
  std::vector<std::size_t> surviving;
};

/// Throws ModelInconsistency if an observed type is not a type of M_4.
EliminationReport eliminateMaximalSubgroups(const std::vector<FrobeniusObservation>& obs,
                                            const LevelFourTables& tables);

enum class VerdictKind { Maximal, NotMaximal, Inconclusive };
std::string verdictName(VerdictKind k);

struct MaximalityVerdict {
  mpq_class a;
  VerdictKind kind = VerdictKind::Inconclusive;
  SquareClassResult squareClass;
  EliminationReport elimination;
  std::size_t primesTried = 0;
  std::size_t observations = 0;
  std::string reason;                        // NotMaximal only
  std::vector<std::string> derivation;       // NotMaximal only
  std::vector<std::set<CycleType>> survivorTables;  // Inconclusive only
};

MaximalityVerdict maximalityVerdict(const mpq_class& a, std::uint32_t primeBound, const LevelFourTables& tables);
MaximalityVerdict maximalityVerdict(const mpq_class& a, std::uint32_t primeBound = kDefaultPrimeBound);

/// Table lookup only: every subgroup has a witness whose type lies in the
/// table of M_4 and outside the subgroup's table.
bool recheckCertificate(const MaximalityVerdict& v, const LevelFourTables& tables);

/// Seeded rationals u/v with |u| <= height, 1 <= v <= height, a not in {0, 2}.
std::vector<mpq_class> randomBasePoints(std::size_t count, std::uint64_t seed, long height = 20);

/// Consistency of sampled types with M_4 over random base points, monotonicity
/// of eliminations in the prime bound, certificate re-checks, and invariance
/// of the square-class test under rewriting u/v as (u w^2)/(v w^2).
Report verifyCertifierProperties(const LevelFourTables& tables, std::size_t randomPoints, std::uint64_t seed,
                                 std::uint32_t primeBound);

}  // namespace img::maximality

#endif  // IMG_MAXIMALITY_HPP
