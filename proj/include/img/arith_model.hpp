#ifndef IMG_ARITH_MODEL_HPP
#define IMG_ARITH_MODEL_HPP

// Finite-level model M_n of the arithmetic iterated monodromy group, built
// recursively from the constraints every element of the arithmetic group
// satisfies:
//
//   M_1 = Omega_1,
//   M_n = { (x, y)t : x, y in M_(n-1), y x^-1 in U_(n-1),
//                     and (x, y)t normalizes G_n and U_n }.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "img/report.hpp"
#include "img/self_sim.hpp"
#include "img/tree_auto.hpp"

namespace img::arithmodel {

using selfsim::LevelGroup;
using treeauto::CycleType;
using treeauto::Portrait;

inline constexpr int kDefaultModelCap = 5;

struct ModelOptions {
  int levelCap = kDefaultModelCap;
  /// Level 6 needs about 2^21 candidate pairs and must be requested explicitly.
  bool allowLevel6 = false;
};

struct ModelStats {
  std::size_t candidates = 0;
  std::size_t passRatio = 0;       // y x^-1 in U_(n-1)
  std::size_t passNormalizeG = 0;  // ... and normalizes G_n
  std::size_t passNormalizeU = 0;  // ... and normalizes U_n (final count)
};

struct ArithLevelModel {
  int level = 0;
  LevelGroup M;
  LevelGroup G;
  LevelGroup U;
  LevelGroup frattini;
  std::vector<LevelGroup> maximalSubgroups;
  ModelStats stats;
};

/// Builds M_1..M_n bottom up. Throws ModelConstructionError if some level is
/// not closed under products.
std::vector<ArithLevelModel> buildModelChain(int n, const ModelOptions& options = {});
ArithLevelModel buildModel(int n, const ModelOptions& options = {});

/// Normalizer of G_n in Omega_n by exhaustive sweep (n <= 4), compared with M_n.
Report bruteNormalizerCrossCheck(int n);

/// Subgroup generated by squares and commutators.
LevelGroup frattiniSubgroup(const LevelGroup& g);
/// Intersection of all index-2 subgroups, found by enumerating homomorphisms
/// to Z/2 on a generating set. Independent of frattiniSubgroup.
LevelGroup frattiniByIndexTwoSubgroups(const LevelGroup& g);
/// log2 [g : Frattini(g)].
std::size_t frattiniRank(const LevelGroup& g);
/// All index-2 subgroups as kernels of the nontrivial characters of
/// g / Frattini(g), in a fixed order (character index 1 .. 2^r - 1).
std::vector<LevelGroup> maximalSubgroups(const LevelGroup& g);
/// Index-2 subgroups via homomorphism enumeration, sorted by element list.
std::vector<LevelGroup> indexTwoSubgroupsByHomomorphisms(const LevelGroup& g);

std::set<CycleType> cycleTypeTable(const LevelGroup& g);

/// Display name for maximal subgroup i (0-based): "Mmax-01" ...
std::string maximalSubgroupName(std::size_t i);

struct GrowthRow {
  int level = 0;
  std::size_t orderG = 0;
  std::size_t orderM = 0;
  std::size_t bound = 0;  // 2^(2n)
  double dimensionRatio = 0;  // log2|M_n| / (2^n - 1)
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  Report checks;
};

GrowthReport orderGrowthReport(int nmax, const ModelOptions& options = {});
/// Same table for an already built chain M_1 .. M_k.
GrowthReport growthReport(const std::vector<ArithLevelModel>& chain);

/// Structural properties of the model: no odometers, normality of U and
/// [G, G], bounded section multiplicity, sigma membership.
Report verifyModelProperties(const ArithLevelModel& model, const ArithLevelModel* below);

}  // namespace img::arithmodel

#endif  // IMG_ARITH_MODEL_HPP
