#ifndef IMG_SELF_SIM_HPP
#define IMG_SELF_SIM_HPP

// Wreath recursions and fully enumerated finite-level groups.

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "img/report.hpp"
#include "img/tree_auto.hpp"

namespace img::selfsim {

using treeauto::Portrait;

struct Letter {
  std::string symbol;
  bool inverse = false;
};
using Word = std::vector<Letter>;

/// Parses "a1 a3^-1 a2" (whitespace separated, optional ^-1 suffix).
Word parseWord(const std::string& text);
std::string formatWord(const Word& w);

/// Wreath recursion: symbol -> (left word, right word) followed by an
/// optional root swap.
struct Rule {
  Word left;
  Word right;
  bool swap = false;
};

class RecursionSystem {
 public:
  RecursionSystem(std::string name, std::map<std::string, Rule> rules, std::map<std::string, Word> derived = {});

  const std::string& name() const { return name_; }
  const std::map<std::string, Rule>& rules() const { return rules_; }
  const std::map<std::string, Word>& derived() const { return derived_; }
  bool hasSymbol(const std::string& s) const { return rules_.count(s) != 0; }

  /// Level-n truncation of a generator; memoized per (name, level).
  Portrait unfold(const std::string& symbol, int level) const;
  /// Product of unfolded letters, left factor acting first.
  Portrait evaluate(const Word& w, int level) const;
  /// A generator or one of the named derived words.
  Portrait element(const std::string& name, int level) const;

 private:
  struct Memo {
    std::mutex mutex;
    std::map<std::pair<std::string, int>, Portrait> table;
  };

  std::string name_;
  std::map<std::string, Rule> rules_;
  std::map<std::string, Word> derived_;
  std::shared_ptr<Memo> memo_;
};

/// a1 = sigma, a2 = (a3^-1, a2^-1) sigma, a3 = (a2, a3), together with the
/// derived words g1 = a2 a3^-1, g2 = a3^-1 a2, b1 = a1 a3 a1 a3^-1,
/// b2 = a3^-1 a1 a3 a1.
RecursionSystem builtinSystemF();

/// The standard-form generators binf = sigma, b0 = (binf, id) sigma,
/// b2 = (b0, b2) to which a1, a2, a3 are conjugate.
RecursionSystem builtinSystemStandard();

Portrait unfoldGenerator(const RecursionSystem& sys, const std::string& name, int level);

inline constexpr std::size_t kDefaultClosureCap = std::size_t{1} << 16;

/// A finite subgroup of Omega_n given by its full element list.
class LevelGroup {
 public:
  /// Trivial group at level 0.
  LevelGroup() : level_(0), elements_{Portrait{}} {}
  /// `elements` must be closed; they are sorted and deduplicated here.
  LevelGroup(int level, std::vector<Portrait> generators, std::vector<Portrait> elements);

  int level() const { return level_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Portrait>& elements() const { return elements_; }
  const std::vector<Portrait>& generators() const { return generators_; }
  bool contains(const Portrait& p) const;
  bool isSubsetOf(const LevelGroup& other) const;

  friend bool operator==(const LevelGroup& a, const LevelGroup& b) { return a.elements_ == b.elements_; }

 private:
  int level_ = 0;
  std::vector<Portrait> generators_;
  std::vector<Portrait> elements_;
};

/// Breadth-first closure multiplying by generators on the right.
LevelGroup closure(std::span<const Portrait> gens, std::size_t cap = kDefaultClosureCap);
LevelGroup closure(int level, std::span<const Portrait> gens, std::size_t cap = kDefaultClosureCap);
LevelGroup trivialGroup(int level);
/// All of Omega_n; only for n <= 4.
LevelGroup fullTreeGroup(int level);

LevelGroup normalClosure(const LevelGroup& g, std::span<const Portrait> seeds,
                         std::size_t cap = kDefaultClosureCap);
LevelGroup commutatorSubgroup(const LevelGroup& g);
LevelGroup centralizer(const LevelGroup& g, const Portrait& x);
LevelGroup center(const LevelGroup& g);
std::size_t subgroupIndex(const LevelGroup& g, const LevelGroup& h);
LevelGroup intersection(const LevelGroup& h1, const LevelGroup& h2);
/// Image of g under restriction to level m.
LevelGroup restrictGroup(const LevelGroup& g, int m);
bool isAbelian(const LevelGroup& g);
bool isNormalIn(const LevelGroup& h, const LevelGroup& g);
/// Elements of g whose conjugates of every generator of `target` stay in `target`.
bool normalizes(const Portrait& x, const LevelGroup& target);
/// Small generating set chosen greedily in canonical element order.
std::vector<Portrait> greedyGenerators(const LevelGroup& g);
/// Conjugacy class of x under g.
std::vector<Portrait> conjugacyClass(const LevelGroup& g, const Portrait& x);

/// Invariant factors of g / [g, g], ascending, e.g. (2, 4). The trivial
/// quotient gives an empty sequence.
std::vector<std::size_t> abelianInvariants(const LevelGroup& g);

/// The number of y with (x, y) in gN (no root swap).
std::size_t sectionPairCount(const LevelGroup& gN, const Portrait& x);

/// The named subgroups of the geometric group at one level.
struct GeometricData {
  int level = 0;
  LevelGroup G;
  LevelGroup H1, H2, H3;
  LevelGroup U;
  LevelGroup commutator;
};

GeometricData geometricData(const RecursionSystem& sys, int level);

/// Checks the conjugacy description of the generator triple at one level.
/// When `triple` is given it replaces (a1, a2, a3).
Report verifyGeometricPresentation(int level, const std::optional<std::array<Portrait, 3>>& triple = std::nullopt);

/// Exhaustive check of the simultaneous conjugacy theorem at level <= 3.
Report verifyTripleTheorem(int level);

/// Finite-level checks of the structure of G, U, H_i and the centralizers.
Report verifyGeometricStructure(int level);

}  // namespace img::selfsim

#endif  // IMG_SELF_SIM_HPP
