#ifndef IMG_TREE_AUTO_HPP
#define IMG_TREE_AUTO_HPP

// Automorphisms of the finite rooted binary tree T_n.
//
// A Portrait stores one swap bit per internal vertex. Vertices are words over
// {1,2}; they are numbered breadth first in heap order, so the vertex with
// index i has children 2i+1 (letter 1) and 2i+2 (letter 2). The bit at vertex
// w says whether the automorphism swaps the two children of w, where w is the
// *input* vertex. Products act left to right: in compose(u, v) the factor u
// acts first. With this convention
//
//   (x1, x2)t * (y1, y2)t' = (x1 y_t(1), x2 y_t(2)) t t'
//
// is exactly the action homomorphism.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "img/report.hpp"

namespace img::treeauto {

inline constexpr int kMaxLevel = 8;

class Portrait {
 public:
  /// The level-0 identity.
  Portrait() = default;

  static Portrait identity(int level);
  static Portrait sigma(int level);
  /// (left, right) followed by the root swap if `swap` is set.
  static Portrait fromSections(const Portrait& left, const Portrait& right, bool swap);
  /// Bits in breadth-first order; size must be 2^level - 1.
  static Portrait fromBits(int level, const std::vector<bool>& bits);

  int level() const { return level_; }
  std::size_t vertexCount() const { return (std::size_t{1} << level_) - 1; }
  std::size_t leafCount() const { return std::size_t{1} << level_; }

  bool swapAt(std::size_t index) const { return (bits_[index >> 6] >> (index & 63)) & 1u; }
  /// Swap bit at the vertex named by a word over {'1','2'}.
  bool swapAt(std::string_view vertex) const;
  bool rootSwap() const { return level_ > 0 && swapAt(0); }
  bool isIdentity() const;

  /// Image of the leaf with index `leaf` (letters 1/2 read as bits 0/1, first
  /// letter most significant).
  std::size_t leafImage(std::size_t leaf) const;

  std::size_t hash() const;

  friend bool operator==(const Portrait&, const Portrait&) = default;
  friend std::strong_ordering operator<=>(const Portrait& a, const Portrait& b);

 private:
  friend class PortraitBuilder;
  void setSwap(std::size_t index, bool on) {
    const std::uint64_t mask = std::uint64_t{1} << (index & 63);
    if (on)
      bits_[index >> 6] |= mask;
    else
      bits_[index >> 6] &= ~mask;
  }

  int level_ = 0;
  std::array<std::uint64_t, 4> bits_{};
};

struct PortraitHash {
  std::size_t operator()(const Portrait& p) const { return p.hash(); }
};

struct CycleType {
  std::vector<std::size_t> parts;  // ascending

  std::size_t total() const;
  std::string toString() const;
  friend auto operator<=>(const CycleType&, const CycleType&) = default;
};

struct BasicElements {
  Portrait identity;
  Portrait sigma;
};

BasicElements basicElements(int level);

Portrait compose(const Portrait& u, const Portrait& v);
Portrait invert(const Portrait& u);
Portrait power(const Portrait& u, long long exponent);
/// u^-1 * v * u, i.e. v conjugated by u.
Portrait conjugate(const Portrait& v, const Portrait& by);
Portrait commutator(const Portrait& u, const Portrait& v);
std::size_t elementOrder(const Portrait& u);

Portrait section(const Portrait& u, std::string_view vertex);
Portrait restrict(const Portrait& u, int m);

std::vector<std::size_t> leafPermutation(const Portrait& u);
CycleType cycleType(const Portrait& u);
/// Sign of the permutation induced on level m, as +1 or -1.
int sign(const Portrait& u, int m);
/// Single 2^n-cycle on the leaves. Computed two ways and cross-checked.
bool isLevelOdometer(const Portrait& u);
/// Adding machine w = (id, w) sigma truncated to `level`.
Portrait addingMachine(int level);

/// Recursive conjugacy criterion with a memo table. One instance may be reused
/// across many queries; it is not thread-safe.
class ConjugacyTester {
 public:
  bool operator()(const Portrait& u, const Portrait& v);
  std::size_t memoSize() const { return memo_.size(); }

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<Portrait, Portrait>& p) const {
      return p.first.hash() * 0x9e3779b97f4a7c15ull ^ p.second.hash();
    }
  };
  std::unordered_map<std::pair<Portrait, Portrait>, bool, PairHash> memo_;
};

bool areConjugate(const Portrait& u, const Portrait& v);

/// Canonical representative of the conjugacy class of u in Omega_n. Two
/// portraits are conjugate iff their keys are equal.
Portrait conjugacyClassKey(const Portrait& u);

/// Wire format "n:HEX".
std::string encode(const Portrait& u);
Portrait decode(std::string_view text);

Portrait randomPortrait(int level, std::mt19937_64& rng);

/// Conjugacy test and class keys against orbits computed by conjugating with
/// every element of Omega_n (n <= 3).
Report verifyConjugacyBruteForce(int level);

/// Associativity, inverses, leaf action, signs, odometers and the wire format
/// on random portraits of levels 1..maxLevel.
Report randomCrossChecks(std::size_t samples, std::uint64_t seed, int maxLevel = 7);

}  // namespace img::treeauto

template <>
struct std::hash<img::treeauto::Portrait> {
  std::size_t operator()(const img::treeauto::Portrait& p) const { return p.hash(); }
};

#endif  // IMG_TREE_AUTO_HPP
