#ifndef IMG_TESTS_ORACLES_HPP
#define IMG_TESTS_ORACLES_HPP

// Reference implementations used only by the tests. They work on explicit
// leaf permutations and never call the library's group code.

#include <algorithm>
#include <cstddef>
#include <set>
#include <vector>

#include "img/tree_auto.hpp"

namespace oracle {

using Perm = std::vector<std::size_t>;

// Walks the leaf down the tree, flipping the current letter at every vertex
// whose swap bit is set.
inline std::size_t leafImage(const img::treeauto::Portrait& p, std::size_t leaf) {
  const int n = p.level();
  std::size_t vertex = 0, out = 0;
  for (int d = 0; d < n; ++d) {
    const std::size_t bit = (leaf >> (n - 1 - d)) & 1u;
    out = (out << 1) | (bit ^ (p.swapAt(vertex) ? 1u : 0u));
    vertex = 2 * vertex + 1 + bit;
  }
  return out;
}

inline Perm perm(const img::treeauto::Portrait& p) {
  Perm out(p.leafCount());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = leafImage(p, i);
  return out;
}

// Left to right: x first, then y.
inline Perm then(const Perm& x, const Perm& y) {
  Perm out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = y[x[i]];
  return out;
}

inline Perm inverse(const Perm& x) {
  Perm out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[x[i]] = i;
  return out;
}

inline std::set<Perm> generate(const std::vector<Perm>& gens) {
  Perm id(gens.front().size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  std::set<Perm> seen{id};
  std::vector<Perm> frontier{id};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        Perm y = then(x, g);
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  return seen;
}

inline std::vector<std::size_t> cycleLengths(const Perm& x) {
  std::vector<bool> seen(x.size(), false);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = x[j]) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Every portrait of Omega_n, by counting through the swap bits.
inline std::vector<img::treeauto::Portrait> allPortraits(int n) {
  const std::size_t bits = (std::size_t{1} << n) - 1;
  std::vector<img::treeauto::Portrait> out;
  for (std::size_t m = 0; m < (std::size_t{1} << bits); ++m) {
    std::vector<bool> b(bits);
    for (std::size_t i = 0; i < bits; ++i) b[i] = (m >> i) & 1u;
    out.push_back(img::treeauto::Portrait::fromBits(n, b));
  }
  return out;
}

}  // namespace oracle

#endif  // IMG_TESTS_ORACLES_HPP
