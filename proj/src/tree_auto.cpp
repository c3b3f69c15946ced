#include "img/tree_auto.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <unordered_map>

#include "img/errors.hpp"

namespace img::treeauto {

class PortraitBuilder {
 public:
  explicit PortraitBuilder(int level) {
    if (level < 0) throw InvalidArgument("negative tree level " + std::to_string(level));
    if (level > kMaxLevel)
      throw InvalidArgument("tree level " + std::to_string(level) + " exceeds the supported maximum " +
                            std::to_string(kMaxLevel));
    p_.level_ = level;
  }
  void set(std::size_t index, bool on) { p_.setSwap(index, on); }
  Portrait take() { return p_; }

 private:
  Portrait p_;
};

namespace {

void requireSameLevel(const Portrait& u, const Portrait& v, const char* what) {
  if (u.level() != v.level())
    throw InvalidArgument(std::string(what) + ": level mismatch (" + std::to_string(u.level()) + " vs " +
                          std::to_string(v.level()) + ")");
}

// Index of the vertex word over {'1','2'}; throws on bad letters.
std::size_t vertexIndex(std::string_view vertex) {
  std::size_t pos = 0;
  for (char c : vertex) {
    if (c != '1' && c != '2') throw InvalidArgument("vertex word must use letters 1 and 2");
    pos = 2 * pos + (c == '2' ? 1 : 0);
  }
  return (std::size_t{1} << vertex.size()) - 1 + pos;
}

}  // namespace

Portrait Portrait::identity(int level) { return PortraitBuilder(level).take(); }

Portrait Portrait::sigma(int level) {
  if (level < 1) throw InvalidArgument("sigma needs level >= 1");
  PortraitBuilder b(level);
  b.set(0, true);
  return b.take();
}

Portrait Portrait::fromSections(const Portrait& left, const Portrait& right, bool swap) {
  requireSameLevel(left, right, "fromSections");
  const int n = left.level() + 1;
  PortraitBuilder b(n);
  b.set(0, swap);
  // level d of a section lands on level d+1 of the result: left half first.
  for (int d = 0; d < left.level(); ++d) {
    const std::size_t width = std::size_t{1} << d;
    const std::size_t src = width - 1;
    const std::size_t dst = 2 * width - 1;
    for (std::size_t r = 0; r < width; ++r) {
      b.set(dst + r, left.swapAt(src + r));
      b.set(dst + width + r, right.swapAt(src + r));
    }
  }
  return b.take();
}

Portrait Portrait::fromBits(int level, const std::vector<bool>& bits) {
  PortraitBuilder b(level);
  const std::size_t count = (std::size_t{1} << level) - 1;
  if (bits.size() != count)
    throw InvalidArgument("portrait of level " + std::to_string(level) + " needs " + std::to_string(count) +
                          " bits, got " + std::to_string(bits.size()));
  for (std::size_t i = 0; i < count; ++i) b.set(i, bits[i]);
  return b.take();
}

bool Portrait::swapAt(std::string_view vertex) const {
  if (static_cast<int>(vertex.size()) >= level_)
    throw InvalidArgument("vertex '" + std::string(vertex) + "' is not internal at level " + std::to_string(level_));
  return swapAt(vertexIndex(vertex));
}

bool Portrait::isIdentity() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t Portrait::leafImage(std::size_t leaf) const {
  std::size_t pos = 0;
  std::size_t out = 0;
  for (int d = 0; d < level_; ++d) {
    const std::size_t letter = (leaf >> (level_ - 1 - d)) & 1u;
    const std::size_t b = swapAt((std::size_t{1} << d) - 1 + pos);
    out = 2 * out + (letter ^ b);
    pos = 2 * pos + letter;
  }
  return out;
}

std::size_t Portrait::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull ^ static_cast<std::uint64_t>(level_);
  for (std::uint64_t w : bits_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0x100000001b3ull;
  }
  return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const Portrait& a, const Portrait& b) {
  if (auto c = a.level_ <=> b.level_; c != 0) return c;
  // Compare by breadth-first bit string, first vertex most significant.
  for (std::size_t i = 0; i < a.vertexCount(); ++i) {
    const bool x = a.swapAt(i);
    const bool y = b.swapAt(i);
    if (x != y) return x ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return std::strong_ordering::equal;
}

std::size_t CycleType::total() const {
  std::size_t s = 0;
  for (auto p : parts) s += p;
  return s;
}

std::string CycleType::toString() const {
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(parts[i]);
  }
  return out + "}";
}

BasicElements basicElements(int level) {
  return {Portrait::identity(level), Portrait::sigma(level)};
}

Portrait compose(const Portrait& u, const Portrait& v) {
  requireSameLevel(u, v, "compose");
  const std::size_t n = u.vertexCount();
  PortraitBuilder b(u.level());
  // image[i]: index of u(vertex i).
  std::array<std::size_t, (std::size_t{1} << kMaxLevel) - 1> image{};
  const std::size_t parents = n / 2;  // vertices whose children are internal
  for (std::size_t i = 0; i < n; ++i) {
    const bool s = u.swapAt(i);
    b.set(i, s != v.swapAt(image[i]));
    if (i < parents) {
      image[2 * i + 1] = 2 * image[i] + 1 + (s ? 1 : 0);
      image[2 * i + 2] = 2 * image[i] + 2 - (s ? 1 : 0);
    }
  }
  return b.take();
}

Portrait invert(const Portrait& u) {
  const std::size_t n = u.vertexCount();
  PortraitBuilder b(u.level());
  std::array<std::size_t, (std::size_t{1} << kMaxLevel) - 1> image{};
  const std::size_t parents = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const bool s = u.swapAt(i);
    b.set(image[i], s);
    if (i < parents) {
      image[2 * i + 1] = 2 * image[i] + 1 + (s ? 1 : 0);
      image[2 * i + 2] = 2 * image[i] + 2 - (s ? 1 : 0);
    }
  }
  return b.take();
}

Portrait power(const Portrait& u, long long exponent) {
  Portrait base = exponent < 0 ? invert(u) : u;
  unsigned long long e = exponent < 0 ? static_cast<unsigned long long>(-(exponent + 1)) + 1
                                      : static_cast<unsigned long long>(exponent);
  Portrait result = Portrait::identity(u.level());
  while (e) {
    if (e & 1u) result = compose(result, base);
    base = compose(base, base);
    e >>= 1;
  }
  return result;
}

Portrait conjugate(const Portrait& v, const Portrait& by) { return compose(compose(invert(by), v), by); }

Portrait commutator(const Portrait& u, const Portrait& v) {
  return compose(compose(invert(u), invert(v)), compose(u, v));
}

std::size_t elementOrder(const Portrait& u) {
  // Orders in Omega_n are powers of two, at most 2^n.
  std::size_t order = 1;
  Portrait p = u;
  while (!p.isIdentity()) {
    p = compose(p, p);
    order *= 2;
  }
  return order;
}

Portrait section(const Portrait& u, std::string_view vertex) {
  const int k = static_cast<int>(vertex.size());
  if (k > u.level())
    throw InvalidArgument("section vertex '" + std::string(vertex) + "' deeper than level " +
                          std::to_string(u.level()));
  const std::size_t root = vertexIndex(vertex);
  const std::size_t rootPos = root - ((std::size_t{1} << k) - 1);
  PortraitBuilder b(u.level() - k);
  for (int d = 0; d < u.level() - k; ++d) {
    const std::size_t width = std::size_t{1} << d;
    const std::size_t src = (std::size_t{1} << (k + d)) - 1 + rootPos * width;
    for (std::size_t r = 0; r < width; ++r) b.set(width - 1 + r, u.swapAt(src + r));
  }
  return b.take();
}

Portrait restrict(const Portrait& u, int m) {
  if (m < 0 || m > u.level())
    throw InvalidArgument("restriction level " + std::to_string(m) + " outside [0, " + std::to_string(u.level()) +
                          "]");
  PortraitBuilder b(m);
  const std::size_t n = (std::size_t{1} << m) - 1;
  for (std::size_t i = 0; i < n; ++i) b.set(i, u.swapAt(i));
  return b.take();
}

std::vector<std::size_t> leafPermutation(const Portrait& u) {
  std::vector<std::size_t> perm(u.leafCount());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = u.leafImage(i);
  return perm;
}

CycleType cycleType(const Portrait& u) {
  const auto perm = leafPermutation(u);
  std::vector<bool> seen(perm.size(), false);
  CycleType t;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    t.parts.push_back(len);
  }
  std::sort(t.parts.begin(), t.parts.end());
  return t;
}

int sign(const Portrait& u, int m) {
  if (m < 1 || m > u.level())
    throw InvalidArgument("sign level " + std::to_string(m) + " outside [1, " + std::to_string(u.level()) + "]");
  // A swap at depth d < m-1 moves 2^(m-1-d) disjoint pairs on level m: an
  // even permutation. Only swaps at depth m-1 contribute a transposition each.
  const std::size_t first = (std::size_t{1} << (m - 1)) - 1;
  const std::size_t width = std::size_t{1} << (m - 1);
  std::size_t count = 0;
  for (std::size_t r = 0; r < width; ++r) count += u.swapAt(first + r);
  return count % 2 ? -1 : 1;
}

bool isLevelOdometer(const Portrait& u) {
  if (u.level() < 1) throw InvalidArgument("odometer test needs level >= 1");
  bool allNegative = true;
  for (int m = 1; m <= u.level(); ++m) allNegative = allNegative && sign(u, m) == -1;
  const CycleType t = cycleType(u);
  const bool singleCycle = t.parts.size() == 1;
  if (allNegative != singleCycle)
    throw VerificationFailure("odometer sign criterion disagrees with cycle structure for " + encode(u));
  return singleCycle;
}

Portrait addingMachine(int level) {
  Portrait w = Portrait::identity(0);
  for (int k = 1; k <= level; ++k) w = Portrait::fromSections(Portrait::identity(k - 1), w, true);
  return w;
}

bool ConjugacyTester::operator()(const Portrait& u, const Portrait& v) {
  requireSameLevel(u, v, "areConjugate");
  if (u == v) return true;
  if (u.rootSwap() != v.rootSwap()) return false;  // rule (i)
  auto key = u < v ? std::make_pair(u, v) : std::make_pair(v, u);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  const Portrait u1 = section(u, "1"), u2 = section(u, "2");
  const Portrait v1 = section(v, "1"), v2 = section(v, "2");
  bool result;
  if (!u.rootSwap()) {
    result = ((*this)(u1, v1) && (*this)(u2, v2)) || ((*this)(u1, v2) && (*this)(u2, v1));  // rule (ii)
  } else {
    result = (*this)(compose(u1, u2), compose(v1, v2));  // rule (iii)
  }
  memo_.emplace(std::move(key), result);
  return result;
}

bool areConjugate(const Portrait& u, const Portrait& v) {
  ConjugacyTester t;
  return t(u, v);
}

Portrait conjugacyClassKey(const Portrait& u) {
  if (u.level() == 0) return u;
  const Portrait u1 = section(u, "1"), u2 = section(u, "2");
  if (u.rootSwap()) {
    return Portrait::fromSections(conjugacyClassKey(compose(u1, u2)), Portrait::identity(u.level() - 1), true);
  }
  Portrait k1 = conjugacyClassKey(u1), k2 = conjugacyClassKey(u2);
  if (k2 < k1) std::swap(k1, k2);
  return Portrait::fromSections(k1, k2, false);
}

std::string encode(const Portrait& u) {
  static constexpr char kHex[] = "0123456789abcdef";
  const std::size_t n = u.vertexCount();
  const std::size_t digits = (n + 3) / 4;
  // Bit string read as a binary number (first vertex most significant),
  // left-padded with zeros to a whole number of hex digits.
  const std::size_t pad = digits * 4 - n;
  std::string out = std::to_string(u.level()) + ":";
  for (std::size_t d = 0; d < digits; ++d) {
    unsigned nibble = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t pos = d * 4 + k;
      const bool bit = pos >= pad && u.swapAt(pos - pad);
      nibble = (nibble << 1) | (bit ? 1u : 0u);
    }
    out += kHex[nibble];
  }
  return out;
}

Portrait decode(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("portrait text lacks ':'");
  int level = -1;
  const auto head = text.substr(0, colon);
  auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), level);
  if (ec != std::errc{} || ptr != head.data() + head.size())
    throw InvalidArgument("bad portrait level '" + std::string(head) + "'");
  PortraitBuilder b(level);
  const std::size_t n = (std::size_t{1} << level) - 1;
  const std::size_t digits = (n + 3) / 4;
  const auto hex = text.substr(colon + 1);
  if (hex.size() != digits)
    throw InvalidArgument("portrait of level " + std::to_string(level) + " needs " + std::to_string(digits) +
                          " hex digits");
  const std::size_t pad = digits * 4 - n;
  for (std::size_t d = 0; d < digits; ++d) {
    const char c = hex[d];
    unsigned nibble;
    if (c >= '0' && c <= '9')
      nibble = c - '0';
    else if (c >= 'a' && c <= 'f')
      nibble = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      nibble = c - 'A' + 10;
    else
      throw InvalidArgument(std::string("bad hex digit '") + c + "'");
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t pos = d * 4 + k;
      const bool bit = (nibble >> (3 - k)) & 1u;
      if (pos < pad) {
        if (bit) throw InvalidArgument("nonzero padding bit in portrait text");
      } else {
        b.set(pos - pad, bit);
      }
    }
  }
  return b.take();
}

Portrait randomPortrait(int level, std::mt19937_64& rng) {
  std::vector<bool> bits((std::size_t{1} << level) - 1);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng() & 1u;
  return Portrait::fromBits(level, bits);
}

Report verifyConjugacyBruteForce(int level) {
  if (level < 1 || level > 3) throw InvalidArgument("brute-force conjugacy is limited to levels 1..3");
  const std::size_t bitsCount = (std::size_t{1} << level) - 1;
  std::vector<Portrait> omega;
  for (std::size_t mask = 0; mask < (std::size_t{1} << bitsCount); ++mask) {
    std::vector<bool> bits(bitsCount);
    for (std::size_t i = 0; i < bitsCount; ++i) bits[i] = (mask >> i) & 1u;
    omega.push_back(Portrait::fromBits(level, bits));
  }
  std::unordered_map<Portrait, std::size_t> classOf;
  std::size_t classes = 0;
  for (const auto& u : omega) {
    if (classOf.count(u)) continue;
    for (const auto& beta : omega) classOf.emplace(conjugate(u, beta), classes);
    ++classes;
  }
  ConjugacyTester tester;
  std::size_t testerMismatch = 0, keyMismatch = 0;
  for (const auto& u : omega)
    for (const auto& v : omega) {
      const bool same = classOf.at(u) == classOf.at(v);
      if (tester(u, v) != same) ++testerMismatch;
      if ((conjugacyClassKey(u) == conjugacyClassKey(v)) != same) ++keyMismatch;
    }
  const std::string lv = "[n=" + std::to_string(level) + "]";
  const std::string pairs = std::to_string(omega.size() * omega.size()) + " pairs, " + std::to_string(classes) + " classes";
  Report r;
  r.title = "conjugacy against brute force at level " + std::to_string(level);
  r.add("conjugacy-tester", "recursive conjugacy test matches brute force on Omega_n x Omega_n " + lv,
        testerMismatch == 0, std::to_string(testerMismatch) + " mismatches over " + pairs);
  r.add("class-key", "class keys match brute force on Omega_n x Omega_n " + lv, keyMismatch == 0,
        std::to_string(keyMismatch) + " mismatches over " + pairs);
  return r;
}

Report randomCrossChecks(std::size_t samples, std::uint64_t seed, int maxLevel) {
  if (maxLevel < 1 || maxLevel > kMaxLevel) throw InvalidArgument("maxLevel out of range");
  std::mt19937_64 rng(seed);
  std::size_t assoc = 0, inverse = 0, action = 0, signs = 0, odometer = 0, wire = 0, order = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(maxLevel));
    const Portrait u = randomPortrait(n, rng), v = randomPortrait(n, rng), w = randomPortrait(n, rng);
    if (compose(compose(u, v), w) != compose(u, compose(v, w))) ++assoc;
    if (!compose(u, invert(u)).isIdentity() || !compose(invert(u), u).isIdentity()) ++inverse;
    const auto pu = leafPermutation(u), pv = leafPermutation(v), puv = leafPermutation(compose(u, v));
    for (std::size_t i = 0; i < pu.size(); ++i)
      if (puv[i] != pv[pu[i]]) {
        ++action;
        break;
      }
    for (int m = 1; m <= n; ++m) {
      const CycleType t = cycleType(restrict(u, m));
      std::size_t even = 0;
      for (auto len : t.parts) even += (len % 2 == 0);
      if (sign(u, m) != (even % 2 ? -1 : 1)) {
        ++signs;
        break;
      }
    }
    try {
      const bool odo = isLevelOdometer(u);
      if (odo != (cycleType(u).parts == std::vector<std::size_t>{u.leafCount()})) ++odometer;
    } catch (const VerificationFailure&) {
      ++odometer;
    }
    if (decode(encode(u)) != u) ++wire;
    const std::size_t ord = elementOrder(u);
    if (!power(u, static_cast<long long>(ord)).isIdentity() || (ord > 1 && power(u, static_cast<long long>(ord / 2)).isIdentity()))
      ++order;
  }
  const std::string of = " failures in " + std::to_string(samples) + " samples";
  Report r;
  r.title = "random cross-checks (seed " + std::to_string(seed) + ")";
  r.add("associativity", "(uv)w = u(vw)", assoc == 0, std::to_string(assoc) + of);
  r.add("inverse", "u u^-1 = u^-1 u = id", inverse == 0, std::to_string(inverse) + of);
  r.add("leaf-action", "leaf permutation of uv is u's followed by v's", action == 0, std::to_string(action) + of);
  r.add("sign", "sgn_m agrees with the parity of the level-m permutation", signs == 0, std::to_string(signs) + of);
  r.add("odometer", "odometer test agrees with the single-cycle criterion", odometer == 0, std::to_string(odometer) + of);
  r.add("wire-format", "decode(encode(u)) = u", wire == 0, std::to_string(wire) + of);
  r.add("element-order", "u^ord(u) = id and no smaller power of two works", order == 0, std::to_string(order) + of);
  return r;
}

}  // namespace img::treeauto
