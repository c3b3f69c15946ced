#include "img/constant_field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "img/errors.hpp"
#include "img/self_sim.hpp"

namespace img::constantfield {

namespace {

unsigned digits10For(unsigned bits) { return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1; }

std::string sci(const Real& x) { return x.str(3, std::ios_base::scientific); }

}  // namespace

PrecisionScope::PrecisionScope(unsigned bits) : saved_(Real::default_precision()) {
  if (bits < 16) throw InvalidArgument("precision must be at least 16 bits");
  Real::default_precision(digits10For(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_); }

ComplexApprox ComplexApprox::make(const Real& re, const Real& im, unsigned precision) {
  return ComplexApprox{re, im, precision};
}

ComplexApprox ComplexApprox::fromDouble(double re, double im, unsigned precision) {
  PrecisionScope scope(precision);
  return ComplexApprox{Real(re), Real(im), precision};
}

Real ComplexApprox::abs() const { return sqrt(re * re + im * im); }

std::string ComplexApprox::toString(int digits) const {
  return re.str(digits) + (im < 0 ? " - " : " + ") + Real(boost::multiprecision::abs(im)).str(digits) + "i";
}

ComplexApprox operator+(const ComplexApprox& a, const ComplexApprox& b) {
  return {a.re + b.re, a.im + b.im, std::min(a.precision, b.precision)};
}

ComplexApprox operator-(const ComplexApprox& a, const ComplexApprox& b) {
  return {a.re - b.re, a.im - b.im, std::min(a.precision, b.precision)};
}

ComplexApprox operator*(const ComplexApprox& a, const ComplexApprox& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re, std::min(a.precision, b.precision)};
}

ComplexApprox operator/(const ComplexApprox& a, const ComplexApprox& b) {
  const Real d = b.re * b.re + b.im * b.im;
  if (d == 0) throw DegenerateTree("complex division by zero");
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d, std::min(a.precision, b.precision)};
}

ComplexApprox principalSqrt(const ComplexApprox& z) {
  const Real r = z.abs();
  if (r == 0) return {Real(0), Real(0), z.precision};
  Real a, b;
  if (z.re >= 0) {
    a = sqrt((r + z.re) / 2);
    b = z.im / (2 * a);
  } else {
    b = sqrt((r - z.re) / 2);
    if (z.im < 0) b = -b;
    a = z.im / (2 * b);
  }
  return {a, b, z.precision};
}

Real toleranceFor(unsigned bits) {
  PrecisionScope scope(bits);
  return pow(Real(2), -static_cast<int>(bits / 2));
}

const ComplexApprox& PreimageTreeNumeric::at(const std::string& word) const {
  auto it = values.find(word);
  if (it == values.end()) throw InvalidArgument("no vertex '" + word + "' in the preimage tree");
  return it->second;
}

PreimageTreeNumeric preimageTreeNumeric(const ComplexApprox& t0, int depth, unsigned precision,
                                        const std::optional<std::string>& flipAt) {
  if (depth < 0 || depth > 8) throw InvalidArgument("tree depth must lie in 0..8");
  PrecisionScope scope(precision);
  const Real tol = toleranceFor(precision);
  const ComplexApprox one{Real(1), Real(0), precision}, two{Real(2), Real(0), precision};
  PreimageTreeNumeric tree;
  tree.root = ComplexApprox{Real(t0.re), Real(t0.im), precision};
  tree.depth = depth;
  tree.precision = precision;
  tree.values.emplace("", tree.root);
  std::vector<std::string> level{""};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::string> next;
    for (const auto& w : level) {
      const ComplexApprox& v = tree.values.at(w);
      if (v.abs() < tol) throw DegenerateTree("vertex '" + w + "' is at 0");
      if ((v - two).abs() < tol) throw DegenerateTree("vertex '" + w + "' is at 2, so a child is at 0");
      ComplexApprox s = principalSqrt(two / v);
      if (flipAt && *flipAt == w) s = ComplexApprox{-s.re, -s.im, precision};
      tree.values.emplace(w + "1", one + s);
      tree.values.emplace(w + "2", one - s);
      next.push_back(w + "1");
      next.push_back(w + "2");
    }
    level = std::move(next);
  }
  for (const auto& w : level)
    if (tree.values.at(w).abs() < tol) throw DegenerateTree("vertex '" + w + "' is at 0");
  return tree;
}

Real maxRecursionResidual(const PreimageTreeNumeric& tree) {
  PrecisionScope scope(tree.precision);
  const ComplexApprox one{Real(1), Real(0), tree.precision}, two{Real(2), Real(0), tree.precision};
  Real worst = 0;
  for (const auto& [w, v] : tree.values) {
    if (w.empty()) continue;
    const ComplexApprox& parent = tree.values.at(w.substr(0, w.size() - 1));
    const ComplexApprox d = v - one;
    const Real r = ((two / (d * d)) - parent).abs() / parent.abs();
    worst = std::max(worst, r);
  }
  return worst;
}

namespace {

std::vector<std::string> wordsOfLength(int n) {
  std::vector<std::string> out{""};
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> next;
    for (const auto& w : out) {
      next.push_back(w + "1");
      next.push_back(w + "2");
    }
    out = std::move(next);
  }
  return out;
}

Real relativeError(const ComplexApprox& lhs, const ComplexApprox& rhs) {
  const Real scale = rhs.abs();
  const Real diff = (lhs - rhs).abs();
  return scale == 0 ? diff : Real(diff / scale);
}

}  // namespace

IdentityResiduals radicalIdentityResiduals(const ComplexApprox& t0, unsigned precision,
                                           const std::optional<std::string>& flipAt) {
  const PreimageTreeNumeric tree = preimageTreeNumeric(t0, 3, precision, flipAt);
  PrecisionScope scope(precision);
  const ComplexApprox one{Real(1), Real(0), precision}, two{Real(2), Real(0), precision},
      four{Real(4), Real(0), precision}, minusOne{Real(-1), Real(0), precision};
  auto A = [&](const std::string& w) -> const ComplexApprox& { return tree.at(w); };
  IdentityResiduals out;
  for (auto& r : out.relative) r = 0;

  for (int len = 0; len <= 2; ++len)
    for (const auto& w : wordsOfLength(len))
      out.relative[0] = std::max(out.relative[0], relativeError(A(w + "1") * A(w + "2"), (A(w) - two) / A(w)));

  for (int len = 1; len <= 2; ++len) {
    const auto words = wordsOfLength(len);
    for (const auto& w : words)
      for (const auto& v : words) {
        if (w == v) continue;
        const ComplexApprox p = (A(w + "1") - one) * (A(v + "1") - one);
        out.relative[1] = std::max(out.relative[1], relativeError(p * p, four / (A(w) * A(v))));
      }
  }

  const ComplexApprox e3 = (A("111") - one) * (A("121") - one) / two * ((A("11") - one) / (A("21") - one));
  out.relative[2] = relativeError(e3 * e3, minusOne);

  const ComplexApprox e4 = one / (A("1") - one) * (two / (A("11") - one)) * (two / (A("21") - one));
  out.relative[3] = relativeError(e4 * e4, two * (A("") - two));
  return out;
}

Report verifyRadicalIdentities(const ComplexApprox& t0, unsigned precision) {
  Report r;
  r.title = "radical identities at t0 = " + t0.toString(12) + " (" + std::to_string(precision) + " bits)";
  const Real tol = toleranceFor(precision);
  const PreimageTreeNumeric tree = preimageTreeNumeric(t0, 3, precision);
  const Real rec = maxRecursionResidual(tree);
  r.add("recursion", "f(alpha_(l i)) = alpha_l on the depth-3 tree", rec < tol, "residual " + sci(rec));
  const IdentityResiduals res = radicalIdentityResiduals(t0, precision);
  static const std::array<const char*, 4> claims{
      "alpha_(l1) alpha_(l2) = (alpha_l - 2) / alpha_l",
      "((alpha_(l1) - 1)(alpha_(l'1) - 1))^2 = 4 / (alpha_l alpha_l')",
      "[(alpha_111 - 1)(alpha_121 - 1)/2 * (alpha_11 - 1)/(alpha_21 - 1)]^2 = -1",
      "[1/(alpha_1 - 1) * 2/(alpha_11 - 1) * 2/(alpha_21 - 1)]^2 = 2(alpha - 2)"};
  for (std::size_t i = 0; i < 4; ++i)
    r.add("identity-" + std::to_string(i + 1), claims[i], res.relative[i] < tol, "relative residual " + sci(res.relative[i]));
  return r;
}

std::vector<ComplexApprox> samplePoints(std::size_t count, std::uint64_t seed, unsigned precision) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::vector<ComplexApprox> out;
  while (out.size() < count) {
    const double x = coord(rng), y = coord(rng);
    if (std::hypot(x, y) < 0.5 || std::hypot(x - 2, y) < 0.5) continue;
    out.push_back(ComplexApprox::fromDouble(x, y, precision));
  }
  return out;
}

AutomorphismData automorphismsZ2xZ4() {
  auto add = [](int x, int y) { return 4 * ((x / 4 + y / 4) % 2) + (x % 4 + y % 4) % 4; };
  AutomorphismData out;
  std::vector<int> phi(8);
  std::iota(phi.begin(), phi.end(), 0);
  do {
    bool hom = true;
    for (int x = 0; x < 8 && hom; ++x)
      for (int y = 0; y < 8 && hom; ++y) hom = phi[static_cast<std::size_t>(add(x, y))] == add(phi[static_cast<std::size_t>(x)], phi[static_cast<std::size_t>(y)]);
    if (hom) out.automorphisms.push_back(phi);
  } while (std::next_permutation(phi.begin(), phi.end()));
  const auto& autos = out.automorphisms;
  for (std::size_t i = 0; i < autos.size() && !out.nonCommutingPair; ++i)
    for (std::size_t j = i + 1; j < autos.size(); ++j) {
      bool commute = true;
      for (std::size_t x = 0; x < 8; ++x)
        commute = commute && autos[i][static_cast<std::size_t>(autos[j][x])] == autos[j][static_cast<std::size_t>(autos[i][x])];
      if (!commute) {
        out.nonCommutingPair = {static_cast<int>(i), static_cast<int>(j)};
        break;
      }
    }
  return out;
}

Report dihedralConstantFieldCheck() {
  Report r;
  r.title = "finite content of the constant field";
  const auto sys = selfsim::builtinSystemF();
  for (int n = 3; n <= 5; ++n) {
    const auto inv = selfsim::abelianInvariants(selfsim::geometricData(sys, n).G);
    std::string shown;
    for (auto k : inv) shown += (shown.empty() ? "" : ",") + std::to_string(k);
    r.add("abelianization-" + std::to_string(n), "G_" + std::to_string(n) + " / [G,G] = Z/2 x Z/4",
          inv == std::vector<std::size_t>{2, 4}, "(" + shown + ")");
  }
  const AutomorphismData aut = automorphismsZ2xZ4();
  r.add("aut-order", "|Aut(Z/2 x Z/4)| = 8", aut.automorphisms.size() == 8,
        std::to_string(aut.automorphisms.size()) + " automorphisms");
  r.add("aut-nonabelian", "Aut(Z/2 x Z/4) is non-abelian", aut.nonCommutingPair.has_value(),
        aut.nonCommutingPair ? "automorphisms #" + std::to_string(aut.nonCommutingPair->first) + " and #" +
                                   std::to_string(aut.nonCommutingPair->second) + " do not commute"
                             : "");
  return r;
}

Report verifyIdentitySamples(std::size_t samples, std::uint64_t seed, unsigned precision) {
  Report r;
  r.title = "radical identities at " + std::to_string(samples) + " sample points";
  const auto points = samplePoints(samples, seed, precision);
  const Real tol = toleranceFor(precision);
  PrecisionScope scope(2 * precision);
  // A residual that is already below one unit in the last place cannot shrink
  // further; it counts as that unit.
  const Real floor = pow(Real(2), -static_cast<int>(precision));
  std::array<Real, 4> worst;
  for (auto& w : worst) w = 0;
  bool shrinks = true, flips = true;
  Real worstFlip = 0;
  for (const auto& t0 : points) {
    const IdentityResiduals base = radicalIdentityResiduals(t0, precision);
    const IdentityResiduals fine = radicalIdentityResiduals(t0, 2 * precision);
    for (std::size_t i = 0; i < 4; ++i) {
      worst[i] = std::max(worst[i], base.relative[i]);
      shrinks = shrinks && fine.relative[i] * Real(1e10) <= std::max(base.relative[i], floor);
    }
    for (const char* vertex : {"", "1", "2", "11", "12", "21", "22"}) {
      const Real res = radicalIdentityResiduals(t0, precision, std::string(vertex)).relative[2];
      worstFlip = std::max(worstFlip, res);
      flips = flips && res < tol;
    }
  }
  for (std::size_t i = 0; i < 4; ++i)
    r.add("identity-" + std::to_string(i + 1), "identity (" + std::to_string(i + 1) + ") holds at every sample point",
          worst[i] < tol, "max relative residual " + sci(worst[i]) + ", tolerance " + sci(tol));
  r.add("precision-shrink", "doubling the precision shrinks every residual by at least 10^10", shrinks);
  r.add("branch-independence", "identity (3) survives flipping the square-root branch at any inner vertex", flips,
        "max residual " + sci(worstFlip));
  return r;
}

}  // namespace img::constantfield
