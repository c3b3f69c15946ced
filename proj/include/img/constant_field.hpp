#ifndef IMG_CONSTANT_FIELD_HPP
#define IMG_CONSTANT_FIELD_HPP

// Numeric preimage tree of f(x) = 2 / (x - 1)^2 and the radical identities
// among its roots; the finite group content behind the constant field.

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "img/report.hpp"

namespace img::constantfield {

using Real = boost::multiprecision::mpfr_float;

/// Sets the working precision (in bits) of newly created Real values and
/// restores the previous one on destruction.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

struct ComplexApprox {
  Real re;
  Real im;
  unsigned precision = 0;  // bits

  static ComplexApprox make(const Real& re, const Real& im, unsigned precision);
  static ComplexApprox fromDouble(double re, double im, unsigned precision);
  Real abs() const;
  std::string toString(int digits = 20) const;
};

ComplexApprox operator+(const ComplexApprox& a, const ComplexApprox& b);
ComplexApprox operator-(const ComplexApprox& a, const ComplexApprox& b);
ComplexApprox operator*(const ComplexApprox& a, const ComplexApprox& b);
ComplexApprox operator/(const ComplexApprox& a, const ComplexApprox& b);
/// Principal branch: real part >= 0, cut along the negative real axis.
ComplexApprox principalSqrt(const ComplexApprox& z);

/// 2^(-bits/2).
Real toleranceFor(unsigned bits);

struct PreimageTreeNumeric {
  ComplexApprox root;
  int depth = 0;
  unsigned precision = 0;
  std::map<std::string, ComplexApprox> values;  // "" is the root; words over {1,2}

  const ComplexApprox& at(const std::string& word) const;
};

/// alpha_(l1) = 1 + sqrt(2/alpha_l), alpha_(l2) = 1 - sqrt(2/alpha_l), principal
/// branch. `flipAt` swaps the two children of one vertex. Throws DegenerateTree
/// if a vertex lands on 0 or an inner vertex on 2.
PreimageTreeNumeric preimageTreeNumeric(const ComplexApprox& t0, int depth, unsigned precision,
                                        const std::optional<std::string>& flipAt = std::nullopt);

/// Residual of f(alpha_(l i)) = alpha_l, maximized over the tree.
Real maxRecursionResidual(const PreimageTreeNumeric& tree);

struct IdentityResiduals {
  std::array<Real, 4> relative;  // identities (1)..(4)
};

IdentityResiduals radicalIdentityResiduals(const ComplexApprox& t0, unsigned precision,
                                           const std::optional<std::string>& flipAt = std::nullopt);

/// Checks the four identities at t0 against toleranceFor(precision).
Report verifyRadicalIdentities(const ComplexApprox& t0, unsigned precision);

/// Seeded complex base points with both coordinates in [-10, 10], kept away
/// from 0 and 2.
std::vector<ComplexApprox> samplePoints(std::size_t count, std::uint64_t seed, unsigned precision);

/// Identities (1)-(4) at seeded sample points; residual shrink when the
/// precision doubles; identity (3) with the branch flipped at each inner vertex.
Report verifyIdentitySamples(std::size_t samples, std::uint64_t seed, unsigned precision);

/// Abelianization (2, 4) of G_n for n = 3..5, and Aut(Z/2 x Z/4) of order 8,
/// non-abelian, by brute force over bijections.
Report dihedralConstantFieldCheck();

struct AutomorphismData {
  std::vector<std::vector<int>> automorphisms;  // images of the 8 elements (a, b) -> 4a + b
  std::optional<std::pair<int, int>> nonCommutingPair;
};
AutomorphismData automorphismsZ2xZ4();

}  // namespace img::constantfield

#endif  // IMG_CONSTANT_FIELD_HPP
