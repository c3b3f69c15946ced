#ifndef IMG_POLY_ARITH_HPP
#define IMG_POLY_ARITH_HPP

// Integer polynomials for the iterates of f(x) = 2 / (x - 1)^2.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "img/report.hpp"
#include "img/tree_auto.hpp"

namespace img::polyarith {

using treeauto::CycleType;

/// Dense integer polynomial, constant term first. The zero polynomial has no
/// coefficients.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs);
  static IntPoly constant(const mpz_class& c);
  static IntPoly monomial(const mpz_class& c, int degree);
  /// Space-separated decimal coefficients, constant term first.
  static IntPoly parse(const std::string& text);

  bool isZero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  mpz_class coeff(int i) const;
  const mpz_class& leading() const;
  mpz_class content() const;  // non-negative gcd of the coefficients
  mpz_class eval(const mpz_class& x) const;
  mpq_class eval(const mpq_class& x) const;
  IntPoly derivative() const;
  std::string toString() const;

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const mpz_class& k, const IntPoly& a);
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<mpz_class> c_;
};

/// Divides every coefficient by d; throws if some division is inexact.
IntPoly divExact(const IntPoly& a, const mpz_class& d);
/// Exact quotient a / b over the integers; throws if b does not divide a.
IntPoly divExact(const IntPoly& a, const IntPoly& b);
/// lc(b)^(deg a - deg b + 1) a = q b + r.
IntPoly pseudoRemainder(const IntPoly& a, const IntPoly& b);
IntPoly primitivePart(const IntPoly& a);

/// f^n(x) = g_n(x) / h_n(x) with g_1 = 2, h_1 = (x - 1)^2,
/// g_n = 2 h_(n-1)^2, h_n = (g_(n-1) - h_(n-1))^2.
struct IterateFraction {
  int n = 0;
  IntPoly g;
  IntPoly h;
};
IterateFraction iteratePair(int n);

struct IterateMetadata {
  int m = 0;        // deg_x (g_n - t h_n)
  int delta = 0;    // deg g_n
  int epsilon = 0;  // deg h_n
  int q = 0;        // deg of the wronskian h_n g_n' - g_n h_n'
  mpz_class D;      // leading coefficient of the wronskian
  IntPoly wronskian;
};
IterateMetadata iterateMetadata(int n);

/// Subresultant algorithm over the integers.
mpz_class resultant(const IntPoly& p, const IntPoly& q);
/// Multimodular resultant: 31-bit primes, CRT up to the Hadamard bound.
mpz_class resultantModular(const IntPoly& p, const IntPoly& q);
/// Fraction-free determinant of the Sylvester matrix built with the given
/// formal degrees (which may exceed the actual ones).
mpz_class resultantSylvester(const IntPoly& p, const IntPoly& q, int degP, int degQ);
/// (-1)^(d(d-1)/2) Res(p, p') / lc(p).
mpz_class discriminant(const IntPoly& p);

/// Delta_n(t) = sign * 2^c * t^a * (2 - t)^b.
struct DiscriminantShape {
  int n = 0;
  int sign = 1;
  unsigned long c = 0;
  unsigned long a = 0;
  unsigned long b = 0;
  IntPoly delta;  // Delta_n as a polynomial in t
  std::string toString() const;
};

/// disc_x(g_n - t h_n) by evaluation at t = 0, 1, ..., deg and exact
/// interpolation, then split into powers of t and (2 - t). Throws
/// ShapeViolation if the cofactor is not +-2^c.
DiscriminantShape discriminantShape(int n);
/// The interpolated polynomial only.
IntPoly discriminantPolynomial(int n);

/// v g_n - u h_n for a = u/v, divided by its content (sign kept).
IntPoly specializeNumerator(int n, const mpq_class& a);

/// Degrees of the irreducible factors mod prime; nullopt when not squarefree
/// mod prime. Throws BadPrime if prime divides the leading coefficient or is
/// not an odd-or-two prime below 2^31.
std::optional<CycleType> factorDegreesModP(const IntPoly& p, std::uint32_t prime);

/// The squarefree integer s with a = s * (rational square).
mpz_class squarefreePart(const mpq_class& a);

/// Degrees and leading coefficients of g_n, h_n (n <= maxDegreeN), |D_n| = 4^n
/// (n <= maxWronskianN), Res(g_k, h_n) = +-2^j for 2 <= k <= n <= maxResultantN.
Report verifyIterateInvariants(int maxDegreeN = 8, int maxWronskianN = 6, int maxResultantN = 5);
/// Shape of Delta_n for 1 <= n <= maxN.
Report verifyDiscriminantShapes(int maxN);
/// disc(specializeNumerator(n, a)) against Delta_n(a) (n <= maxExactN) and
/// against the primes of 2 num(a) num(2-a) den(a) (n <= maxPrimeN).
Report verifySpecializationConsistency(int maxExactN, int maxPrimeN, const std::vector<mpq_class>& points);
/// Subresultant and multimodular resultants agree; Res(p,q) = (-1)^(deg p deg q) Res(q,p).
Report compareResultantAlgorithms(std::size_t samples, std::uint64_t seed, int maxDegree = 12);

/// Parses "u/v" or an integer literal; throws InvalidArgument otherwise.
mpq_class parseRational(const std::string& text);
std::string formatRational(const mpq_class& a);

}  // namespace img::polyarith

#endif  // IMG_POLY_ARITH_HPP
