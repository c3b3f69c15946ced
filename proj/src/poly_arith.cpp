#include "img/poly_arith.hpp"

#include <algorithm>
#include <random>
#include <regex>
#include <sstream>
#include <utility>

#include "img/errors.hpp"

namespace img::polyarith {

// ---- IntPoly ----

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPoly IntPoly::constant(const mpz_class& c) { return IntPoly({c}); }

IntPoly IntPoly::monomial(const mpz_class& c, int degree) {
  std::vector<mpz_class> v(static_cast<std::size_t>(degree) + 1);
  v.back() = c;
  return IntPoly(std::move(v));
}

IntPoly IntPoly::parse(const std::string& text) {
  std::istringstream in(text);
  std::vector<mpz_class> v;
  std::string tok;
  while (in >> tok) {
    mpz_class z;
    if (z.set_str(tok, 10) != 0) throw InvalidArgument("bad coefficient '" + tok + "'");
    v.push_back(z);
  }
  return IntPoly(std::move(v));
}

void IntPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpz_class IntPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return c_[static_cast<std::size_t>(i)];
}

const mpz_class& IntPoly::leading() const {
  if (c_.empty()) throw InvalidArgument("leading coefficient of the zero polynomial");
  return c_.back();
}

mpz_class IntPoly::content() const {
  mpz_class g = 0;
  for (const auto& x : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

mpz_class IntPoly::eval(const mpz_class& x) const {
  mpz_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

mpq_class IntPoly::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + mpq_class(*it);
  acc.canonicalize();
  return acc;
}

IntPoly IntPoly::derivative() const {
  if (c_.size() < 2) return {};
  std::vector<mpz_class> v(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return IntPoly(std::move(v));
}

std::string IntPoly::toString() const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) out += ' ';
    out += c_[i].get_str();
  }
  return out;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<mpz_class> v(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
  return IntPoly(std::move(v));
}

IntPoly operator-(const IntPoly& a) {
  std::vector<mpz_class> v = a.c_;
  for (auto& x : v) x = -x;
  return IntPoly(std::move(v));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.isZero() || b.isZero()) return {};
  std::vector<mpz_class> v(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  return IntPoly(std::move(v));
}

IntPoly operator*(const mpz_class& k, const IntPoly& a) {
  std::vector<mpz_class> v = a.c_;
  for (auto& x : v) x *= k;
  return IntPoly(std::move(v));
}

IntPoly divExact(const IntPoly& a, const mpz_class& d) {
  if (d == 0) throw InvalidArgument("division by zero");
  std::vector<mpz_class> v = a.coeffs();
  for (auto& x : v) {
    if (!mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t())) throw VerificationFailure("inexact coefficient division");
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  }
  return IntPoly(std::move(v));
}

IntPoly divExact(const IntPoly& a, const IntPoly& b) {
  if (b.isZero()) throw InvalidArgument("division by the zero polynomial");
  std::vector<mpz_class> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) {
    if (!a.isZero()) throw VerificationFailure("inexact polynomial division");
    return {};
  }
  std::vector<mpz_class> q(static_cast<std::size_t>(a.degree() - db) + 1);
  const mpz_class& lb = b.leading();
  for (int k = a.degree() - db; k >= 0; --k) {
    mpz_class& top = r[static_cast<std::size_t>(k + db)];
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t())) throw VerificationFailure("inexact polynomial division");
    mpz_class qk;
    mpz_divexact(qk.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k + j)] -= qk * b.coeffs()[static_cast<std::size_t>(j)];
    q[static_cast<std::size_t>(k)] = qk;
  }
  if (!IntPoly(std::move(r)).isZero()) throw VerificationFailure("inexact polynomial division");
  return IntPoly(std::move(q));
}

IntPoly pseudoRemainder(const IntPoly& a, const IntPoly& b) {
  if (b.isZero()) throw InvalidArgument("pseudo-remainder by zero");
  if (a.degree() < b.degree()) return a;
  const int steps = a.degree() - b.degree() + 1;
  const mpz_class lb = b.leading();
  IntPoly r = a;
  int done = 0;
  while (!r.isZero() && r.degree() >= b.degree()) {
    r = lb * r - IntPoly::monomial(r.leading(), r.degree() - b.degree()) * b;
    ++done;
  }
  mpz_class scale;
  mpz_pow_ui(scale.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(steps - done));
  return scale * r;
}

IntPoly primitivePart(const IntPoly& a) {
  if (a.isZero()) return a;
  return divExact(a, a.content());
}

// ---- iterates ----

IterateFraction iteratePair(int n) {
  if (n < 1 || n > 8) throw InvalidArgument("iterate index must lie in 1..8, got " + std::to_string(n));
  IterateFraction it{1, IntPoly::constant(2), IntPoly({1, -2, 1})};
  while (it.n < n) {
    IntPoly g = mpz_class(2) * (it.h * it.h);
    IntPoly d = it.g - it.h;
    it = {it.n + 1, std::move(g), d * d};
  }
  return it;
}

IterateMetadata iterateMetadata(int n) {
  const IterateFraction it = iteratePair(n);
  IterateMetadata m;
  m.delta = it.g.degree();
  m.epsilon = it.h.degree();
  m.m = std::max(m.delta, m.epsilon);
  m.wronskian = it.h * it.g.derivative() - it.g * it.h.derivative();
  m.q = m.wronskian.degree();
  m.D = m.wronskian.leading();
  return m;
}

// ---- resultants ----

namespace {

mpz_class powz(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

mpz_class exactQuotient(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

using ModPoly = std::vector<std::uint64_t>;

void trimMod(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degMod(const ModPoly& a) { return static_cast<int>(a.size()) - 1; }

std::uint64_t powMod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

std::uint64_t invMod(std::uint64_t a, std::uint64_t p) { return powMod(a, p - 2, p); }

ModPoly reduceMod(const IntPoly& f, std::uint64_t p) {
  ModPoly out(f.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mpz_fdiv_ui(f.coeffs()[i].get_mpz_t(), p);
  trimMod(out);
  return out;
}

// a mod b, b nonzero.
ModPoly remMod(ModPoly a, const ModPoly& b, std::uint64_t p) {
  const int db = degMod(b);
  const std::uint64_t inv = invMod(b.back(), p);
  for (int k = degMod(a); k >= db; --k) {
    const std::uint64_t q = a[static_cast<std::size_t>(k)] * inv % p;
    if (q == 0) continue;
    for (int j = 0; j <= db; ++j) {
      auto& slot = a[static_cast<std::size_t>(k - db + j)];
      slot = (slot + p - q * b[static_cast<std::size_t>(j)] % p) % p;
    }
  }
  a.resize(static_cast<std::size_t>(std::min(degMod(a), db - 1) + 1));
  trimMod(a);
  return a;
}

ModPoly quotMod(ModPoly a, const ModPoly& b, std::uint64_t p) {
  const int db = degMod(b);
  if (degMod(a) < db) return {};
  ModPoly q(static_cast<std::size_t>(degMod(a) - db) + 1, 0);
  const std::uint64_t inv = invMod(b.back(), p);
  for (int k = degMod(a); k >= db; --k) {
    const std::uint64_t c = a[static_cast<std::size_t>(k)] * inv % p;
    q[static_cast<std::size_t>(k - db)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) {
      auto& slot = a[static_cast<std::size_t>(k - db + j)];
      slot = (slot + p - c * b[static_cast<std::size_t>(j)] % p) % p;
    }
  }
  trimMod(q);
  return q;
}

ModPoly mulMod(const ModPoly& a, const ModPoly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  ModPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trimMod(r);
  return r;
}

ModPoly makeMonic(ModPoly a, std::uint64_t p) {
  if (a.empty()) return a;
  const std::uint64_t inv = invMod(a.back(), p);
  for (auto& x : a) x = x * inv % p;
  return a;
}

ModPoly gcdMod(ModPoly a, ModPoly b, std::uint64_t p) {
  while (!b.empty()) {
    ModPoly r = remMod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return makeMonic(std::move(a), p);
}

ModPoly derivMod(const ModPoly& a, std::uint64_t p) {
  if (a.size() < 2) return {};
  ModPoly d(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * (i % p) % p;
  trimMod(d);
  return d;
}

// Res(a, b) mod p; both must have their true degree mod p.
std::uint64_t resultantMod(ModPoly a, ModPoly b, std::uint64_t p) {
  if (a.empty() || b.empty()) return 0;
  std::uint64_t res = 1;
  while (degMod(b) > 0) {
    ModPoly r = remMod(a, b, p);
    if (r.empty()) return 0;
    if ((degMod(a) & 1) && (degMod(b) & 1)) res = (p - res) % p;
    res = res * powMod(b.back(), static_cast<std::uint64_t>(degMod(a) - degMod(r)), p) % p;
    a = std::move(b);
    b = std::move(r);
  }
  return res * powMod(b[0], static_cast<std::uint64_t>(degMod(a)), p) % p;
}

bool isPrime(const mpz_class& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

}  // namespace

mpz_class resultant(const IntPoly& p, const IntPoly& q) {
  if (p.isZero() || q.isZero()) throw InvalidArgument("resultant of the zero polynomial");
  IntPoly A = p, B = q;
  int s = 1;
  if (A.degree() < B.degree()) {
    std::swap(A, B);
    if ((A.degree() & 1) && (B.degree() & 1)) s = -1;
  }
  if (B.degree() == 0) return s * powz(B.leading(), static_cast<unsigned long>(A.degree()));
  const mpz_class ca = A.content(), cb = B.content();
  A = divExact(A, ca);
  B = divExact(B, cb);
  const mpz_class t = powz(ca, static_cast<unsigned long>(B.degree())) * powz(cb, static_cast<unsigned long>(A.degree()));
  mpz_class g = 1, h = 1;
  while (true) {
    const int delta = A.degree() - B.degree();
    if ((A.degree() & 1) && (B.degree() & 1)) s = -s;
    IntPoly R = pseudoRemainder(A, B);
    A = std::move(B);
    if (R.isZero()) return 0;
    B = divExact(R, g * powz(h, static_cast<unsigned long>(delta)));
    g = A.leading();
    if (delta == 0) {
      // h unchanged
    } else {
      h = exactQuotient(powz(g, static_cast<unsigned long>(delta)), powz(h, static_cast<unsigned long>(delta - 1)));
    }
    if (B.degree() == 0) {
      const auto da = static_cast<unsigned long>(A.degree());
      const mpz_class hf = exactQuotient(powz(B.leading(), da), powz(h, da - 1));
      return s * t * hf;
    }
  }
}

mpz_class resultantModular(const IntPoly& p, const IntPoly& q) {
  if (p.isZero() || q.isZero()) throw InvalidArgument("resultant of the zero polynomial");
  auto norm = [](const IntPoly& f) {
    mpz_class sq = 0;
    for (const auto& c : f.coeffs()) sq += c * c;
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), sq.get_mpz_t());
    return r + 1;
  };
  const mpz_class bound = 2 * powz(norm(p), static_cast<unsigned long>(q.degree())) *
                          powz(norm(q), static_cast<unsigned long>(p.degree()));
  mpz_class modulus = 1, value = 0;
  mpz_class prime = (mpz_class(1) << 31) - 1;
  while (modulus <= bound) {
    while (!isPrime(prime)) --prime;
    const std::uint64_t pr = prime.get_ui();
    --prime;
    if (mpz_divisible_ui_p(p.leading().get_mpz_t(), pr) || mpz_divisible_ui_p(q.leading().get_mpz_t(), pr)) continue;
    const std::uint64_t r = resultantMod(reduceMod(p, pr), reduceMod(q, pr), pr);
    // value + modulus * k == r (mod pr)
    const std::uint64_t vm = mpz_fdiv_ui(value.get_mpz_t(), pr);
    const std::uint64_t mm = mpz_fdiv_ui(modulus.get_mpz_t(), pr);
    const std::uint64_t k = (r + pr - vm) % pr * invMod(mm, pr) % pr;
    value += modulus * static_cast<unsigned long>(k);
    modulus *= static_cast<unsigned long>(pr);
  }
  if (2 * value > modulus) value -= modulus;
  return value;
}

mpz_class resultantSylvester(const IntPoly& p, const IntPoly& q, int degP, int degQ) {
  if (degP < p.degree() || degQ < q.degree() || degP < 0 || degQ < 0)
    throw InvalidArgument("formal degree below the actual degree");
  const int n = degP + degQ;
  if (n == 0) return 1;
  std::vector<std::vector<mpz_class>> m(static_cast<std::size_t>(n), std::vector<mpz_class>(static_cast<std::size_t>(n)));
  for (int r = 0; r < degQ; ++r)
    for (int j = 0; j <= degP; ++j) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + j)] = p.coeff(degP - j);
  for (int r = 0; r < degP; ++r)
    for (int j = 0; j <= degQ; ++j) m[static_cast<std::size_t>(degQ + r)][static_cast<std::size_t>(r + j)] = q.coeff(degQ - j);
  // Bareiss
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    auto K = static_cast<std::size_t>(k);
    if (m[K][K] == 0) {
      std::size_t piv = K + 1;
      while (piv < m.size() && m[piv][K] == 0) ++piv;
      if (piv == m.size()) return 0;
      std::swap(m[K], m[piv]);
      sign = -sign;
    }
    for (std::size_t i = K + 1; i < m.size(); ++i) {
      for (std::size_t j = K + 1; j < m.size(); ++j) {
        m[i][j] = m[i][j] * m[K][K] - m[i][K] * m[K][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][K] = 0;
    }
    prev = m[K][K];
  }
  return sign * m.back().back();
}

mpz_class discriminant(const IntPoly& p) {
  const int d = p.degree();
  if (d < 1) throw InvalidArgument("discriminant needs degree >= 1");
  mpz_class r = exactQuotient(resultant(p, p.derivative()), p.leading());
  return ((d * (d - 1) / 2) % 2) ? mpz_class(-r) : r;
}

// ---- discriminant shape ----

namespace {

// Exact interpolation through (0, v0), (1, v1), ...; throws unless the
// interpolant has integer coefficients.
IntPoly interpolateAtNaturals(const std::vector<mpz_class>& values) {
  const std::size_t N = values.size();
  std::vector<mpq_class> dd(values.begin(), values.end());
  for (std::size_t k = 1; k < N; ++k)
    for (std::size_t i = N - 1; i >= k; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / mpq_class(static_cast<long>(k));
      if (i == k) break;
    }
  // Horner in the Newton basis: p = dd0 + (t - 0)(dd1 + (t - 1)(dd2 + ...)).
  std::vector<mpq_class> poly{dd[N - 1]};
  for (std::size_t k = N - 1; k-- > 0;) {
    std::vector<mpq_class> next(poly.size() + 1);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= poly[i] * mpq_class(static_cast<long>(k));
    }
    next[0] += dd[k];
    poly = std::move(next);
  }
  std::vector<mpz_class> out;
  for (auto& c : poly) {
    c.canonicalize();
    if (c.get_den() != 1) throw VerificationFailure("interpolated discriminant has a non-integral coefficient");
    out.push_back(c.get_num());
  }
  return IntPoly(std::move(out));
}

IntPoly fiber(const IterateFraction& it, const mpz_class& t) { return it.g - t * it.h; }

}  // namespace

IntPoly discriminantPolynomial(int n) {
  if (n < 1 || n > 5) throw InvalidArgument("discriminant shape is limited to n in 1..5");
  const IterateFraction it = iteratePair(n);
  const int d = 1 << n;
  std::vector<mpz_class> values;
  for (int t = 0; t < 2 * d; ++t) {
    const IntPoly F = fiber(it, t);
    values.push_back(resultantSylvester(F, F.derivative(), d, d - 1));
  }
  const IntPoly R = interpolateAtNaturals(values);
  // lc_x(g - t h) as a polynomial in t
  const IntPoly lc({it.g.coeff(d), -it.h.coeff(d)});
  IntPoly delta = divExact(R, lc);
  if ((d * (d - 1) / 2) % 2) delta = -delta;
  for (long t : {-1L, -3L}) {
    const mpz_class direct = discriminant(fiber(it, t));
    if (direct != delta.eval(mpz_class(t)))
      throw VerificationFailure("interpolated discriminant disagrees with the direct value at t = " + std::to_string(t));
  }
  return delta;
}

DiscriminantShape discriminantShape(int n) {
  DiscriminantShape s;
  s.n = n;
  s.delta = discriminantPolynomial(n);
  IntPoly rest = s.delta;
  while (!rest.isZero() && rest.coeff(0) == 0) {
    rest = IntPoly(std::vector<mpz_class>(rest.coeffs().begin() + 1, rest.coeffs().end()));
    ++s.a;
  }
  const IntPoly twoMinusT({2, -1});
  while (rest.degree() > 0 && rest.eval(mpz_class(2)) == 0) {
    rest = divExact(rest, twoMinusT);
    ++s.b;
  }
  if (rest.degree() != 0) throw ShapeViolation("Delta_" + std::to_string(n) + " has a factor other than t and 2 - t");
  mpz_class c = rest.leading();
  s.sign = c < 0 ? -1 : 1;
  c = abs(c);
  s.c = mpz_scan1(c.get_mpz_t(), 0);
  if (c != (mpz_class(1) << s.c))
    throw ShapeViolation("Delta_" + std::to_string(n) + " has constant cofactor " + rest.leading().get_str() +
                         ", not a signed power of 2");
  return s;
}

std::string DiscriminantShape::toString() const {
  return std::string(sign < 0 ? "-" : "+") + "2^" + std::to_string(c) + " * t^" + std::to_string(a) + " * (2-t)^" +
         std::to_string(b);
}

// ---- specialization and reduction ----

IntPoly specializeNumerator(int n, const mpq_class& a) {
  if (a == 0 || a == 2) throw ExcludedBasePoint("base point " + formatRational(a) + " is postcritical");
  if (n < 1 || n > 5) throw InvalidArgument("specialization level must lie in 1..5");
  const IterateFraction it = iteratePair(n);
  const IntPoly F = a.get_den() * it.g - a.get_num() * it.h;
  return divExact(F, F.content());
}

std::optional<CycleType> factorDegreesModP(const IntPoly& f, std::uint32_t prime) {
  if (prime < 2 || !isPrime(mpz_class(prime))) throw BadPrime(std::to_string(prime) + " is not prime");
  if (prime >= (1u << 31)) throw BadPrime("prime " + std::to_string(prime) + " exceeds 2^31");
  if (f.degree() < 1) throw InvalidArgument("factorDegreesModP needs a non-constant polynomial");
  if (mpz_divisible_ui_p(f.leading().get_mpz_t(), prime))
    throw BadPrime(std::to_string(prime) + " divides the leading coefficient");
  const std::uint64_t p = prime;
  ModPoly u = makeMonic(reduceMod(f, p), p);
  const ModPoly du = derivMod(u, p);
  if (du.empty() || degMod(gcdMod(u, du, p)) > 0) return std::nullopt;

  CycleType type;
  const ModPoly x{0, 1};
  ModPoly h = remMod(x, u, p);
  for (int i = 1; degMod(u) >= 2 * i; ++i) {
    // h <- h^p mod u
    ModPoly acc{1}, base = h;
    for (std::uint64_t e = p; e; e >>= 1) {
      if (e & 1) acc = remMod(mulMod(acc, base, p), u, p);
      base = remMod(mulMod(base, base, p), u, p);
    }
    h = acc;
    ModPoly hx = h;
    if (hx.size() < 2) hx.resize(2, 0);
    hx[1] = (hx[1] + p - 1) % p;
    trimMod(hx);
    const ModPoly g = gcdMod(u, hx, p);
    if (degMod(g) > 0) {
      for (int k = 0; k < degMod(g) / i; ++k) type.parts.push_back(static_cast<std::size_t>(i));
      u = quotMod(u, g, p);
      h = remMod(h, u, p);
    }
  }
  if (degMod(u) > 0) type.parts.push_back(static_cast<std::size_t>(degMod(u)));
  std::sort(type.parts.begin(), type.parts.end());
  return type;
}

// ---- square classes ----

namespace {

constexpr unsigned long kTrialLimit = 1000000;
constexpr unsigned long kPollardBudget = 2000000;

mpz_class pollardBrent(const mpz_class& n, unsigned long& budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class y = 2, x, q = 1, g = 1, ys;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto step = [&](mpz_class& v) {
      v = (v * v + c) % n;
      if (budget-- == 0) throw ResourceLimit("factoring budget exhausted for " + n.get_str());
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          step(y);
          q = q * abs(x - y) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        step(ys);
        mpz_class diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factorLarge(const mpz_class& n, std::vector<mpz_class>& primes, unsigned long& budget) {
  if (n == 1) return;
  if (isPrime(n)) {
    primes.push_back(n);
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    factorLarge(r, primes, budget);
    factorLarge(r, primes, budget);
    return;
  }
  const mpz_class d = pollardBrent(n, budget);
  factorLarge(d, primes, budget);
  factorLarge(n / d, primes, budget);
}

mpz_class squarefreeAbs(mpz_class n) {
  mpz_class out = 1;
  for (unsigned long p = 2; p <= kTrialLimit; p += (p == 2 ? 1 : 2)) {
    if (mpz_cmp_ui(n.get_mpz_t(), p * p) < 0) break;
    unsigned long e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    if (e & 1) out *= p;
  }
  if (n == 1) return out;
  if (mpz_cmp_ui(n.get_mpz_t(), kTrialLimit) <= 0 || isPrime(n)) return out * n;
  // every remaining prime factor exceeds the trial limit
  if (mpz_perfect_square_p(n.get_mpz_t())) return out;
  if (n < mpz_class("1000000000000000000")) return out * n;  // p*q with distinct primes
  std::vector<mpz_class> primes;
  unsigned long budget = kPollardBudget;
  factorLarge(n, primes, budget);
  std::sort(primes.begin(), primes.end());
  for (std::size_t i = 0; i < primes.size();) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    if ((j - i) & 1) out *= primes[i];
    i = j;
  }
  return out;
}

}  // namespace

mpz_class squarefreePart(const mpq_class& a) {
  if (a == 0) throw InvalidArgument("squarefree part of zero");
  const mpz_class s = squarefreeAbs(abs(a.get_num())) * squarefreeAbs(a.get_den());
  return a < 0 ? mpz_class(-s) : s;
}

mpq_class parseRational(const std::string& text) {
  static const std::regex re(R"(\s*([+-]?\d+)(?:/(\d+))?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw InvalidArgument("not a rational literal: '" + text + "'");
  mpz_class num(m[1].str(), 10);
  mpz_class den = m[2].matched ? mpz_class(m[2].str(), 10) : mpz_class(1);
  if (den == 0) throw InvalidArgument("zero denominator in '" + text + "'");
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

std::string formatRational(const mpq_class& a) {
  mpq_class c = a;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

// ---- invariant suites ----

namespace {

bool isSignedPowerOfTwo(const mpz_class& v) {
  if (v == 0) return false;
  const mpz_class a = abs(v);
  return mpz_popcount(a.get_mpz_t()) == 1;
}

}  // namespace

Report verifyIterateInvariants(int maxDegreeN, int maxWronskianN, int maxResultantN) {
  Report r;
  r.title = "iterate invariants";
  bool shape = true;
  std::string shapeDetail;
  for (int n = 2; n <= maxDegreeN; ++n) {
    const IterateFraction it = iteratePair(n);
    const bool ok = it.g.degree() == (1 << n) && it.h.degree() == (1 << n) && it.g.leading() == 2 && it.h.leading() == 1;
    if (!ok) shapeDetail += "n=" + std::to_string(n) + " ";
    shape = shape && ok;
  }
  r.add("leading-coeff", "deg g_n = deg h_n = 2^n, lc(g_n) = 2, lc(h_n) = 1 for 2 <= n <= " + std::to_string(maxDegreeN),
        shape, shapeDetail);

  bool dn = true;
  std::string dnDetail;
  for (int n = 1; n <= maxWronskianN; ++n) {
    const mpz_class D = iterateMetadata(n).D;
    dnDetail += (dnDetail.empty() ? "" : ", ") + D.get_str();
    dn = dn && abs(D) == powz(4, static_cast<unsigned long>(n));
  }
  r.add("Dn", "|D_n| = 4^n for 1 <= n <= " + std::to_string(maxWronskianN), dn, "D_n = " + dnDetail);

  bool res = true;
  std::string resDetail;
  std::vector<IterateFraction> its;
  for (int n = 1; n <= maxResultantN; ++n) its.push_back(iteratePair(n));
  for (int n = 2; n <= maxResultantN; ++n)
    for (int k = 2; k <= n; ++k) {
      const mpz_class v = resultant(its[static_cast<std::size_t>(k - 1)].g, its[static_cast<std::size_t>(n - 1)].h);
      if (!isSignedPowerOfTwo(v)) {
        res = false;
        resDetail += "(k=" + std::to_string(k) + ", n=" + std::to_string(n) + ") ";
      }
    }
  r.add("resultants", "Res(g_k, h_n) = +-2^j for 2 <= k <= n <= " + std::to_string(maxResultantN), res, resDetail);
  return r;
}

Report verifyDiscriminantShapes(int maxN) {
  Report r;
  r.title = "discriminant shapes";
  for (int n = 1; n <= maxN; ++n) {
    const std::string lv = "[n=" + std::to_string(n) + "]";
    try {
      const DiscriminantShape s = discriminantShape(n);
      r.add("shape-" + std::to_string(n), "Delta_n = +-2^c t^a (2-t)^b " + lv, true, s.toString());
    } catch (const ShapeViolation& e) {
      r.add("shape-" + std::to_string(n), "Delta_n = +-2^c t^a (2-t)^b " + lv, false, e.what());
    }
  }
  if (maxN >= 1) {
    const IntPoly d1 = discriminantPolynomial(1);
    r.add("delta1", "Delta_1 = 8t", d1 == IntPoly({0, 8}), d1.toString());
  }
  return r;
}

Report verifySpecializationConsistency(int maxExactN, int maxPrimeN, const std::vector<mpq_class>& points) {
  Report r;
  r.title = "specialization consistency";
  bool exact = true, primes = true;
  std::string exactDetail, primeDetail;
  for (int n = 1; n <= std::max(maxExactN, maxPrimeN); ++n) {
    const IterateFraction it = iteratePair(n);
    const IntPoly delta = n <= maxExactN ? discriminantPolynomial(n) : IntPoly();
    const unsigned long d = 1ul << n;
    for (const auto& a : points) {
      if (a == 0 || a == 2) continue;
      const IntPoly f = specializeNumerator(n, a);
      const mpz_class disc = discriminant(f);
      if (n <= maxExactN && a.get_den() == 1) {
        const mpz_class c = (it.g - a.get_num() * it.h).content();
        if (disc * powz(c, 2 * d - 2) != delta.eval(a.get_num())) {
          exact = false;
          exactDetail += "(n=" + std::to_string(n) + ", a=" + formatRational(a) + ") ";
        }
      }
      if (n <= maxPrimeN) {
        const mpq_class b = 2 - a;
        const mpz_class k = 2 * a.get_num() * b.get_num() * a.get_den();
        mpz_class rest = disc, g;
        while (true) {
          mpz_gcd(g.get_mpz_t(), rest.get_mpz_t(), k.get_mpz_t());
          if (g == 1) break;
          rest /= g;
        }
        if (abs(rest) != 1) {
          primes = false;
          primeDetail += "(n=" + std::to_string(n) + ", a=" + formatRational(a) + ") ";
        }
      }
    }
  }
  r.add("disc-specialization", "disc of the specialized numerator equals Delta_n(a) up to content, n <= " +
                                   std::to_string(maxExactN),
        exact, exactDetail);
  r.add("disc-primes", "primes of disc(specializeNumerator(n, a)) divide 2 num(a) num(2-a) den(a), n <= " +
                           std::to_string(maxPrimeN),
        primes, primeDetail);
  return r;
}

Report compareResultantAlgorithms(std::size_t samples, std::uint64_t seed, int maxDegree) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-50, 50), deg(0, maxDegree);
  auto randomPoly = [&] {
    std::vector<mpz_class> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& x : c) x = coeff(rng);
    if (c.back() == 0) c.back() = 1;
    return IntPoly(std::move(c));
  };
  std::size_t mismatch = 0, symmetry = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const IntPoly p = randomPoly(), q = randomPoly();
    const mpz_class a = resultant(p, q);
    if (a != resultantModular(p, q)) ++mismatch;
    const mpz_class b = resultant(q, p);
    if (((p.degree() * q.degree()) % 2 ? mpz_class(-b) : b) != a) ++symmetry;
  }
  Report r;
  r.title = "resultant algorithms";
  r.add("resultant-agree", "subresultant and multimodular resultants agree", mismatch == 0,
        std::to_string(mismatch) + " mismatches in " + std::to_string(samples));
  r.add("resultant-symmetry", "Res(p,q) = (-1)^(deg p deg q) Res(q,p)", symmetry == 0,
        std::to_string(symmetry) + " failures in " + std::to_string(samples));
  return r;
}

}  // namespace img::polyarith
