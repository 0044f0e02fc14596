#include "twistsel/arith.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace twistsel {

namespace {

using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

const std::vector<u64>& small_primes() {
  static const std::vector<u64> primes = [] {
    constexpr u64 limit = 1'000'000;
    std::vector<bool> comp(limit + 1, false);
    std::vector<u64> ps;
    for (u64 i = 2; i <= limit; ++i) {
      if (comp[i]) continue;
      ps.push_back(i);
      for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
    }
    return ps;
  }();
  return primes;
}

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(u64 n, std::map<u64, int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  const u64 d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

mpz_class mpz_from_u64(u64 v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

bool fits_u63(const mpz_class& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 63; }

u64 mpz_mod_u64(const mpz_class& n, u64 p) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), mpz_from_u64(p).get_mpz_t());
  return mpz_get_ui(r.get_mpz_t());
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for all 64-bit n.
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Factored factor(i64 n) {
  if (n == 0) throw std::invalid_argument("factor: zero has no factorization");
  Factored f;
  f.value = n;
  u64 m = n < 0 ? static_cast<u64>(0) - static_cast<u64>(n) : static_cast<u64>(n);
  for (u64 p : small_primes()) {
    if (p * p > m) break;
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    f.factors[p] = e;
  }
  factor_rec(m, f.factors);
  return f;
}

std::vector<u64> prime_divisors(i64 n) {
  std::vector<u64> ps;
  for (const auto& [p, e] : factor(n).factors) ps.push_back(p);
  return ps;
}

std::vector<u64> prime_divisors(const mpz_class& n) {
  if (n == 0) throw std::invalid_argument("prime_divisors: zero");
  mpz_class a = abs(n);
  // Strip small primes first so that large but smooth values still work.
  std::vector<u64> ps;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    if (valuation(a, p) > 0) {
      ps.push_back(p);
      mpz_class pp = mpz_from_u64(p);
      while (mpz_divisible_p(a.get_mpz_t(), pp.get_mpz_t())) a /= pp;
    }
  }
  if (!fits_u63(a)) throw std::domain_error("prime_divisors: integer exceeds 63 bits");
  u64 m = 0;
  mpz_export(&m, nullptr, 1, sizeof(m), 0, 0, a.get_mpz_t());
  if (m > 1)
    for (const auto& [p, e] : factor(static_cast<i64>(m)).factors) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  return ps;
}

SquareClass::SquareClass(int sign, std::vector<u64> primes) : sign_(sign < 0 ? -1 : 1), primes_(std::move(primes)) {
  std::sort(primes_.begin(), primes_.end());
  if (std::adjacent_find(primes_.begin(), primes_.end()) != primes_.end())
    throw std::invalid_argument("SquareClass: repeated prime");
}

bool SquareClass::divisible_by(u64 p) const { return std::binary_search(primes_.begin(), primes_.end(), p); }

mpz_class SquareClass::representative() const {
  mpz_class r = sign_;
  for (u64 p : primes_) r *= mpz_from_u64(p);
  return r;
}

i64 SquareClass::to_i64() const {
  const mpz_class r = representative();
  if (!fits_u63(r)) throw std::overflow_error("SquareClass::to_i64: representative too large");
  return static_cast<i64>(r.get_si());
}

std::string SquareClass::to_string() const { return representative().get_str(); }

SquareClass SquareClass::operator*(const SquareClass& o) const {
  SquareClass r;
  r.sign_ = sign_ * o.sign_;
  std::set_symmetric_difference(primes_.begin(), primes_.end(), o.primes_.begin(), o.primes_.end(),
                                std::back_inserter(r.primes_));
  return r;
}

SquareClass squarefree_kernel(i64 n) {
  const Factored f = factor(n);
  std::vector<u64> ps;
  for (const auto& [p, e] : f.factors)
    if (e % 2) ps.push_back(p);
  return SquareClass(f.sign(), std::move(ps));
}

SquareClass squarefree_kernel(const mpz_class& n) {
  if (n == 0) throw std::invalid_argument("squarefree_kernel: zero");
  std::vector<u64> ps;
  for (u64 p : prime_divisors(n)) {
    mpz_class t = n;
    if (valuation(t, p) % 2) ps.push_back(p);
  }
  return SquareClass(sgn(n), std::move(ps));
}

Place Place::prime(u64 q) {
  if (!is_prime(q)) throw std::invalid_argument("Place::prime: not a prime");
  return Place{q};
}

std::string Place::to_string() const { return p == 0 ? std::string("inf") : std::to_string(p); }

unsigned LocalSquareClass::unit_mod8() const {
  if (!place.is_two()) throw std::logic_error("unit_mod8: place is not 2");
  static constexpr unsigned table[4] = {1, 7, 5, 3};  // index: bit1 | bit2 << 1
  return table[((bits >> 1) & 1u) | (((bits >> 2) & 1u) << 1)];
}

mpz_class LocalSquareClass::representative() const {
  if (place.is_infinite()) return (bits & 1u) ? -1 : 1;
  mpz_class r = (bits & 1u) ? mpz_from_u64(place.p) : mpz_class(1);
  if (place.is_two()) return r * unit_mod8();
  if (bits & 2u) r *= mpz_from_u64(smallest_nonresidue(place.p));
  return r;
}

LocalSquareClass LocalSquareClass::from_vec(Place v, const gf2::BitVector& x) {
  if (x.size() != v.local_dim()) throw std::invalid_argument("LocalSquareClass::from_vec: wrong length");
  return LocalSquareClass{v, static_cast<unsigned>(x.mask())};
}

LocalSquareClass LocalSquareClass::operator*(const LocalSquareClass& o) const {
  if (!(place == o.place)) throw std::invalid_argument("LocalSquareClass: places differ");
  return LocalSquareClass{place, bits ^ o.bits};
}

std::string LocalSquareClass::to_string() const { return representative().get_str() + "@" + place.to_string(); }

int legendre(const mpz_class& a, u64 p) {
  return mpz_kronecker(a.get_mpz_t(), mpz_from_u64(p).get_mpz_t());
}

int legendre(i64 a, u64 p) { return legendre(mpz_class(static_cast<long>(a)), p); }

u64 smallest_nonresidue(u64 p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("smallest_nonresidue: odd prime expected");
  for (u64 n = 2;; ++n)
    if (legendre(static_cast<i64>(n), p) == -1) return n;
}

std::optional<u64> sqrt_mod(u64 a, u64 p) {
  a %= p;
  if (p == 2 || a == 0) return a;
  if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  u64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  const u64 z = smallest_nonresidue(p);
  u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

unsigned long valuation(const mpz_class& n, u64 p) {
  if (n == 0) throw std::invalid_argument("valuation: zero");
  if (p == 2) return mpz_scan1(n.get_mpz_t(), 0);
  mpz_class t;
  return mpz_remove(t.get_mpz_t(), n.get_mpz_t(), mpz_from_u64(p).get_mpz_t());
}

LocalSquareClass localize(const mpz_class& n, Place v) {
  if (n == 0) throw std::invalid_argument("localize: zero");
  if (v.is_infinite()) return {v, n < 0 ? 1u : 0u};
  mpz_class u;
  const unsigned long e = mpz_remove(u.get_mpz_t(), n.get_mpz_t(), mpz_from_u64(v.p).get_mpz_t());
  unsigned bits = e & 1u;
  if (v.is_two()) {
    const u64 r = mpz_mod_u64(u, 8);
    if (r == 3 || r == 7) bits |= 2u;
    if (r == 3 || r == 5) bits |= 4u;
  } else if (legendre(u, v.p) == -1) {
    bits |= 2u;
  }
  return {v, bits};
}

LocalSquareClass localize(const mpq_class& q, Place v) {
  // q = n/m ~ n*m modulo squares.
  return localize(mpz_class(q.get_num() * q.get_den()), v);
}

LocalSquareClass localize(const SquareClass& c, Place v) {
  if (v.is_infinite()) return {v, c.sign() < 0 ? 1u : 0u};
  unsigned bits = c.divisible_by(v.p) ? 1u : 0u;
  if (v.is_two()) {
    u64 r = c.sign() < 0 ? 7 : 1;
    for (u64 q : c.primes())
      if (q != 2) r = r * (q % 8) % 8;
    if (r == 3 || r == 7) bits |= 2u;
    if (r == 3 || r == 5) bits |= 4u;
  } else {
    int s = c.sign() < 0 ? legendre(i64{-1}, v.p) : 1;
    for (u64 q : c.primes())
      if (q != v.p) s *= legendre(static_cast<i64>(q % v.p), v.p);
    if (s == -1) bits |= 2u;
  }
  return {v, bits};
}

int hilbert_symbol(const LocalSquareClass& a, const LocalSquareClass& b) {
  if (!(a.place == b.place)) throw std::invalid_argument("hilbert_symbol: places differ");
  const Place v = a.place;
  if (v.is_infinite()) return (a.bits & b.bits & 1u) ? -1 : 1;
  const unsigned al = a.bits & 1u, be = b.bits & 1u;
  unsigned e = 0;
  if (v.is_two()) {
    const unsigned eps_u = (a.bits >> 1) & 1u, eps_v = (b.bits >> 1) & 1u;
    const unsigned om_u = (a.bits >> 2) & 1u, om_v = (b.bits >> 2) & 1u;
    e = (eps_u & eps_v) ^ (al & om_v) ^ (be & om_u);
  } else {
    const unsigned eps_p = ((v.p - 1) / 2) & 1u;
    e = (al & be & eps_p) ^ (be & ((a.bits >> 1) & 1u)) ^ (al & ((b.bits >> 1) & 1u));
  }
  return e ? -1 : 1;
}

int hilbert_symbol(const mpq_class& a, const mpq_class& b, Place v) {
  if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: zero argument");
  return hilbert_symbol(localize(a, v), localize(b, v));
}

bool is_local_square(const SquareClass& c, Place v) { return localize(c, v).is_trivial(); }

namespace {

constexpr unsigned kMaxDepth = 400;

struct Node {
  mpz_class x0;
  unsigned n;
};

// Taylor coefficients of f at x0.
std::array<mpz_class, 5> shift(const std::array<mpz_class, 5>& c, const mpz_class& x0) {
  std::array<mpz_class, 5> t = c;
  if (x0 == 0) return t;
  for (int i = 0; i < 4; ++i)
    for (int j = 3; j >= i; --j) t[j] += x0 * t[j + 1];
  return t;
}

bool unit_is_square(const mpz_class& u, u64 p) {
  if (p == 2) return mpz_mod_u64(u, 8) == 1;
  return legendre(u, p) == 1;
}

}  // namespace

bool takes_square_value(const std::array<mpz_class, 5>& coeffs, u64 p, unsigned start) {
  if (std::all_of(coeffs.begin(), coeffs.end(), [](const mpz_class& z) { return z == 0; })) return true;
  const mpz_class P = mpz_from_u64(p);
  std::vector<Node> stack{{mpz_class(0), start}};
  const long slack = p == 2 ? 3 : 1;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.n > kMaxDepth) throw std::runtime_error("takes_square_value: p-adic search exceeded depth bound");
    const auto t = shift(coeffs, node.x0);
    if (t[0] == 0) return true;
    mpz_class unit;
    const long l = static_cast<long>(mpz_remove(unit.get_mpz_t(), t[0].get_mpz_t(), P.get_mpz_t()));
    long delta = std::numeric_limits<long>::max();
    for (int k = 1; k <= 4; ++k)
      if (t[k] != 0) delta = std::min(delta, static_cast<long>(valuation(t[k], p)) + k * static_cast<long>(node.n));
    if (delta >= l + slack) {
      // Every value on this class has the valuation and leading unit of t[0].
      if (l % 2 == 0 && unit_is_square(unit, p)) return true;
      continue;
    }
    if (t[1] != 0) {
      const long m = static_cast<long>(valuation(t[1], p));
      // Newton: a root exists within p^(l-m) of x0.
      if (l > 2 * m && l - m >= static_cast<long>(node.n)) return true;
    }
    mpz_class step;
    mpz_pow_ui(step.get_mpz_t(), P.get_mpz_t(), node.n);
    for (u64 i = 0; i < p; ++i) stack.push_back({node.x0 + step * mpz_from_u64(i), node.n + 1});
  }
  return false;
}

namespace {

// alpha M^4 + beta M^2 e^2 + gamma e^4 represents a square (not all of M, e zero) over Q_v.
bool even_quartic_solvable(const mpz_class& alpha, const mpz_class& beta, const mpz_class& gamma, Place v) {
  if (v.is_infinite()) {
    if (alpha > 0 || gamma > 0) return true;
    return beta > 0 && beta * beta >= 4 * alpha * gamma;
  }
  // (M, e) = (x, 1) with x in Z_p, or (1, y) with y in pZ_p.
  if (takes_square_value({gamma, 0, beta, 0, alpha}, v.p, 0)) return true;
  return takes_square_value({alpha, 0, beta, 0, gamma}, v.p, 1);
}

void check_nondegenerate(const mpz_class& a, const mpz_class& b) {
  if (b == 0 || a * a - 4 * b == 0) throw std::invalid_argument("quartic: degenerate curve (b(a^2-4b) = 0)");
}

}  // namespace

bool quartic_locally_solvable(const mpz_class& d1, const mpz_class& a, const mpz_class& b, Place v) {
  check_nondegenerate(a, b);
  if (d1 == 0) throw std::invalid_argument("quartic: zero class");
  return even_quartic_solvable(d1 * d1 * d1, a * d1 * d1, b * d1, v);
}

bool quartic_locally_solvable(const SquareClass& d1, const mpz_class& a, const mpz_class& b, Place v) {
  if (d1.is_trivial()) {
    check_nondegenerate(a, b);
    return true;
  }
  // Only the Q_v class of d1 matters; use its small local representative.
  return quartic_locally_solvable(localize(d1, v).representative(), a, b, v);
}

gf2::Subspace quartic_local_image(const mpz_class& a, const mpz_class& b, Place v) {
  check_nondegenerate(a, b);
  const std::size_t k = v.local_dim();
  std::vector<gf2::BitVector> members;
  for (unsigned bits = 0; bits < (1u << k); ++bits) {
    const LocalSquareClass c{v, bits};
    if (quartic_locally_solvable(c.representative(), a, b, v)) members.push_back(c.vec());
  }
  gf2::Subspace s = gf2::Subspace::span(k, members);
  if ((std::size_t{1} << s.dim()) != members.size())
    throw std::logic_error("quartic_local_image: solvable classes do not form a subgroup");
  return s;
}

namespace {

gf2::BitVector pair_vec(const LocalSquareClass& x, const LocalSquareClass& y) {
  const std::size_t k = x.place.local_dim();
  gf2::BitVector out(2 * k);
  for (std::size_t j = 0; j < k; ++j) {
    if ((x.bits >> j) & 1u) out.set(j);
    if ((y.bits >> j) & 1u) out.set(k + j);
  }
  return out;
}

}  // namespace

gf2::Subspace two_descent_local_image(const std::array<mpz_class, 3>& e, Place v) {
  if (e[0] == e[1] || e[0] == e[2] || e[1] == e[2]) throw std::invalid_argument("two-descent: repeated roots");
  const std::size_t k = v.local_dim();
  gf2::Subspace img(2 * k);
  // Images of the 2-torsion points.
  img.add(pair_vec(localize(mpz_class((e[0] - e[1]) * (e[0] - e[2])), v), localize(mpz_class(e[0] - e[1]), v)));
  img.add(pair_vec(localize(mpz_class(e[1] - e[0]), v), localize(mpz_class((e[1] - e[0]) * (e[1] - e[2])), v)));
  // E(Q_v)/2E(Q_v) has dimension 1 over R and 2 + [p = 2] over Q_p when E[2] is rational.
  const std::size_t target = v.is_infinite() ? 1 : 2 + (v.is_two() ? 1 : 0);
  if (img.dim() >= target) return img;
  if (v.is_infinite()) {
    std::array<mpz_class, 3> s = e;
    std::sort(s.begin(), s.end());
    mpq_class mid(s[0] + s[1], 2);
    mid.canonicalize();
    for (const mpq_class& x : {mpq_class(s[2] + 1), mid})
      img.add(pair_vec(localize(mpq_class(x - e[0]), v), localize(mpq_class(x - e[1]), v)));
    if (img.dim() != target) throw std::logic_error("two-descent: real image has unexpected dimension");
    return img;
  }
  // x = t / p^(2j): the p^(2j) factors are squares and drop out of every class.
  const mpz_class P = mpz_from_u64(v.p);
  constexpr long kMaxT = 4'000'000;
  for (long t = 1; t <= kMaxT; ++t) {
    for (long sgn_t : {t, -t}) {
      mpz_class pj = 1;
      for (int j = 0; j <= 4; ++j, pj *= P * P) {
        if (j > 0 && t % static_cast<long>(v.p) == 0) break;
        const mpz_class T(sgn_t);
        const mpz_class f0 = T - e[0] * pj, f1 = T - e[1] * pj, f2 = T - e[2] * pj;
        if (f0 == 0 || f1 == 0 || f2 == 0) continue;
        if (!localize(mpz_class(f0 * f1 * f2), v).is_trivial()) continue;
        img.add(pair_vec(localize(f0, v), localize(f1, v)));
        if (img.dim() >= target) return img;
      }
    }
  }
  throw std::runtime_error("two-descent: point search did not reach the local image dimension");
}

bool quadric_pair_locally_solvable(const SquareClass& d1, const SquareClass& d2, const std::array<mpz_class, 3>& roots,
                                   Place v) {
  return two_descent_local_image(roots, v).contains(pair_vec(localize(d1, v), localize(d2, v)));
}

}  // namespace twistsel
