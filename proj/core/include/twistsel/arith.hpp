#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "twistsel/gf2.hpp"

namespace twistsel {

using i64 = std::int64_t;
using u64 = std::uint64_t;

struct Factored {
  i64 value = 1;
  std::map<u64, int> factors;
  int sign() const { return value < 0 ? -1 : 1; }
};

bool is_prime(u64 n);
// Trial division to 10^6, then Pollard rho. Rejects 0.
Factored factor(i64 n);
std::vector<u64> prime_divisors(i64 n);
// Primes of |n| for n that fit in 63 bits; throws std::domain_error otherwise.
std::vector<u64> prime_divisors(const mpz_class& n);

// Squarefree representative sign * prod(primes), kept canonical.
class SquareClass {
 public:
  SquareClass() = default;
  SquareClass(int sign, std::vector<u64> primes);

  int sign() const { return sign_; }
  const std::vector<u64>& primes() const { return primes_; }
  bool is_trivial() const { return sign_ == 1 && primes_.empty(); }
  bool divisible_by(u64 p) const;
  mpz_class representative() const;
  // Fits when |representative| < 2^63.
  i64 to_i64() const;
  std::string to_string() const;

  SquareClass operator*(const SquareClass& o) const;
  bool operator==(const SquareClass& o) const = default;
  auto operator<=>(const SquareClass& o) const = default;

 private:
  int sign_ = 1;
  std::vector<u64> primes_;  // sorted, distinct
};

SquareClass squarefree_kernel(i64 n);
SquareClass squarefree_kernel(const mpz_class& n);

// p == 0 encodes the infinite place.
struct Place {
  u64 p = 0;
  static Place infinity() { return Place{0}; }
  static Place prime(u64 q);
  bool is_infinite() const { return p == 0; }
  bool is_two() const { return p == 2; }
  // Dimension of Q_v^*/Q_v^*2 over F2: 1, 3 or 2.
  std::size_t local_dim() const { return p == 0 ? 1 : (p == 2 ? 3 : 2); }
  std::string to_string() const;
  bool operator==(const Place&) const = default;
  auto operator<=>(const Place&) const = default;
};

// Element of Q_v^*/Q_v^*2 in linear coordinates:
//   infinity: bit0 = negative
//   odd p:    bit0 = odd valuation, bit1 = unit part is a nonresidue
//   p = 2:    bit0 = odd valuation, bit1 = unit = 3 mod 4, bit2 = unit = 3 or 5 mod 8
// (at 2 the unit is (-1)^bit1 * 5^bit2 modulo squares).
struct LocalSquareClass {
  Place place;
  unsigned bits = 0;

  bool is_trivial() const { return bits == 0; }
  bool odd_valuation() const { return !place.is_infinite() && (bits & 1u); }
  bool nonresidue() const { return !place.is_infinite() && !place.is_two() && (bits & 2u); }
  unsigned unit_mod8() const;  // p = 2 only
  // Small integer in this class.
  mpz_class representative() const;
  gf2::BitVector vec() const { return gf2::BitVector::from_mask(place.local_dim(), bits); }
  static LocalSquareClass from_vec(Place v, const gf2::BitVector& x);
  LocalSquareClass operator*(const LocalSquareClass& o) const;
  bool operator==(const LocalSquareClass&) const = default;
  std::string to_string() const;
};

int legendre(const mpz_class& a, u64 p);
int legendre(i64 a, u64 p);
u64 smallest_nonresidue(u64 p);
std::optional<u64> sqrt_mod(u64 a, u64 p);
// Exponent of p in nonzero n.
unsigned long valuation(const mpz_class& n, u64 p);

LocalSquareClass localize(const SquareClass& c, Place v);
LocalSquareClass localize(const mpz_class& n, Place v);
LocalSquareClass localize(const mpq_class& q, Place v);

int hilbert_symbol(const LocalSquareClass& a, const LocalSquareClass& b);
int hilbert_symbol(const mpq_class& a, const mpq_class& b, Place v);

bool is_local_square(const SquareClass& c, Place v);

// N^2 = d1 M^4 + a M^2 e^2 + (b/d1) e^4 over Q_v, in the integral form
// (d1 N)^2 = d1^3 M^4 + a d1^2 M^2 e^2 + b d1 e^4, so d1 need not divide b.
bool quartic_locally_solvable(const SquareClass& d1, const mpz_class& a, const mpz_class& b, Place v);
bool quartic_locally_solvable(const mpz_class& d1, const mpz_class& a, const mpz_class& b, Place v);
// Classes d1 in Q_v^*/Q_v^*2 for which the quartic is solvable; always a subgroup.
gf2::Subspace quartic_local_image(const mpz_class& a, const mpz_class& b, Place v);

// Does c0 + c1 x + ... + c4 x^4 take a square value (zero included) at some x in p^start Z_p?
bool takes_square_value(const std::array<mpz_class, 5>& coeffs, u64 p, unsigned start);

// Image of E(Q_v) -> (Q_v^*/Q_v^*2)^2, P -> (x - e1, x - e2), for y^2 = (x-e1)(x-e2)(x-e3).
// Coordinates: first local_dim() bits for x - e1, next local_dim() for x - e2.
gf2::Subspace two_descent_local_image(const std::array<mpz_class, 3>& roots, Place v);
bool quadric_pair_locally_solvable(const SquareClass& d1, const SquareClass& d2, const std::array<mpz_class, 3>& roots,
                                   Place v);

}  // namespace twistsel
