#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "twistsel/arith.hpp"

using namespace twistsel;

namespace {

bool naive_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_square_int(const mpz_class& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()); }

const u64 kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43};

}  // namespace

TEST(Primes, IsPrimeAgreesWithTrialDivision) {
  for (u64 n = 0; n < 20000; ++n) EXPECT_EQ(is_prime(n), naive_prime(n)) << n;
  EXPECT_TRUE(is_prime(1000000007ULL));
  EXPECT_TRUE(is_prime(2305843009213693951ULL));  // 2^61 - 1
  EXPECT_FALSE(is_prime(3215031751ULL));          // strong pseudoprime to 2, 3, 5, 7
}

TEST(Factor, ProductRecoversInput) {
  Rng rng(1);
  for (int t = 0; t < 400; ++t) {
    i64 n = static_cast<i64>(rng() % 1000000000000ULL) + 1;
    if (rng() & 1) n = -n;
    auto f = factor(n);
    mpz_class prod = f.sign();
    for (auto [p, e] : f.factors) {
      EXPECT_TRUE(naive_prime(p) || is_prime(p));
      for (int i = 0; i < e; ++i) prod *= static_cast<unsigned long>(p);
    }
    EXPECT_EQ(prod, mpz_class(static_cast<long>(n)));
  }
  auto big = factor(static_cast<i64>(999999937ULL * 999999929ULL));
  EXPECT_EQ(big.factors.size(), 2u);
  EXPECT_THROW(factor(0), std::exception);
}

TEST(SquareClass, KernelAndProduct) {
  EXPECT_EQ(squarefree_kernel(-72).to_i64(), -2);
  EXPECT_EQ(squarefree_kernel(225).to_i64(), 1);
  EXPECT_EQ(squarefree_kernel(400).to_i64(), 1);
  EXPECT_EQ(squarefree_kernel(-144).to_i64(), -1);
  EXPECT_EQ(squarefree_kernel(-34 * 34 + 4 * 225).to_i64(), -1);
  for (i64 a = -60; a <= 60; ++a)
    for (i64 b = -60; b <= 60; ++b) {
      if (a == 0 || b == 0) continue;
      EXPECT_EQ(squarefree_kernel(a) * squarefree_kernel(b), squarefree_kernel(a * b));
    }
  EXPECT_TRUE((squarefree_kernel(6) * squarefree_kernel(6)).is_trivial());
}

TEST(Legendre, MatchesEulerCriterionAndSqrt) {
  for (u64 p : kPrimes) {
    if (p == 2) continue;
    for (i64 a = -50; a < 50; ++a) {
      EXPECT_EQ(legendre(a, p), oracle::legendre_naive(a, static_cast<long long>(p))) << a << " " << p;
      auto r = sqrt_mod(static_cast<u64>(oracle::mod_pos(a, p)), p);
      EXPECT_EQ(r.has_value(), legendre(a, p) >= 0);
      if (r) EXPECT_EQ((*r * *r) % p, static_cast<u64>(oracle::mod_pos(a, p)));
    }
    EXPECT_EQ(legendre(static_cast<i64>(smallest_nonresidue(p)), p), -1);
  }
}

TEST(Hilbert, AgreesWithClosedFormulas) {
  std::vector<Place> places{Place::infinity()};
  for (u64 p : kPrimes) places.push_back(Place::prime(p));
  for (i64 a = -30; a <= 30; ++a)
    for (i64 b = -30; b <= 30; ++b) {
      if (a == 0 || b == 0) continue;
      for (auto v : places)
        ASSERT_EQ(hilbert_symbol(mpq_class(a), mpq_class(b), v), oracle::hilbert(a, b, static_cast<long long>(v.p)))
            << a << "," << b << " at " << v.to_string();
    }
}

TEST(Hilbert, ProductFormula) {
  Rng rng(2);
  for (int t = 0; t < 300; ++t) {
    i64 a = static_cast<i64>(rng() % 2000) - 1000, b = static_cast<i64>(rng() % 2000) - 1000;
    if (a == 0 || b == 0) continue;
    std::vector<Place> places{Place::infinity(), Place::prime(2)};
    for (u64 p : prime_divisors(a * b))
      if (p != 2) places.push_back(Place::prime(p));
    int prod = 1;
    for (auto v : places) prod *= hilbert_symbol(mpq_class(a), mpq_class(b), v);
    EXPECT_EQ(prod, 1) << a << " " << b;
  }
}

TEST(Hilbert, BilinearOnLocalClasses) {
  for (u64 p : {0ULL, 2ULL, 3ULL, 5ULL}) {
    Place v = p ? Place::prime(p) : Place::infinity();
    const unsigned n = 1u << v.local_dim();
    for (unsigned x = 0; x < n; ++x)
      for (unsigned y = 0; y < n; ++y)
        for (unsigned z = 0; z < n; ++z) {
          LocalSquareClass a{v, x}, b{v, y}, c{v, z};
          EXPECT_EQ(hilbert_symbol(a * b, c), hilbert_symbol(a, c) * hilbert_symbol(b, c));
          EXPECT_EQ(hilbert_symbol(a, b), hilbert_symbol(b, a));
        }
  }
}

TEST(Localize, RepresentativesRoundTrip) {
  for (u64 p : {0ULL, 2ULL, 3ULL, 7ULL}) {
    Place v = p ? Place::prime(p) : Place::infinity();
    for (unsigned bits = 0; bits < (1u << v.local_dim()); ++bits) {
      LocalSquareClass c{v, bits};
      EXPECT_EQ(localize(c.representative(), v), c);
    }
  }
  EXPECT_EQ(localize(mpz_class(-1), Place::prime(2)).bits, 0b010u);
  EXPECT_EQ(localize(mpz_class(5), Place::prime(2)).bits, 0b100u);
  EXPECT_EQ(localize(mpz_class(17), Place::prime(2)).bits, 0u);
  EXPECT_EQ(localize(mpz_class(12), Place::prime(3)).bits, 1u);
  EXPECT_TRUE(is_local_square(squarefree_kernel(-7), Place::prime(2)));
  EXPECT_FALSE(is_local_square(squarefree_kernel(-1), Place::infinity()));
}

TEST(SquareValues, SmallCases) {
  using C = std::array<mpz_class, 5>;
  EXPECT_TRUE(takes_square_value(C{1, 0, 0, 0, 0}, 3, 0));
  EXPECT_FALSE(takes_square_value(C{2, 0, 0, 0, 0}, 3, 0));
  EXPECT_FALSE(takes_square_value(C{3, 0, 0, 0, 0}, 3, 0));
  EXPECT_TRUE(takes_square_value(C{0, 0, 1, 0, 0}, 5, 0));
  EXPECT_TRUE(takes_square_value(C{2, 0, 0, 0, 0}, 7, 0));   // 3^2 = 2 mod 7
  EXPECT_FALSE(takes_square_value(C{3, 0, 0, 0, 0}, 2, 0));  // 3 is not a 2-adic square
  EXPECT_TRUE(takes_square_value(C{-7, 0, 0, 0, 0}, 2, 0));
}

// A rational solution of the quartic certifies local solvability everywhere.
TEST(Quartic, GlobalSolutionsAreLocalSolutions) {
  const std::pair<long, long> curves[] = {{0, -1}, {5, 5}, {-34, 225}, {17, 16}, {3, 1}, {-10, 5}};
  std::size_t found = 0;
  for (auto [a, b] : curves) {
    std::vector<Place> places{Place::infinity(), Place::prime(2)};
    for (u64 p : prime_divisors(b * (a * a - 4 * b)))
      if (p != 2) places.push_back(Place::prime(p));
    for (long d1 = -std::abs(b); d1 <= std::abs(b); ++d1) {
      if (d1 == 0 || b % d1) continue;
      bool solvable = false;
      for (long M = 0; M <= 12 && !solvable; ++M)
        for (long e = 0; e <= 12 && !solvable; ++e) {
          if (M == 0 && e == 0) continue;
          if (std::gcd(M, e) != 1) continue;
          mpz_class val = mpz_class(d1) * M * M * M * M + mpz_class(a) * M * M * e * e + mpz_class(b / d1) * e * e * e * e;
          solvable = is_square_int(val);
        }
      if (!solvable) continue;
      ++found;
      for (auto v : places) EXPECT_TRUE(quartic_locally_solvable(mpz_class(d1), a, b, v)) << a << " " << b << " d1=" << d1;
    }
  }
  EXPECT_GT(found, 10u);
}

TEST(Quartic, LocalImageIsHalfTheGroupOnAverage) {
  // At an odd prime of good reduction the image is the unramified line.
  auto W = quartic_local_image(5, 5, Place::prime(7));
  EXPECT_EQ(W.dim(), 1u);
  EXPECT_TRUE(W.contains(gf2::BitVector::from_mask(2, 0b10)));
  // E(R) for y^2 = x^3 - x: both signs occur.
  EXPECT_EQ(quartic_local_image(0, -1, Place::infinity()).dim(), 1u);
  EXPECT_THROW(quartic_local_image(2, 1, Place::prime(3)), std::exception);
}
