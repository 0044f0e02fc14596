#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "twistsel/gf2.hpp"

using namespace twistsel;
using namespace twistsel::gf2;

namespace {

BitMatrix random_matrix(std::size_t m, std::size_t n, Rng& rng) { return sample_matrix(m, n, rng); }

std::vector<oracle::Mask> masks(const BitMatrix& M) {
  std::vector<oracle::Mask> r;
  for (std::size_t i = 0; i < M.rows(); ++i) r.push_back(static_cast<oracle::Mask>(M.row(i).mask()));
  return r;
}

}  // namespace

TEST(BitVector, MaskRoundTripAndDot) {
  auto v = BitVector::from_mask(10, 0b1011001101);
  EXPECT_EQ(v.mask(), 0b1011001101u);
  EXPECT_EQ(v.popcount(), 6u);
  EXPECT_EQ(v.lowest(), 0u);
  auto w = BitVector::from_mask(10, 0b0000001100);
  EXPECT_FALSE(v.dot(w));  // bits 2 and 3 overlap
  EXPECT_TRUE(v.dot(BitVector::from_mask(10, 0b1000)));
  EXPECT_EQ((v ^ v).is_zero(), true);
}

TEST(BitVector, WideVectorsCrossWordBoundary) {
  BitVector v(130);
  v.set(63);
  v.set(64);
  v.set(129);
  EXPECT_EQ(v.popcount(), 3u);
  EXPECT_EQ(v.lowest(), 63u);
  v.flip(63);
  EXPECT_EQ(v.lowest(), 64u);
}

TEST(BitMatrix, RankMatchesOracle) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t m = 1 + rng() % 8, n = 1 + rng() % 12;
    auto M = random_matrix(m, n, rng);
    EXPECT_EQ(static_cast<int>(rank(M)), oracle::rank_rows(masks(M)));
  }
}

TEST(BitMatrix, KernelIsKilledAndHasRightDimension) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t m = 1 + rng() % 7, n = 1 + rng() % 9;
    auto M = random_matrix(m, n, rng);
    auto K = kernel_basis(M);
    EXPECT_EQ(K.dim() + rank(M), n);
    for (std::size_t i = 0; i < K.dim(); ++i) EXPECT_TRUE(M.apply(K.basis().row(i)).is_zero());
    EXPECT_EQ(image(M).dim(), rank(M));
  }
}

TEST(BitMatrix, ProductAndTranspose) {
  auto A = BitMatrix::parse({"110", "011"});
  auto B = BitMatrix::parse({"10", "11", "01"});
  auto C = A * B;
  EXPECT_EQ(C, BitMatrix::parse({"01", "10"}));
  EXPECT_EQ(A.transpose().transpose(), A);
  EXPECT_EQ((A * B).transpose(), B.transpose() * A.transpose());
  EXPECT_EQ(BitMatrix::identity(3) * B, B);
}

TEST(Subspace, EnumerationCountsAreGaussianSums) {
  // number of subspaces of F2^n
  const std::size_t expected[] = {1, 2, 5, 16, 67, 374};
  for (std::size_t n = 0; n <= 5; ++n) {
    auto all = enumerate_subspaces(n);
    EXPECT_EQ(all.size(), expected[n]) << n;
    std::set<std::vector<std::uint64_t>> seen;
    for (auto& S : all) {
      std::vector<std::uint64_t> key;
      for (auto& e : S.elements()) key.push_back(e.mask());
      std::sort(key.begin(), key.end());
      EXPECT_TRUE(seen.insert(key).second);
    }
  }
  EXPECT_EQ(enumerate_subspaces_uncapped(6).size(), 2825u);
  EXPECT_THROW(enumerate_subspaces(6), std::exception);
}

TEST(Subspace, SumIntersectDimensionFormula) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    auto U = image(random_matrix(n, 1 + rng() % n, rng));
    auto W = image(random_matrix(n, 1 + rng() % n, rng));
    auto S = U.sum(W), I = U.intersect(W);
    EXPECT_EQ(S.dim() + I.dim(), U.dim() + W.dim());
    EXPECT_TRUE(I.is_subspace_of(U));
    EXPECT_TRUE(I.is_subspace_of(W));
    EXPECT_TRUE(U.is_subspace_of(S));
    auto Ann = U.annihilator();
    EXPECT_EQ(Ann.dim() + U.dim(), n);
    for (std::size_t i = 0; i < Ann.dim(); ++i)
      for (std::size_t j = 0; j < U.dim(); ++j) EXPECT_FALSE(Ann.basis().row(i).dot(U.basis().row(j)));
    EXPECT_EQ(Ann.annihilator(), U);
  }
}

TEST(Subspace, ReduceAndContains) {
  auto S = Subspace::span(4, {BitVector::from_mask(4, 0b0011), BitVector::from_mask(4, 0b0110)});
  EXPECT_EQ(S.dim(), 2u);
  EXPECT_TRUE(S.contains(BitVector::from_mask(4, 0b0101)));
  EXPECT_FALSE(S.contains(BitVector::from_mask(4, 0b1000)));
  EXPECT_TRUE(S.reduce(BitVector::from_mask(4, 0b0101)).is_zero());
  EXPECT_FALSE(S.add(BitVector::from_mask(4, 0b0101)));
  EXPECT_TRUE(S.add(BitVector::from_mask(4, 0b1000)));
  EXPECT_EQ(S.elements().size(), 8u);
}

TEST(QuotientMap, KernelIsTheSubspace) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    auto big = image(random_matrix(n, n, rng));
    std::vector<BitVector> gens;
    for (std::size_t i = 0; i < big.dim(); ++i)
      if (rng() & 1) gens.push_back(big.basis().row(i) ^ (i + 1 < big.dim() ? big.basis().row(i + 1) : BitVector(n)));
    auto sub = Subspace::span(n, gens);
    ASSERT_TRUE(sub.is_subspace_of(big));
    QuotientMap q(big, sub);
    EXPECT_EQ(q.dim(), big.dim() - sub.dim());
    std::set<std::uint64_t> images;
    for (auto& v : big.elements()) {
      auto x = q.apply(v);
      EXPECT_EQ(x.is_zero(), sub.contains(v));
      images.insert(x.mask());
    }
    EXPECT_EQ(images.size(), std::size_t{1} << q.dim());
  }
}

TEST(Sampling, AlternatingIsAlternating) {
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    auto A = sample_alternating(7, rng);
    EXPECT_EQ(A, A.transpose());
    for (std::size_t i = 0; i < 7; ++i) EXPECT_FALSE(A.get(i, i));
    EXPECT_EQ(rank(A) % 2, 0u);
  }
}

TEST(Sampling, SeededStreamsReproduce) {
  Rng a(42), b(42);
  EXPECT_EQ(sample_matrix(5, 9, a), sample_matrix(5, 9, b));
  Rng s = Rng(42).split(3), t = Rng(42).split(3), u = Rng(42).split(4);
  auto x = s(), y = t(), z = u();
  EXPECT_EQ(x, y);
  EXPECT_NE(x, z);
}
