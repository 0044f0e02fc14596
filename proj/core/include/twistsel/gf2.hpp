#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "twistsel/rng.hpp"

namespace twistsel::gf2 {

// Bit vector of fixed length, packed into 64-bit words (bit j of word j/64).
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}
  static BitVector from_mask(std::size_t n, std::uint64_t mask);

  std::size_t size() const { return size_; }
  bool get(std::size_t j) const { return (words_[j >> 6] >> (j & 63)) & 1u; }
  void set(std::size_t j, bool v = true);
  void flip(std::size_t j) { words_[j >> 6] ^= std::uint64_t{1} << (j & 63); }
  bool is_zero() const;
  std::size_t popcount() const;
  // Index of the lowest set bit, or size() when zero.
  std::size_t lowest() const;
  // Valid only for size() <= 64.
  std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

  BitVector& operator^=(const BitVector& o);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  bool operator==(const BitVector& o) const = default;
  bool operator<(const BitVector& o) const;
  // Inner product over F2.
  bool dot(const BitVector& o) const;

  std::vector<std::uint64_t>& words() { return words_; }
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::string to_string() const;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);
  static BitMatrix identity(std::size_t n);
  static BitMatrix from_rows(std::size_t cols, const std::vector<BitVector>& rows);
  // Row-major strings such as {"110", "011"}.
  static BitMatrix parse(const std::vector<std::string>& rows);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
  void set(std::size_t i, std::size_t j, bool v = true) { rows_[i].set(j, v); }
  const BitVector& row(std::size_t i) const { return rows_[i]; }
  BitVector& row(std::size_t i) { return rows_[i]; }
  void append_row(const BitVector& r);

  BitMatrix transpose() const;
  BitMatrix operator*(const BitMatrix& o) const;
  // M * v for a column vector v of length cols().
  BitVector apply(const BitVector& v) const;
  bool operator==(const BitMatrix& o) const = default;

  // In-place reduced row echelon form; returns the pivot columns.
  std::vector<std::size_t> rref();

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

std::size_t rank(BitMatrix m);

class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim) : ambient_(ambient_dim) {}
  static Subspace span(std::size_t ambient_dim, const std::vector<BitVector>& gens);
  static Subspace full(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  // Rows are linearly independent and in reduced echelon form.
  const BitMatrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(const BitVector& v) const;
  // Reduce v modulo the subspace (clears pivot positions).
  BitVector reduce(const BitVector& v) const;
  bool add(const BitVector& v);  // returns true when the dimension grew
  bool is_subspace_of(const Subspace& o) const;
  Subspace sum(const Subspace& o) const;
  Subspace intersect(const Subspace& o) const;
  // Vectors w with w.v = 0 for all v in the subspace.
  Subspace annihilator() const;
  std::vector<BitVector> elements() const;  // 2^dim vectors, small dims only
  bool operator==(const Subspace& o) const;

 private:
  std::size_t ambient_ = 0;
  BitMatrix basis_;
  std::vector<std::size_t> pivots_;
};

// Right kernel {x : M x = 0}.
Subspace kernel_basis(const BitMatrix& m);
Subspace image(const BitMatrix& m);  // column space

// Coordinates on big/sub: a linear map big -> F2^(dim big - dim sub) with kernel sub.
class QuotientMap {
 public:
  QuotientMap(const Subspace& big, const Subspace& sub);
  std::size_t dim() const { return big_dim_ - sub_dim_; }
  // v must lie in big.
  BitVector apply(const BitVector& v) const;

 private:
  std::size_t sub_dim_ = 0;
  std::size_t big_dim_ = 0;
  // Echelon rows of big, each tagged with its coordinates in the basis
  // (sub basis, then complement vectors).
  std::vector<BitVector> ech_;
  std::vector<BitVector> coord_;
  std::vector<std::size_t> pivot_;
};

BitMatrix sample_matrix(std::size_t m, std::size_t n, Rng& rng);
BitMatrix sample_alternating(std::size_t n, Rng& rng);

// All subspaces of F2^n, each once. n <= 5.
std::vector<Subspace> enumerate_subspaces(std::size_t ambient_dim);
// Uncapped variant used by the module enumerations (n <= 8).
std::vector<Subspace> enumerate_subspaces_uncapped(std::size_t ambient_dim);

}  // namespace twistsel::gf2
