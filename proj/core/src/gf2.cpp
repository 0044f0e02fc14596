#include "twistsel/gf2.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <stdexcept>

namespace twistsel::gf2 {

BitVector BitVector::from_mask(std::size_t n, std::uint64_t mask) {
  if (n > 64) throw std::invalid_argument("BitVector::from_mask: length exceeds 64");
  BitVector v(n);
  if (n > 0) v.words_[0] = n == 64 ? mask : (mask & ((std::uint64_t{1} << n) - 1));
  return v;
}

void BitVector::set(std::size_t j, bool v) {
  const std::uint64_t bit = std::uint64_t{1} << (j & 63);
  if (v)
    words_[j >> 6] |= bit;
  else
    words_[j >> 6] &= ~bit;
}

bool BitVector::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t BitVector::popcount() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t BitVector::lowest() const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
  return size_;
}

BitVector& BitVector::operator^=(const BitVector& o) {
  if (o.size_ != size_) throw std::invalid_argument("BitVector: length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

bool BitVector::operator<(const BitVector& o) const {
  if (size_ != o.size_) return size_ < o.size_;
  for (std::size_t i = words_.size(); i-- > 0;)
    if (words_[i] != o.words_[i]) return words_[i] < o.words_[i];
  return false;
}

bool BitVector::dot(const BitVector& o) const {
  if (o.size_ != size_) throw std::invalid_argument("BitVector: length mismatch");
  unsigned acc = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) acc ^= std::popcount(words_[i] & o.words_[i]) & 1u;
  return acc;
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t j = 0; j < size_; ++j)
    if (get(j)) s[j] = '1';
  return s;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitMatrix BitMatrix::from_rows(std::size_t cols, const std::vector<BitVector>& rows) {
  BitMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

BitMatrix BitMatrix::parse(const std::vector<std::string>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  BitMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("BitMatrix::parse: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) {
      if (rows[i][j] == '1')
        m.set(i, j);
      else if (rows[i][j] != '0')
        throw std::invalid_argument("BitMatrix::parse: expected 0/1");
    }
  }
  return m;
}

void BitMatrix::append_row(const BitVector& r) {
  if (r.size() != cols_) throw std::invalid_argument("BitMatrix::append_row: length mismatch");
  rows_.push_back(r);
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (get(i, j)) t.set(j, i);
  return t;
}

BitMatrix BitMatrix::operator*(const BitMatrix& o) const {
  if (cols_ != o.rows()) throw std::invalid_argument("BitMatrix: shape mismatch in product");
  BitMatrix p(rows(), o.cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      if (get(i, k)) p.rows_[i] ^= o.rows_[k];
  return p;
}

BitVector BitMatrix::apply(const BitVector& v) const {
  BitVector out(rows());
  for (std::size_t i = 0; i < rows(); ++i)
    if (rows_[i].dot(v)) out.set(i);
  return out;
}

std::vector<std::size_t> BitMatrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows(); ++c) {
    std::size_t sel = r;
    while (sel < rows() && !rows_[sel].get(c)) ++sel;
    if (sel == rows()) continue;
    std::swap(rows_[r], rows_[sel]);
    for (std::size_t i = 0; i < rows(); ++i)
      if (i != r && rows_[i].get(c)) rows_[i] ^= rows_[r];
    pivots.push_back(c);
    ++r;
  }
  rows_.resize(r, BitVector(cols_));
  return pivots;
}

std::size_t rank(BitMatrix m) {
  // Forward elimination only; rref() also clears above pivots, which rank does not need.
  std::size_t r = 0;
  const std::size_t rows = m.rows();
  for (std::size_t c = 0; c < m.cols() && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && !m.get(sel, c)) ++sel;
    if (sel == rows) continue;
    std::swap(m.row(r), m.row(sel));
    for (std::size_t i = r + 1; i < rows; ++i)
      if (m.get(i, c)) m.row(i) ^= m.row(r);
    ++r;
  }
  return r;
}

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<BitVector>& gens) {
  Subspace s(ambient_dim);
  BitMatrix m = BitMatrix::from_rows(ambient_dim, gens);
  s.pivots_ = m.rref();
  s.basis_ = std::move(m);
  return s;
}

Subspace Subspace::full(std::size_t ambient_dim) {
  Subspace s(ambient_dim);
  s.basis_ = BitMatrix::identity(ambient_dim);
  for (std::size_t i = 0; i < ambient_dim; ++i) s.pivots_.push_back(i);
  return s;
}

BitVector Subspace::reduce(const BitVector& v) const {
  if (v.size() != ambient_) throw std::invalid_argument("Subspace: vector length mismatch");
  BitVector w = v;
  for (std::size_t i = 0; i < pivots_.size(); ++i)
    if (w.get(pivots_[i])) w ^= basis_.row(i);
  return w;
}

bool Subspace::contains(const BitVector& v) const { return reduce(v).is_zero(); }

bool Subspace::add(const BitVector& v) {
  BitVector w = reduce(v);
  if (w.is_zero()) return false;
  std::vector<BitVector> rows;
  for (std::size_t i = 0; i < dim(); ++i) rows.push_back(basis_.row(i));
  rows.push_back(w);
  *this = span(ambient_, rows);
  return true;
}

bool Subspace::is_subspace_of(const Subspace& o) const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (!o.contains(basis_.row(i))) return false;
  return true;
}

Subspace Subspace::sum(const Subspace& o) const {
  if (o.ambient_ != ambient_) throw std::invalid_argument("Subspace::sum: ambient mismatch");
  std::vector<BitVector> rows;
  for (std::size_t i = 0; i < dim(); ++i) rows.push_back(basis_.row(i));
  for (std::size_t i = 0; i < o.dim(); ++i) rows.push_back(o.basis_.row(i));
  return span(ambient_, rows);
}

Subspace Subspace::annihilator() const { return kernel_basis(basis_); }

Subspace Subspace::intersect(const Subspace& o) const {
  // U ∩ W = (U^⊥ + W^⊥)^⊥
  return annihilator().sum(o.annihilator()).annihilator();
}

std::vector<BitVector> Subspace::elements() const {
  if (dim() > 20) throw std::length_error("Subspace::elements: dimension too large");
  std::vector<BitVector> out;
  out.reserve(std::size_t{1} << dim());
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << dim()); ++m) {
    BitVector v(ambient_);
    for (std::size_t i = 0; i < dim(); ++i)
      if ((m >> i) & 1u) v ^= basis_.row(i);
    out.push_back(std::move(v));
  }
  return out;
}

bool Subspace::operator==(const Subspace& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }

Subspace kernel_basis(const BitMatrix& m) {
  BitMatrix r = m;
  const auto piv = r.rref();
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<BitVector> gens;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    BitVector v(n);
    v.set(f);
    for (std::size_t i = 0; i < piv.size(); ++i)
      if (r.get(i, f)) v.set(piv[i]);
    gens.push_back(std::move(v));
  }
  return Subspace::span(n, gens);
}

Subspace image(const BitMatrix& m) {
  const BitMatrix t = m.transpose();
  std::vector<BitVector> rows;
  for (std::size_t i = 0; i < t.rows(); ++i) rows.push_back(t.row(i));
  return Subspace::span(m.rows(), rows);
}

QuotientMap::QuotientMap(const Subspace& big, const Subspace& sub) {
  if (!sub.is_subspace_of(big)) throw std::invalid_argument("QuotientMap: sub is not contained in big");
  sub_dim_ = sub.dim();
  big_dim_ = big.dim();
  std::vector<BitVector> basis;
  for (std::size_t i = 0; i < sub.dim(); ++i) basis.push_back(sub.basis().row(i));
  Subspace acc = sub;
  for (std::size_t i = 0; i < big.dim(); ++i)
    if (acc.add(big.basis().row(i))) basis.push_back(big.basis().row(i));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    BitVector v = basis[k];
    BitVector c(big_dim_);
    c.set(k);
    for (std::size_t i = 0; i < ech_.size(); ++i)
      if (v.get(pivot_[i])) {
        v ^= ech_[i];
        c ^= coord_[i];
      }
    const std::size_t p = v.lowest();
    // Keep rows fully reduced so that reduction order does not matter.
    for (std::size_t i = 0; i < ech_.size(); ++i)
      if (ech_[i].get(p)) {
        ech_[i] ^= v;
        coord_[i] ^= c;
      }
    ech_.push_back(std::move(v));
    coord_.push_back(std::move(c));
    pivot_.push_back(p);
  }
}

BitVector QuotientMap::apply(const BitVector& v) const {
  BitVector w = v;
  BitVector c(big_dim_);
  for (std::size_t i = 0; i < ech_.size(); ++i)
    if (w.get(pivot_[i])) {
      w ^= ech_[i];
      c ^= coord_[i];
    }
  if (!w.is_zero()) throw std::invalid_argument("QuotientMap::apply: vector outside the ambient subspace");
  BitVector out(dim());
  for (std::size_t k = sub_dim_; k < big_dim_; ++k)
    if (c.get(k)) out.set(k - sub_dim_);
  return out;
}

BitMatrix sample_matrix(std::size_t m, std::size_t n, Rng& rng) {
  BitMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    auto& w = a.row(i).words();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = rng.bits();
    if (n % 64) w.back() &= (std::uint64_t{1} << (n % 64)) - 1;
  }
  return a;
}

BitMatrix sample_alternating(std::size_t n, Rng& rng) {
  BitMatrix a(n, n);
  std::uint64_t pool = 0;
  int left = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (left == 0) {
        pool = rng.bits();
        left = 64;
      }
      const bool b = pool & 1u;
      pool >>= 1;
      --left;
      if (b) {
        a.set(i, j);
        a.set(j, i);
      }
    }
  return a;
}

std::vector<Subspace> enumerate_subspaces_uncapped(std::size_t n) {
  if (n > 8) throw std::length_error("enumerate_subspaces: ambient dimension above 8");
  // Breadth-first by dimension: every (k+1)-subspace is some k-subspace plus one vector.
  std::vector<Subspace> out;
  std::vector<Subspace> layer{Subspace(n)};
  const std::uint64_t total = std::uint64_t{1} << n;
  while (!layer.empty()) {
    out.insert(out.end(), layer.begin(), layer.end());
    std::set<std::vector<std::uint64_t>> seen;
    std::vector<Subspace> next;
    for (const auto& s : layer)
      for (std::uint64_t m = 1; m < total; ++m) {
        const auto v = BitVector::from_mask(n, m);
        if (s.contains(v)) continue;
        Subspace t = s;
        t.add(v);
        std::vector<std::uint64_t> key;
        for (std::size_t i = 0; i < t.dim(); ++i) key.push_back(t.basis().row(i).mask());
        if (seen.insert(key).second) next.push_back(std::move(t));
      }
    layer = std::move(next);
  }
  return out;
}

std::vector<Subspace> enumerate_subspaces(std::size_t ambient_dim) {
  if (ambient_dim > 5) throw std::length_error("enumerate_subspaces: ambient dimension cap is 5");
  return enumerate_subspaces_uncapped(ambient_dim);
}

}  // namespace twistsel::gf2
