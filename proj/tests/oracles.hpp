#pragma once
// Brute-force reference implementations. Deliberately naive: bit masks, full
// enumeration, no shared code with the library beyond the types being checked.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>


namespace oracle {

using Mask = std::uint32_t;

// Rank over F2 of rows given as masks.
inline int rank_rows(std::vector<Mask> rows) {
  int r = 0;
  for (int bit = 31; bit >= 0; --bit) {
    int piv = -1;
    for (std::size_t i = r; i < rows.size(); ++i)
      if (rows[i] >> bit & 1) {
        piv = static_cast<int>(i);
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (static_cast<int>(i) != r && (rows[i] >> bit & 1)) rows[i] ^= rows[r];
    ++r;
  }
  return r;
}

// Counts of kernel dimension over all m x n matrices.
inline std::map<int, std::uint64_t> enumerate_mat(int m, int n) {
  std::map<int, std::uint64_t> out;
  const std::uint64_t total = std::uint64_t{1} << (m * n);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<Mask> rows(m);
    for (int i = 0; i < m; ++i) rows[i] = static_cast<Mask>((code >> (i * n)) & ((1u << n) - 1));
    ++out[n - rank_rows(rows)];
  }
  return out;
}

// Counts of kernel dimension over all alternating n x n matrices.
inline std::map<int, std::uint64_t> enumerate_alt(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  std::map<int, std::uint64_t> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << slots.size()); ++code) {
    std::vector<Mask> rows(n, 0);
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (code >> s & 1) {
        rows[slots[s].first] |= 1u << slots[s].second;
        rows[slots[s].second] |= 1u << slots[s].first;
      }
    ++out[n - rank_rows(rows)];
  }
  return out;
}

// Counts of dim ker of (v, w) -> P0(Tv, Tw) over all T: F2^n -> F2^m, P0 standard symplectic.
inline std::map<int, std::uint64_t> enumerate_pulled_back(int n, int m) {
  std::map<int, std::uint64_t> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * m)); ++code) {
    std::vector<Mask> cols(n);  // T e_j as an m-bit mask
    for (int j = 0; j < n; ++j) cols[j] = static_cast<Mask>((code >> (j * m)) & ((1u << m) - 1));
    auto pair = [&](Mask x, Mask y) {
      int s = 0;
      for (int k = 0; k < m; k += 2) s ^= ((x >> k & 1) & (y >> (k + 1) & 1)) ^ ((x >> (k + 1) & 1) & (y >> k & 1));
      return s;
    };
    std::vector<Mask> gram(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (pair(cols[i], cols[j])) gram[i] |= 1u << j;
    ++out[n - rank_rows(gram)];
  }
  return out;
}

// Linear map F2^s -> F2^t as t-bit images of basis vectors.
inline Mask apply(const std::vector<Mask>& img, Mask v) {
  Mask r = 0;
  for (std::size_t j = 0; j < img.size(); ++j)
    if (v >> j & 1) r ^= img[j];
  return r;
}

inline bool injective(const std::vector<Mask>& img) {
  return rank_rows(img) == static_cast<int>(img.size());
}

// Morphisms (V0 ⊆ V) -> (W0 ⊆ W) that are injective, send V0 into W0 and induce an
// injection V/V0 -> W/W0. V0 = first a coordinates of F2^{a+b}.
inline std::uint64_t brute_inj_C(int a, int b, int a2, int b2) {
  const int s = a + b, t = a2 + b2;
  const Mask w0 = (1u << a2) - 1;
  std::uint64_t count = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << (s * t)); ++code) {
    std::vector<Mask> img(s);
    for (int j = 0; j < s; ++j) img[j] = static_cast<Mask>((code >> (j * t)) & ((1u << t) - 1));
    if (!injective(img)) continue;
    bool ok = true;
    for (int j = 0; j < a && ok; ++j) ok = (img[j] & ~w0) == 0;
    if (!ok) continue;
    // induced map on quotients: the W/W0 parts of the images of the last b basis vectors
    std::vector<Mask> q;
    for (int j = a; j < s; ++j) q.push_back(img[j] >> a2);
    if (injective(q)) ++count;
  }
  return count;
}

// Injective g: F2^d -> F2^c with fA(g(v)) = fO(v), maps to L given by images of basis vectors.
inline std::uint64_t brute_inj_D(int d, const std::vector<Mask>& fO, int c, const std::vector<Mask>& fA) {
  std::uint64_t count = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << (d * c)); ++code) {
    std::vector<Mask> img(d);
    for (int j = 0; j < d; ++j) img[j] = static_cast<Mask>((code >> (j * c)) & ((1u << c) - 1));
    if (!injective(img)) continue;
    bool ok = true;
    for (int j = 0; j < d && ok; ++j) ok = apply(fA, img[j]) == fO[j];
    if (ok) ++count;
  }
  return count;
}

// Hilbert symbol by the classical closed formulas (Serre, Course in Arithmetic III.1),
// written against plain integers. p = 0 means the real place.
inline long long mod_pos(long long a, long long m) { return ((a % m) + m) % m; }

inline int legendre_naive(long long a, long long p) {
  a = mod_pos(a, p);
  if (a == 0) return 0;
  for (long long x = 1; x < p; ++x)
    if (x * x % p == a) return 1;
  return -1;
}

inline int hilbert(long long a, long long b, long long p) {
  if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
  int alpha = 0, beta = 0;
  while (a % p == 0) a /= p, ++alpha;
  while (b % p == 0) b /= p, ++beta;
  if (p == 2) {
    auto eps = [](long long u) { return static_cast<int>(mod_pos((u - 1) / 2, 2)); };
    auto omega = [](long long u) { return static_cast<int>(mod_pos((u * u - 1) / 8, 2)); };
    int e = (eps(a) * eps(b) + alpha * omega(b) + beta * omega(a)) % 2;
    return e ? -1 : 1;
  }
  int sign = ((alpha * beta) % 2 && (p % 4 == 3)) ? -1 : 1;
  if (beta % 2) sign *= legendre_naive(a, p);
  if (alpha % 2) sign *= legendre_naive(b, p);
  return sign;
}

}  // namespace oracle
