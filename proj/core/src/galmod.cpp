#include "twistsel/galmod.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace twistsel::galmod {

Mat2 Mat2::operator*(Mat2 o) const {
  int e[4];
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) e[2 * r + c] = (at(r, 0) & o.at(0, c)) ^ (at(r, 1) & o.at(1, c));
  return from(e[0], e[1], e[2], e[3]);
}

std::string Mat2::to_string() const {
  return "[[" + std::to_string(at(0, 0)) + "," + std::to_string(at(0, 1)) + "],[" + std::to_string(at(1, 0)) + "," +
         std::to_string(at(1, 1)) + "]]";
}

bool MatRingF2::contains(Mat2 m) const { return std::binary_search(elements.begin(), elements.end(), m); }

MatRingF2 ring_generated(const std::vector<Mat2>& gens) {
  if (gens.size() > 16) throw std::invalid_argument("ring_generated: at most 16 generators");
  std::set<Mat2> s{kZero, kId};
  s.insert(gens.begin(), gens.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Mat2> cur(s.begin(), s.end());
    for (Mat2 x : cur)
      for (Mat2 y : cur) {
        grew |= s.insert(x + y).second;
        grew |= s.insert(x * y).second;
      }
  }
  return MatRingF2{std::vector<Mat2>(s.begin(), s.end())};
}

MatRingF2 ring_IV() { return ring_generated({kAlpha, kBeta}); }
MatRingF2 ring_V() { return ring_generated({kBeta}); }

std::size_t RModule::dim() const {
  std::size_t d = 0;
  for (Factor f : factors) d += f == Factor::Plane ? 2 : 1;
  return d;
}

std::vector<std::size_t> RModule::offsets() const {
  std::vector<std::size_t> off;
  std::size_t d = 0;
  for (Factor f : factors) {
    off.push_back(d);
    d += f == Factor::Plane ? 2 : 1;
  }
  return off;
}

gf2::BitMatrix RModule::action(Mat2 r) const {
  const std::size_t n = dim();
  gf2::BitMatrix A(n, n);
  auto off = offsets();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    std::size_t o = off[i];
    switch (factors[i]) {
      case Factor::Plane:
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) A.set(o + x, o + y, r.at(x, y));
        break;
      case Factor::Line1:
        if (r.at(1, 0)) throw std::invalid_argument("action: matrix does not preserve <e1>");
        A.set(o, o, r.at(0, 0));
        break;
      case Factor::Line2:
        if (r.at(0, 1)) throw std::invalid_argument("action: matrix does not preserve <e2>");
        A.set(o, o, r.at(1, 1));
        break;
    }
  }
  return A;
}

bool RModule::is_submodule(const gf2::Subspace& T, const MatRingF2& R) const {
  for (Mat2 r : R.elements) {
    gf2::BitMatrix A = action(r);
    for (std::size_t i = 0; i < T.dim(); ++i)
      if (!T.contains(A.apply(T.basis().row(i)))) return false;
  }
  return true;
}

namespace {

// Is the linear map given by coordinate selection onto when restricted to T?
bool projection_onto(const gf2::Subspace& T, const std::vector<std::size_t>& coords) {
  std::vector<gf2::BitVector> imgs;
  for (std::size_t i = 0; i < T.dim(); ++i) {
    gf2::BitVector w(coords.size());
    for (std::size_t k = 0; k < coords.size(); ++k) w.set(k, T.basis().row(i).get(coords[k]));
    imgs.push_back(w);
  }
  return gf2::Subspace::span(coords.size(), imgs).dim() == coords.size();
}

template <class Hyp>
VerifyReport run_enumeration(const RModule& M, const MatRingF2& R, Hyp&& hypotheses) {
  VerifyReport rep;
  const std::size_t n = M.dim();
  if (n > kMaxAmbient) throw std::invalid_argument("module dimension exceeds the enumeration cap");
  rep.verified = true;
  for (const auto& T : gf2::enumerate_subspaces_uncapped(n)) {
    ++rep.subspaces_checked;
    if (!M.is_submodule(T, R) || !hypotheses(T)) continue;
    ++rep.hypotheses_met;
    if (T.dim() != n) {
      rep.verified = false;
      if (!rep.counterexample) rep.counterexample = T;
    }
  }
  return rep;
}

}  // namespace

VerifyReport verify_prop_IV_cofavored(long a, long b) {
  if (a < 0 || b < 0) throw std::invalid_argument("negative multiplicity");
  if (a + 2 * b > static_cast<long>(kMaxAmbient)) throw std::invalid_argument("a + 2b exceeds the ambient cap");
  RModule M;
  for (long i = 0; i < a; ++i) M.factors.push_back(Factor::Line1);
  for (long i = 0; i < b; ++i) M.factors.push_back(Factor::Plane);
  auto off = M.offsets();
  std::vector<std::size_t> phi_part, quot_part;
  for (long i = 0; i < a; ++i) phi_part.push_back(off[i]);
  for (long i = 0; i < b; ++i) quot_part.push_back(off[a + i] + 1);  // phi kills e1: keep y
  auto rep = run_enumeration(M, ring_IV(), [&](const gf2::Subspace& T) {
    return projection_onto(T, phi_part) && projection_onto(T, quot_part);
  });
  rep.proposition = "IV_cofavored";
  rep.parameters = {a, b};
  return rep;
}

VerifyReport verify_prop_V_cofavored(long a, long b, long c) {
  if (a < 0 || b < 0 || c < 0) throw std::invalid_argument("negative multiplicity");
  if (a + b + 2 * c > static_cast<long>(kMaxAmbient)) throw std::invalid_argument("a + b + 2c exceeds the ambient cap");
  RModule M;
  for (long i = 0; i < a; ++i) M.factors.push_back(Factor::Line1);
  for (long i = 0; i < b; ++i) M.factors.push_back(Factor::Line2);
  for (long i = 0; i < c; ++i) M.factors.push_back(Factor::Plane);
  auto off = M.offsets();
  std::vector<std::size_t> via_phi2, via_phi1;
  // phi2 kills e2, so it reads the x-coordinate; phi1 kills e1 and reads y
  for (long i = 0; i < a; ++i) via_phi2.push_back(off[i]);
  for (long i = 0; i < c; ++i) via_phi2.push_back(off[a + b + i]);
  for (long i = 0; i < b; ++i) via_phi1.push_back(off[a + i]);
  for (long i = 0; i < c; ++i) via_phi1.push_back(off[a + b + i] + 1);
  auto rep = run_enumeration(M, ring_V(), [&](const gf2::Subspace& T) {
    return projection_onto(T, via_phi2) && projection_onto(T, via_phi1);
  });
  rep.proposition = "V_cofavored";
  rep.parameters = {a, b, c};
  return rep;
}

std::vector<gf2::BitMatrix> equivariant_maps(std::size_t src_dim, std::size_t dst_dim,
                                             const std::vector<gf2::BitMatrix>& src_action,
                                             const std::vector<gf2::BitMatrix>& dst_action) {
  if (src_action.size() != dst_action.size()) throw std::invalid_argument("equivariant_maps: generator mismatch");
  const std::size_t bits = src_dim * dst_dim;
  if (bits > 20) throw std::invalid_argument("equivariant_maps: too many maps to enumerate");
  std::vector<gf2::BitMatrix> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << bits); ++m) {
    gf2::BitMatrix G(dst_dim, src_dim);
    for (std::size_t i = 0; i < dst_dim; ++i)
      for (std::size_t j = 0; j < src_dim; ++j) G.set(i, j, (m >> (i * src_dim + j)) & 1);
    bool ok = true;
    for (std::size_t g = 0; g < src_action.size() && ok; ++g) ok = dst_action[g] * G == G * src_action[g];
    if (ok) out.push_back(G);
  }
  return out;
}

HomReport classify_equivariant_homs() {
  const std::vector<Mat2> gens{kAlpha, kBeta};
  RModule plane{{Factor::Plane}}, line{{Factor::Line1}};
  // E[2]/E[phi] is 1-dimensional, with r acting by its (2,2) entry
  auto quot = [](Mat2 r) {
    gf2::BitMatrix A(1, 1);
    A.set(0, 0, r.at(1, 1));
    return A;
  };
  std::vector<gf2::BitMatrix> P, L, Q;
  for (Mat2 g : gens) {
    P.push_back(plane.action(g));
    L.push_back(line.action(g));
    Q.push_back(quot(g));
  }
  HomReport rep;
  const std::array<std::pair<const std::vector<gf2::BitMatrix>*, const std::vector<gf2::BitMatrix>*>, 4> spaces{
      {{&P, &P}, {&P, &Q}, {&L, &P}, {&L, &Q}}};
  for (std::size_t s = 0; s < 4; ++s) {
    auto [src, dst] = spaces[s];
    for (auto& G : equivariant_maps(src->front().cols(), dst->front().rows(), *src, *dst)) {
      bool zero = true;
      for (std::size_t i = 0; i < G.rows(); ++i) zero &= G.row(i).is_zero();
      if (zero) continue;
      ++rep.nonzero_counts[s];
      rep.maps[s].push_back(G);
    }
  }
  return rep;
}

}  // namespace twistsel::galmod
