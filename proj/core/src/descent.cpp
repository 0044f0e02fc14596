#include "twistsel/descent.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace twistsel {

namespace {

bool is_square(const mpz_class& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()); }

struct SUnits {
  std::vector<SquareClass> gens;  // -1, then primes
  std::vector<Place> places;      // infinity, then the same primes
};

SUnits s_units(const std::vector<u64>& bad, const SquareClass& d) {
  std::set<u64> ps(bad.begin(), bad.end());
  ps.insert(2);
  ps.insert(d.primes().begin(), d.primes().end());
  SUnits s;
  s.gens.emplace_back(-1, std::vector<u64>{});
  s.places.push_back(Place::infinity());
  for (u64 p : ps) {
    s.gens.emplace_back(1, std::vector<u64>{p});
    s.places.push_back(Place{p});
  }
  return s;
}

// k_v x n matrix whose column j is the local class of gens[j].
gf2::BitMatrix local_matrix(const std::vector<SquareClass>& gens, Place v) {
  gf2::BitMatrix m(v.local_dim(), gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    const unsigned bits = localize(gens[j], v).bits;
    for (std::size_t i = 0; i < v.local_dim(); ++i)
      if ((bits >> i) & 1u) m.set(i, j);
  }
  return m;
}

// Block diagonal diag(m, m) for the pair map.
gf2::BitMatrix doubled(const gf2::BitMatrix& m) {
  gf2::BitMatrix d(2 * m.rows(), 2 * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m.get(i, j)) {
        d.set(i, j);
        d.set(m.rows() + i, m.cols() + j);
      }
  return d;
}

// {x : L_v x in W_v for all v}.
gf2::Subspace cut_out(std::size_t n, const std::vector<gf2::BitMatrix>& locs, const std::vector<gf2::Subspace>& ws) {
  gf2::BitMatrix constraints(0, n);
  for (std::size_t k = 0; k < locs.size(); ++k) {
    const gf2::Subspace ann = ws[k].annihilator();
    const gf2::BitMatrix lt = locs[k].transpose();
    for (std::size_t i = 0; i < ann.dim(); ++i) constraints.append_row(lt.apply(ann.basis().row(i)));
  }
  return gf2::kernel_basis(constraints);
}

SquareClass combine(const std::vector<SquareClass>& gens, const gf2::BitVector& x, std::size_t offset = 0) {
  SquareClass c;
  for (std::size_t j = 0; j < gens.size(); ++j)
    if (x.get(offset + j)) c = c * gens[j];
  return c;
}

u64 mod_u64(const mpz_class& n, u64 p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), p);
  return mpz_get_ui(r.get_mpz_t());
}

void check_place(Place v) {
  if (!v.is_infinite() && !is_prime(v.p)) throw std::invalid_argument("place: not a prime");
}

}  // namespace

std::vector<LocalSquareClass> LocalConditionGroup::members() const {
  std::vector<LocalSquareClass> out;
  for (const auto& x : classes.elements()) out.push_back(LocalSquareClass::from_vec(place, x));
  return out;
}

gf2::BitVector SelmerGroup::coordinates(const SquareClass& c) const {
  gf2::BitVector x(generators.size());
  if (c.sign() < 0) x.set(0);
  for (u64 p : c.primes()) {
    std::size_t j = 1;
    while (j < generators.size() && generators[j].primes().front() != p) ++j;
    if (j == generators.size()) throw std::out_of_range("SelmerGroup: class not supported on S");
    x.set(j);
  }
  return x;
}

bool SelmerGroup::contains(const SquareClass& c) const {
  if (kind != Kind::Phi) throw std::logic_error("SelmerGroup::contains: not a phi-Selmer group");
  try {
    return space.contains(coordinates(c));
  } catch (const std::out_of_range&) {
    return false;
  }
}

bool SelmerGroup::contains(const SquareClass& d1, const SquareClass& d2) const {
  if (kind != Kind::Two) throw std::logic_error("SelmerGroup::contains: not a 2-Selmer group");
  try {
    const auto x1 = coordinates(d1), x2 = coordinates(d2);
    const std::size_t n = generators.size();
    gf2::BitVector x(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      if (x1.get(j)) x.set(j);
      if (x2.get(j)) x.set(n + j);
    }
    return space.contains(x);
  } catch (const std::out_of_range&) {
    return false;
  }
}

IsogenyDescent::IsogenyDescent(TwoIsogeny phi) : phi_(std::move(phi)) {
  bad_ = phi_.kernel_model.bad_primes();
  const mpz_class& a0 = phi_.target.A;
  const mpz_class& b0 = phi_.target.B;
  std::vector<Place> places{Place::infinity()};
  for (u64 p : bad_) places.push_back(Place{p});
  for (const Place v : places) {
    std::vector<gf2::Subspace> per_class;
    for (unsigned bits = 0; bits < (1u << v.local_dim()); ++bits) {
      const mpz_class delta = LocalSquareClass{v, bits}.representative();
      per_class.push_back(quartic_local_image(delta * a0, delta * delta * b0, v));
    }
    cache_[v.p] = std::move(per_class);
  }
}

bool IsogenyDescent::is_bad(u64 p) const { return std::binary_search(bad_.begin(), bad_.end(), p); }

LocalConditionGroup IsogenyDescent::local_condition(const SquareClass& d, Place v) const {
  check_place(v);
  if (v.is_infinite() || is_bad(v.p)) return {v, cache_.at(v.p)[localize(d, v).bits]};
  const u64 p = v.p;
  if (!d.divisible_by(p)) {
    // Good reduction: the unramified classes.
    return {v, gf2::Subspace::span(2, {gf2::BitVector::from_mask(2, 2u)})};
  }
  // p | d, p good: E0^d has type I0* at p, so W_p is spanned by the images of E0^d(Q_p)[2].
  const mpz_class& a0 = phi_.target.A;
  const mpz_class& b0 = phi_.target.B;
  std::vector<gf2::BitVector> gens{localize(b0, v).vec()};
  const u64 disc = mod_u64(mpz_class(a0 * a0 - 4 * b0), p);
  if (auto s = sqrt_mod(disc, p)) {
    // Root rho of y^2 + a0 y + b0 mod p; the 2-torsion x-coordinate on E0^d is d*rho.
    const u64 inv2 = (p + 1) / 2;
    const u64 rho = static_cast<u64>((static_cast<unsigned __int128>((p - mod_u64(a0, p) + *s) % p) * inv2) % p);
    const u64 dp = mod_u64(mpz_class(d.representative() / static_cast<unsigned long>(p)), p);
    const u64 unit = static_cast<u64>((static_cast<unsigned __int128>(dp) * rho) % p);
    unsigned bits = 1u;
    if (legendre(static_cast<i64>(unit), p) == -1) bits |= 2u;
    gens.push_back(gf2::BitVector::from_mask(2, bits));
  }
  return {v, gf2::Subspace::span(2, gens)};
}

std::vector<Place> IsogenyDescent::relevant_places(const SquareClass& d) const {
  std::set<u64> ps(bad_.begin(), bad_.end());
  ps.insert(d.primes().begin(), d.primes().end());
  std::vector<Place> out{Place::infinity()};
  for (u64 p : ps) out.push_back(Place{p});
  return out;
}

SelmerGroup IsogenyDescent::selmer(const SquareClass& d) const {
  const SUnits s = s_units(bad_, d);
  std::vector<gf2::BitMatrix> locs;
  std::vector<gf2::Subspace> ws;
  for (const Place v : s.places) {
    locs.push_back(local_matrix(s.gens, v));
    ws.push_back(local_condition(d, v).classes);
  }
  SelmerGroup g;
  g.kind = SelmerGroup::Kind::Phi;
  g.generators = s.gens;
  g.support = s.places;
  g.space = cut_out(s.gens.size(), locs, ws);
  g.dim = g.space.dim();
  for (std::size_t i = 0; i < g.dim; ++i) g.basis.push_back(combine(s.gens, g.space.basis().row(i)));
  return g;
}

TamagawaData IsogenyDescent::tamagawa(const SquareClass& d) const {
  TamagawaData t;
  t.isogeny = phi_;
  t.d = d;
  for (const Place v : relevant_places(d)) {
    const std::size_t k = local_condition(d, v).classes.dim();
    t.local_dims[v] = k;
    t.u += static_cast<int>(k) - 1;
  }
  return t;
}

std::vector<SquareClass> IsogenyDescent::torsion_image(const SquareClass& d) const {
  std::vector<SquareClass> out{squarefree_kernel(phi_.target.B)};
  if (phi_.target.roots)
    for (std::size_t i = 1; i < 3; ++i) out.push_back(squarefree_kernel((*phi_.target.roots)[i]) * d);
  return out;
}

TwoDescent::TwoDescent(CurveModel E) : E_(std::move(E)) {
  if (!E_.roots) throw std::invalid_argument("two-descent needs full rational 2-torsion");
  bad_ = E_.bad_primes();
  std::vector<Place> places{Place::infinity()};
  for (u64 p : bad_) places.push_back(Place{p});
  for (const Place v : places) {
    std::vector<gf2::Subspace> per_class;
    for (unsigned bits = 0; bits < (1u << v.local_dim()); ++bits) {
      const mpz_class delta = LocalSquareClass{v, bits}.representative();
      const auto& r = *E_.roots;
      per_class.push_back(two_descent_local_image({delta * r[0], delta * r[1], delta * r[2]}, v));
    }
    cache_[v.p] = std::move(per_class);
  }
}

gf2::Subspace TwoDescent::local_image(const SquareClass& d, Place v) const {
  check_place(v);
  if (v.is_infinite() || std::binary_search(bad_.begin(), bad_.end(), v.p))
    return cache_.at(v.p)[localize(d, v).bits];
  if (d.divisible_by(v.p)) {
    // Torsion images already span the image here; no point search happens.
    const mpz_class dd = d.representative();
    const auto& r = *E_.roots;
    return two_descent_local_image({dd * r[0], dd * r[1], dd * r[2]}, v);
  }
  return gf2::Subspace::span(4, {gf2::BitVector::from_mask(4, 2u), gf2::BitVector::from_mask(4, 8u)});
}

SelmerGroup TwoDescent::selmer(const SquareClass& d) const {
  const SUnits s = s_units(bad_, d);
  std::vector<gf2::BitMatrix> locs;
  std::vector<gf2::Subspace> ws;
  for (const Place v : s.places) {
    locs.push_back(doubled(local_matrix(s.gens, v)));
    ws.push_back(local_image(d, v));
  }
  SelmerGroup g;
  g.kind = SelmerGroup::Kind::Two;
  g.generators = s.gens;
  g.support = s.places;
  g.space = cut_out(2 * s.gens.size(), locs, ws);
  g.dim = g.space.dim();
  const std::size_t n = s.gens.size();
  for (std::size_t i = 0; i < g.dim; ++i)
    g.pair_basis.emplace_back(combine(s.gens, g.space.basis().row(i), 0), combine(s.gens, g.space.basis().row(i), n));
  return g;
}

std::vector<std::pair<SquareClass, SquareClass>> TwoDescent::torsion_image(const SquareClass& d) const {
  const auto& e = *E_.roots;
  auto k = [&](const mpz_class& x) { return squarefree_kernel(x); };
  return {{k(mpz_class((e[0] - e[1]) * (e[0] - e[2]))), k(mpz_class(e[0] - e[1])) * d},
          {k(mpz_class(e[1] - e[0])) * d, k(mpz_class((e[1] - e[0]) * (e[1] - e[2])))},
          {k(mpz_class(e[2] - e[0])) * d, k(mpz_class(e[2] - e[1])) * d}};
}

LocalConditionGroup local_condition(const TwoIsogeny& phi, const SquareClass& d, Place v) {
  return IsogenyDescent(phi).local_condition(d, v);
}

SelmerGroup phi_selmer(const TwoIsogeny& phi, const SquareClass& d) { return IsogenyDescent(phi).selmer(d); }

SelmerGroup two_selmer(const CurveModel& E, const SquareClass& d) { return TwoDescent(E).selmer(d); }

TamagawaData tamagawa_u(const TwoIsogeny& phi, const SquareClass& d) { return IsogenyDescent(phi).tamagawa(d); }

bool has_halvable_two_torsion(const CurveModel& E) {
  for (const auto& x : E.two_torsion_x()) {
    const CurveModel T = translate(E, x);
    // (0,0) = 2P iff B = t^2 and A + 2t or A - 2t is a nonzero square.
    if (!is_square(T.B)) continue;
    const mpz_class t = sqrt(T.B);
    if (is_square(mpz_class(T.A + 2 * t)) || is_square(mpz_class(T.A - 2 * t))) return true;
  }
  return false;
}

RPhi r_phi(const TwoIsogeny& phi, const SquareClass& d) {
  const IsogenyDescent D(phi);
  const SelmerGroup s = D.selmer(d);
  gf2::Subspace tors(s.generators.size());
  for (const auto& c : D.torsion_image(d)) tors.add(s.coordinates(c));
  RPhi out;
  out.r = static_cast<long>(s.dim) - static_cast<long>(tors.dim());
  out.degenerate =
      has_halvable_two_torsion(twist(phi.kernel_model, d)) || has_halvable_two_torsion(twist(phi.target, d));
  return out;
}

CaseVDescent::CaseVDescent(const CurveModel& E)
    : E_(E),
      phi1_([&] {
        const auto label = classify_case(E);
        if (label.kind != Case::V) throw std::invalid_argument("Case V descent: curve is not in Case V");
        return label.balanced[0];
      }()),
      phi1d_(phi1_.isogeny().dual()),
      phi2_(classify_case(E).balanced[1]),
      phi2d_(phi2_.isogeny().dual()),
      two_(phi1_.isogeny().kernel_model) {
  V_.push_back(Place::infinity());
  for (u64 p : E.bad_primes()) V_.push_back(Place{p});
}

LocalizationImage CaseVDescent::localization_image(const SquareClass& d) const {
  LocalizationImage out;
  const SelmerGroup s1d = phi1d_.selmer(d);
  const SelmerGroup s2 = phi2_.selmer(d);
  out.containment_ok = true;
  std::vector<gf2::QuotientMap> quot;
  for (const Place v : V_) {
    const auto w1 = phi1d_.local_condition(d, v).classes;
    const auto w2 = phi2_.local_condition(d, v).classes;
    if (!w2.is_subspace_of(w1)) {
      out.containment_ok = false;
      continue;
    }
    quot.emplace_back(w1, w2);
    out.per_place_quotients.emplace_back(v, quot.back().dim());
    out.ambient_dim += quot.back().dim();
  }
  // Outside the bad set the two local conditions must coincide.
  for (u64 p : d.primes()) {
    if (phi1d_.is_bad(p)) continue;
    if (!(phi1d_.local_condition(d, Place{p}).classes == phi2_.local_condition(d, Place{p}).classes))
      out.containment_ok = false;
  }
  if (!out.containment_ok) return out;

  gf2::BitMatrix loc(out.ambient_dim, s1d.dim);
  for (std::size_t j = 0; j < s1d.dim; ++j) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < V_.size(); ++k) {
      const auto q = quot[k].apply(localize(s1d.basis[j], V_[k]).vec());
      for (std::size_t i = 0; i < q.size(); ++i)
        if (q.get(i)) loc.set(off + i, j);
      off += q.size();
    }
  }
  out.image = gf2::image(loc);
  out.kernel_dim = s1d.dim - out.image.dim();
  bool sub = true;
  for (const auto& c : s2.basis) sub = sub && s1d.contains(c);
  out.kernel_matches = sub && out.kernel_dim == s2.dim;
  return out;
}

CaseVRecord CaseVDescent::rank_identity_check(const SquareClass& d) const {
  CaseVRecord r;
  r.dim_sel_phi1 = phi1_.selmer(d).dim;
  r.dim_sel_phi1_dual = phi1d_.selmer(d).dim;
  r.dim_sel_phi2 = phi2_.selmer(d).dim;
  r.dim_sel_phi2_dual = phi2d_.selmer(d).dim;
  r.dim_sel2 = two_.selmer(d).dim;
  r.r_phi1 = static_cast<long>(r.dim_sel_phi1) - 1;
  r.r_phi1_dual = static_cast<long>(r.dim_sel_phi1_dual) - 1;
  r.r2 = static_cast<long>(r.dim_sel2) - 2;
  r.u1 = phi1_.tamagawa(d).u;
  r.u2 = phi2_.tamagawa(d).u;
  r.u0 = -r.u1 - r.u2;
  r.defect = r.r_phi1 + r.r_phi1_dual - r.r2;
  const LocalizationImage loc = localization_image(d);
  r.loc_image_dim = loc.image.dim();
  r.L_dim = loc.ambient_dim;
  r.loc_kernel_matches = loc.kernel_matches;
  r.loc_containment_ok = loc.containment_ok;
  r.degenerate = has_halvable_two_torsion(twist(E_, d)) ||
                 has_halvable_two_torsion(twist(phi1_.isogeny().target, d)) ||
                 has_halvable_two_torsion(twist(phi2_.isogeny().target, d));
  r.ok = r.defect % 2 == 0 && r.defect >= 0 && r.defect <= static_cast<long>(r.L_dim);
  return r;
}

LocalizationImage localization_image(const CurveModel& E, const SquareClass& d, const SquareClass& d0) {
  const CaseVDescent D(E);
  std::vector<Place> V{Place::infinity()};
  for (u64 p : E.bad_primes()) V.push_back(Place{p});
  for (const Place v : V)
    if (!(localize(d, v) == localize(d0, v))) throw std::invalid_argument("localization_image: d is not in the class of d0");
  return D.localization_image(d);
}

CaseVRecord case_V_rank_identity_check(const CurveModel& E, const SquareClass& d) {
  return CaseVDescent(E).rank_identity_check(d);
}

}  // namespace twistsel
