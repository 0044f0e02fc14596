#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "twistsel/arith.hpp"
#include "twistsel/curves.hpp"
#include "twistsel/gf2.hpp"

namespace twistsel {

struct LocalConditionGroup {
  Place place;
  gf2::Subspace classes;  // inside F2^{place.local_dim()}
  bool contains(const LocalSquareClass& c) const { return classes.contains(c.vec()); }
  std::vector<LocalSquareClass> members() const;
};

struct SelmerGroup {
  enum class Kind { Phi, Two };
  Kind kind = Kind::Phi;
  std::vector<SquareClass> basis;                             // Phi
  std::vector<std::pair<SquareClass, SquareClass>> pair_basis;  // Two
  std::size_t dim = 0;
  std::vector<Place> support;  // infinity, then primes of S

  // Global coordinates: generators of the S-unit square classes (-1, then primes of S).
  std::vector<SquareClass> generators;
  // Phi: subspace of F2^n; Two: subspace of F2^{2n}, first block for d1.
  gf2::Subspace space;

  gf2::BitVector coordinates(const SquareClass& c) const;
  bool contains(const SquareClass& c) const;
  bool contains(const SquareClass& d1, const SquareClass& d2) const;
};

struct TamagawaData {
  TwoIsogeny isogeny;
  SquareClass d;
  std::map<Place, std::size_t> local_dims;
  int u = 0;
};

// Descent by one 2-isogeny phi: E -> E0 over the twist family E^d.
// W_v(phi, d) is the image of E0^d(Q_v) in Q_v^*/Q_v^*2 under the connecting map,
// i.e. the classes d1 for which N^2 = d1 M^4 + a0 d M^2 e^2 + (b0 d^2 / d1) e^4 is solvable,
// where (a0, b0) is the target model.
// Bad places are precomputed per local class of d, so instances are immutable after
// construction and safe to share across threads.
class IsogenyDescent {
 public:
  explicit IsogenyDescent(TwoIsogeny phi);

  const TwoIsogeny& isogeny() const { return phi_; }
  const std::vector<u64>& bad_primes() const { return bad_; }
  bool is_bad(u64 p) const;

  LocalConditionGroup local_condition(const SquareClass& d, Place v) const;
  // Places where W_v can differ from the unramified subgroup: infinity, 2, bad primes, primes of d.
  std::vector<Place> relevant_places(const SquareClass& d) const;
  SelmerGroup selmer(const SquareClass& d) const;
  TamagawaData tamagawa(const SquareClass& d) const;
  // Image of E0^d(Q)[2] in Q^*/Q^*2 (the kernel of Sel^phi -> H^1(E^d[2^oo])).
  std::vector<SquareClass> torsion_image(const SquareClass& d) const;

 private:
  TwoIsogeny phi_;
  std::vector<u64> bad_;
  std::map<u64, std::vector<gf2::Subspace>> cache_;  // place -> image per local class of d
};

// Complete 2-descent on E^d for E with rational 2-torsion; the pair map is (x - e1, x - e2)
// with (e1, e2, e3) = E.roots.
class TwoDescent {
 public:
  explicit TwoDescent(CurveModel E);
  const CurveModel& curve() const { return E_; }
  gf2::Subspace local_image(const SquareClass& d, Place v) const;
  SelmerGroup selmer(const SquareClass& d) const;
  std::vector<std::pair<SquareClass, SquareClass>> torsion_image(const SquareClass& d) const;

 private:
  CurveModel E_;
  std::vector<u64> bad_;
  std::map<u64, std::vector<gf2::Subspace>> cache_;
};

LocalConditionGroup local_condition(const TwoIsogeny& phi, const SquareClass& d, Place v);
SelmerGroup phi_selmer(const TwoIsogeny& phi, const SquareClass& d);
SelmerGroup two_selmer(const CurveModel& E, const SquareClass& d);
TamagawaData tamagawa_u(const TwoIsogeny& phi, const SquareClass& d);

// Is some rational 2-torsion point of E twice a rational point?
bool has_halvable_two_torsion(const CurveModel& E);

struct RPhi {
  long r = 0;
  bool degenerate = false;
};
// dim Sel^phi - dim(torsion image); flagged when torsion halves on E^d or E0^d.
RPhi r_phi(const TwoIsogeny& phi, const SquareClass& d);

struct LocalizationImage {
  std::size_t ambient_dim = 0;  // dim of the product of local quotients
  gf2::Subspace image;
  std::vector<std::pair<Place, std::size_t>> per_place_quotients;
  std::size_t kernel_dim = 0;        // dim of loc^{-1}(0) inside Sel^{phi1'}
  bool kernel_matches = false;       // kernel equals Sel^{phi2}
  bool containment_ok = false;       // W_v(phi2) inside W_v(phi1') at every place
};

struct CaseVRecord {
  std::size_t dim_sel_phi1 = 0, dim_sel_phi1_dual = 0, dim_sel_phi2 = 0, dim_sel_phi2_dual = 0, dim_sel2 = 0;
  long r_phi1 = 0, r_phi1_dual = 0, r2 = 0;
  int u1 = 0, u2 = 0, u0 = 0;
  long defect = 0;
  std::size_t loc_image_dim = 0;
  std::size_t L_dim = 0;
  bool loc_kernel_matches = false;
  bool loc_containment_ok = false;
  bool degenerate = false;
  bool ok = false;
};

// Precomputed descents for a Case V curve: phi1, phi2 balanced with kernels at e1, e2.
class CaseVDescent {
 public:
  explicit CaseVDescent(const CurveModel& E);
  const IsogenyDescent& phi1() const { return phi1_; }
  const IsogenyDescent& phi1_dual() const { return phi1d_; }
  const IsogenyDescent& phi2() const { return phi2_; }
  const IsogenyDescent& phi2_dual() const { return phi2d_; }
  const TwoDescent& two() const { return two_; }

  LocalizationImage localization_image(const SquareClass& d) const;
  CaseVRecord rank_identity_check(const SquareClass& d) const;

 private:
  CurveModel E_;
  IsogenyDescent phi1_, phi1d_, phi2_, phi2d_;
  TwoDescent two_;
  std::vector<Place> V_;
};

LocalizationImage localization_image(const CurveModel& E, const SquareClass& d, const SquareClass& d0);
CaseVRecord case_V_rank_identity_check(const CurveModel& E, const SquareClass& d);

}  // namespace twistsel
