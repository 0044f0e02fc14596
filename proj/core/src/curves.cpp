#include "twistsel/curves.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace twistsel {

namespace {

bool is_square(const mpz_class& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()); }

// Is the rational q a k-th power of a rational (k = 4 or 6, so q must be positive)?
bool is_rational_power(const mpq_class& q, unsigned k) {
  if (q <= 0) return false;
  return mpz_root(mpz_class().get_mpz_t(), q.get_num().get_mpz_t(), k) != 0 &&
         mpz_root(mpz_class().get_mpz_t(), q.get_den().get_mpz_t(), k) != 0;
}

void check_nonsingular(const mpz_class& A, const mpz_class& B) {
  if (B == 0 || A * A - 4 * B == 0) throw std::invalid_argument("curve model is singular: B(A^2-4B) = 0");
}

}  // namespace

CurveModel::CurveModel(mpz_class a, mpz_class b) : A(std::move(a)), B(std::move(b)) {
  check_nonsingular(A, B);
  const mpz_class D = disc_factor();
  if (is_square(D)) {
    const mpz_class s = sqrt(D);
    roots = std::array<mpz_class, 3>{mpz_class(0), mpz_class((-A + s) / 2), mpz_class((-A - s) / 2)};
  }
}

CurveModel CurveModel::from_roots(const mpz_class& r, const mpz_class& s) {
  if (r == 0 || s == 0 || r == s) throw std::invalid_argument("roots: expected distinct nonzero r, s");
  CurveModel E(-(r + s), r * s);
  E.roots = std::array<mpz_class, 3>{mpz_class(0), r, s};
  return E;
}

std::vector<mpz_class> CurveModel::two_torsion_x() const {
  if (roots) return {(*roots)[0], (*roots)[1], (*roots)[2]};
  return {mpz_class(0)};
}

std::vector<u64> CurveModel::bad_primes() const {
  std::set<u64> ps{2};
  for (u64 p : prime_divisors(B)) ps.insert(p);
  for (u64 p : prime_divisors(disc_factor())) ps.insert(p);
  return {ps.begin(), ps.end()};
}

std::string CurveModel::to_string() const { return A.get_str() + " " + B.get_str(); }

std::optional<CurveModel> CubicModel::two_torsion_model() const {
  // Rational roots of a monic integer cubic are integers dividing a6.
  std::vector<mpz_class> cands;
  if (a6 == 0) {
    cands.push_back(0);
  } else {
    const auto ps = prime_divisors(a6);
    std::vector<mpz_class> divs{1};
    for (u64 p : ps) {
      mpz_class t = a6;
      const unsigned long e = valuation(t, p);
      const std::size_t n = divs.size();
      mpz_class pk = 1;
      for (unsigned long i = 1; i <= e; ++i) {
        pk *= static_cast<unsigned long>(p);
        for (std::size_t j = 0; j < n; ++j) divs.push_back(divs[j] * pk);
      }
    }
    for (const auto& d : divs) {
      cands.push_back(d);
      cands.push_back(-d);
    }
  }
  std::sort(cands.begin(), cands.end());
  for (const auto& e : cands) {
    if (((e + a2) * e + a4) * e + a6 != 0) continue;
    return CurveModel(3 * e + a2, 3 * e * e + 2 * a2 * e + a4);
  }
  return std::nullopt;
}

CurveModel twist(const CurveModel& E, const mpz_class& d) {
  if (d == 0) throw std::invalid_argument("twist: zero");
  CurveModel T(d * E.A, d * d * E.B);
  if (E.roots) T.roots = std::array<mpz_class, 3>{mpz_class(0), d * (*E.roots)[1], d * (*E.roots)[2]};
  return T;
}

CurveModel twist(const CurveModel& E, const SquareClass& d) { return twist(E, d.representative()); }

SquareClass two_torsion_field(const CurveModel& E) { return squarefree_kernel(E.disc_factor()); }

CurveModel translate(const CurveModel& E, const mpz_class& e) {
  if (e == 0) return E;
  if (e * e + E.A * e + E.B != 0)
    throw std::invalid_argument("translate: x is not a 2-torsion x-coordinate");
  CurveModel T(3 * e + E.A, 3 * e * e + 2 * E.A * e + E.B);
  if (E.roots) {
    std::array<mpz_class, 3> r{mpz_class(0), mpz_class(0), mpz_class(0)};
    std::size_t k = 1;
    for (const auto& x : *E.roots)
      if (x != e) r[k++] = x - e;
    T.roots = r;
  }
  return T;
}

CurveModel reduce_model(const CurveModel& E) {
  mpz_class l = 1;
  for (u64 p : prime_divisors(E.B)) {
    const unsigned long vb = valuation(E.B, p) / 4;
    const unsigned long va = E.A == 0 ? vb : valuation(E.A, p) / 2;
    for (unsigned long i = 0; i < std::min(va, vb); ++i) l *= static_cast<unsigned long>(p);
  }
  if (l == 1) return E;
  const mpz_class l2 = l * l;
  CurveModel R(E.A / l2, E.B / (l2 * l2));
  if (E.roots) R.roots = std::array<mpz_class, 3>{mpz_class(0), (*E.roots)[1] / l2, (*E.roots)[2] / l2};
  return R;
}

std::pair<mpz_class, mpz_class> c4_c6(const CurveModel& E) {
  return {16 * (E.A * E.A - 3 * E.B), -32 * E.A * (2 * E.A * E.A - 9 * E.B)};
}

bool isomorphic(const CurveModel& E1, const CurveModel& E2) {
  const auto [c4, c6] = c4_c6(E1);
  const auto [d4, d6] = c4_c6(E2);
  // E2 = E1 scaled by u: d4 = u^4 c4, d6 = u^6 c6.
  if ((c4 == 0) != (d4 == 0) || (c6 == 0) != (d6 == 0)) return false;
  if (c4 == 0 || c6 == 0) {
    // j = 0 or 1728: only one invariant constrains u.
    mpq_class q = c4 == 0 ? mpq_class(d6, c6) : mpq_class(d4, c4);
    q.canonicalize();
    return is_rational_power(q, c4 == 0 ? 6 : 4);
  }
  if (d4 * d4 * d4 * c6 * c6 != c4 * c4 * c4 * d6 * d6) return false;
  mpq_class u2(d6 * c4, c6 * d4);
  u2.canonicalize();
  return u2 > 0 && is_square(u2.get_num()) && is_square(u2.get_den());
}

TwoIsogeny TwoIsogeny::dual() const {
  TwoIsogeny d;
  d.source = target;
  d.kernel_x = 0;
  d.kernel_model = target;
  d.target = kernel_model;
  d.balanced = balanced;
  return d;
}

TwoIsogeny make_isogeny(const CurveModel& E, const mpz_class& kernel_x) {
  TwoIsogeny phi;
  phi.source = E;
  phi.kernel_x = kernel_x;
  phi.kernel_model = translate(E, kernel_x);
  const mpz_class& a = phi.kernel_model.A;
  const mpz_class& b = phi.kernel_model.B;
  phi.target = CurveModel(-2 * a, a * a - 4 * b);
  // Same squarefree kernel iff the product is a square.
  phi.balanced = is_square(mpz_class(b * (a * a - 4 * b)));
  return phi;
}

std::vector<TwoIsogeny> enumerate_two_isogenies(const CurveModel& E) {
  std::vector<TwoIsogeny> out;
  for (const auto& x : E.two_torsion_x()) out.push_back(make_isogeny(E, x));
  return out;
}

std::string to_string(Case c) {
  switch (c) {
    case Case::I: return "I";
    case Case::II: return "II";
    case Case::III: return "III";
    case Case::IV: return "IV";
    case Case::V: return "V";
  }
  return "?";
}

CaseLabel classify_case(const CurveModel& E) {
  CaseLabel label;
  const auto isos = enumerate_two_isogenies(E);
  for (const auto& phi : isos)
    if (phi.balanced) label.balanced.push_back(phi);
  if (label.balanced.size() > 2) throw std::logic_error("classify_case: three balanced isogenies is impossible");
  if (label.balanced.size() == 2) {
    label.kind = Case::V;
  } else if (label.balanced.size() == 1) {
    label.kind = Case::IV;
    label.two_vertex_case_iv = !E.full_two_torsion();
  } else if (E.full_two_torsion()) {
    label.kind = Case::I;
  } else {
    label.kind = isos.front().target.full_two_torsion() ? Case::III : Case::II;
  }
  return label;
}

std::vector<std::size_t> IsogenyGraph::degrees() const {
  std::vector<std::size_t> deg(vertices.size(), 0);
  for (const auto& [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

IsogenyGraph single_vertex_graph() { return IsogenyGraph{}; }

IsogenyGraph build_isogeny_graph(const CurveModel& E) {
  IsogenyGraph g;
  g.vertices.push_back(reduce_model(E));
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const CurveModel cur = g.vertices[i];
    for (const auto& phi : enumerate_two_isogenies(cur)) {
      const CurveModel t = reduce_model(phi.target);
      std::size_t j = 0;
      while (j < g.vertices.size() && !isomorphic(g.vertices[j], t)) ++j;
      if (j == g.vertices.size()) {
        g.vertices.push_back(t);
        if (g.vertices.size() > 8) throw std::logic_error("isogeny graph exceeds 8 vertices");
      }
      if (j == i) throw std::logic_error("isogeny graph: 2-isogeny onto an isomorphic curve");
      edges.insert({std::min(i, j), std::max(i, j)});
    }
  }
  g.edges.assign(edges.begin(), edges.end());
  const auto deg = g.degrees();
  const auto n3 = static_cast<std::size_t>(std::count(deg.begin(), deg.end(), 3));
  const std::size_t n = g.vertices.size();
  if (n == 2 && n3 == 0)
    g.shape = GraphShape::Path2;
  else if (n == 4 && n3 == 1)
    g.shape = GraphShape::Star4;
  else if (n == 6 && n3 == 2)
    g.shape = GraphShape::Six;
  else if (n == 8 && n3 == 3)
    g.shape = GraphShape::Eight;
  else
    throw std::logic_error("isogeny graph has an unexpected shape");
  if (g.edges.size() + 1 != n) throw std::logic_error("isogeny graph is not a tree");
  return g;
}

CurveInput parse_curve(const std::string& text) {
  CurveInput in;
  in.text = text;
  std::string body = text;
  std::string tag;
  if (const auto colon = body.find(':'); colon != std::string::npos) {
    tag = body.substr(0, colon);
    body = body.substr(colon + 1);
    tag.erase(std::remove_if(tag.begin(), tag.end(), [](unsigned char c) { return std::isspace(c); }), tag.end());
  }
  // Accept the unicode minus sign as well as '-'.
  for (std::size_t pos; (pos = body.find("\xe2\x88\x92")) != std::string::npos;) body.replace(pos, 3, "-");
  std::istringstream is(body);
  std::vector<mpz_class> nums;
  std::string tok;
  while (is >> tok) {
    mpz_class z;
    if (z.set_str(tok, 10) != 0) throw std::invalid_argument("curve: not an integer: " + tok);
    nums.push_back(z);
  }
  if (tag.empty()) {
    if (nums.size() != 2) throw std::invalid_argument("curve: expected 'A B'");
    in.model = CurveModel(nums[0], nums[1]);
  } else if (tag == "roots") {
    if (nums.size() != 2) throw std::invalid_argument("curve: expected 'roots: r s'");
    in.model = CurveModel::from_roots(nums[0], nums[1]);
  } else if (tag == "cubic") {
    if (nums.size() != 3) throw std::invalid_argument("curve: expected 'cubic: a2 a4 a6'");
    in.cubic = CubicModel{nums[0], nums[1], nums[2]};
    const mpz_class& a = nums[0];
    const mpz_class& b = nums[1];
    const mpz_class& c = nums[2];
    const mpz_class disc = a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
    if (disc == 0) throw std::invalid_argument("curve: singular cubic");
    in.model = in.cubic->two_torsion_model();
  } else {
    throw std::invalid_argument("curve: unknown form '" + tag + "'");
  }
  return in;
}

}  // namespace twistsel
