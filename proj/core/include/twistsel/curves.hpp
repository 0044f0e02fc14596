#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "twistsel/arith.hpp"

namespace twistsel {

// y^2 = x^3 + A x^2 + B x.
struct CurveModel {
  mpz_class A;
  mpz_class B;
  // (0, r, s) when x^2 + A x + B splits over Q.
  std::optional<std::array<mpz_class, 3>> roots;

  CurveModel() = default;
  CurveModel(mpz_class a, mpz_class b);
  static CurveModel from_roots(const mpz_class& r, const mpz_class& s);

  mpz_class disc_factor() const { return A * A - 4 * B; }  // A^2 - 4B
  bool full_two_torsion() const { return roots.has_value(); }
  // x-coordinates of the rational 2-torsion points (0 first).
  std::vector<mpz_class> two_torsion_x() const;
  // Primes of 2 B (A^2 - 4B).
  std::vector<u64> bad_primes() const;
  std::string to_string() const;
  bool operator==(const CurveModel& o) const { return A == o.A && B == o.B; }
};

// y^2 = x^3 + a2 x^2 + a4 x + a6, used to accept curves that may lack rational 2-torsion.
struct CubicModel {
  mpz_class a2, a4, a6;
  // Translate a rational 2-torsion point to the origin, if there is one.
  std::optional<CurveModel> two_torsion_model() const;
};

CurveModel twist(const CurveModel& E, const SquareClass& d);
CurveModel twist(const CurveModel& E, const mpz_class& d);
SquareClass two_torsion_field(const CurveModel& E);
// Substitute x -> x + e, where (e, 0) is a 2-torsion point.
CurveModel translate(const CurveModel& E, const mpz_class& e);
// Divide (A, B) by (l^2, l^4) for the largest such l.
CurveModel reduce_model(const CurveModel& E);
std::pair<mpz_class, mpz_class> c4_c6(const CurveModel& E);
bool isomorphic(const CurveModel& E1, const CurveModel& E2);

struct TwoIsogeny {
  CurveModel source;
  mpz_class kernel_x;
  CurveModel kernel_model;  // source translated so the kernel point is (0,0)
  CurveModel target;        // (-2A', A'^2 - 4B')
  bool balanced = false;

  // Dual isogeny target -> source; its target is kernel_model (isomorphic to source).
  TwoIsogeny dual() const;
};

TwoIsogeny make_isogeny(const CurveModel& E, const mpz_class& kernel_x);
std::vector<TwoIsogeny> enumerate_two_isogenies(const CurveModel& E);

enum class Case { I, II, III, IV, V };
std::string to_string(Case c);

struct CaseLabel {
  Case kind = Case::I;
  std::vector<TwoIsogeny> balanced;
  // Case IV with E(Q)[2] = Z/2: the balanced isogeny is the only edge (two-vertex graph).
  bool two_vertex_case_iv = false;
};

CaseLabel classify_case(const CurveModel& E);

// Shapes of rational 2-isogeny graphs, numbered 1..5 by vertex count 1, 2, 4, 6, 8.
enum class GraphShape { Single = 1, Path2 = 2, Star4 = 3, Six = 4, Eight = 5 };

struct IsogenyGraph {
  std::vector<CurveModel> vertices;  // reduced models; vertices[0] is the input curve
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> degrees() const;
  GraphShape shape = GraphShape::Single;
};

IsogenyGraph build_isogeny_graph(const CurveModel& E);
IsogenyGraph single_vertex_graph();

// Text input: "A B", "roots: r s" or "cubic: a2 a4 a6".
struct CurveInput {
  std::optional<CurveModel> model;  // empty for a cubic with no rational root
  std::optional<CubicModel> cubic;
  std::string text;
};
CurveInput parse_curve(const std::string& text);

}  // namespace twistsel
