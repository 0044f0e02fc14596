#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twistsel/gf2.hpp"

namespace twistsel::galmod {

// 2x2 matrix over F2 acting on column vectors; bit (2 r + c) holds entry (r, c).
struct Mat2 {
  std::uint8_t bits = 0;

  static Mat2 from(int a, int b, int c, int d) {
    return Mat2{static_cast<std::uint8_t>((a & 1) | (b & 1) << 1 | (c & 1) << 2 | (d & 1) << 3)};
  }
  int at(int r, int c) const { return (bits >> (2 * r + c)) & 1; }
  Mat2 operator+(Mat2 o) const { return Mat2{static_cast<std::uint8_t>(bits ^ o.bits)}; }
  Mat2 operator*(Mat2 o) const;
  bool operator==(const Mat2&) const = default;
  auto operator<=>(const Mat2&) const = default;
  std::string to_string() const;
};

inline const Mat2 kZero = Mat2::from(0, 0, 0, 0);
inline const Mat2 kId = Mat2::from(1, 0, 0, 1);
inline const Mat2 kAlpha = Mat2::from(0, 1, 0, 0);
inline const Mat2 kBeta = Mat2::from(1, 0, 0, 0);

struct MatRingF2 {
  std::vector<Mat2> elements;  // sorted
  bool contains(Mat2 m) const;
  std::size_t size() const { return elements.size(); }
};

// Closure of gens ∪ {Id} under + and x.
MatRingF2 ring_generated(const std::vector<Mat2>& gens);
MatRingF2 ring_IV();
MatRingF2 ring_V();

// Factors: the line <e1>, the line <e2>, the full plane.
enum class Factor { Line1, Line2, Plane };

// Direct sum of factors as a bit-vector space, coordinates laid out factor by factor.
struct RModule {
  std::vector<Factor> factors;
  std::size_t dim() const;
  std::vector<std::size_t> offsets() const;
  // Action of r on the whole module; r must preserve the lines that occur.
  gf2::BitMatrix action(Mat2 r) const;
  bool is_submodule(const gf2::Subspace& T, const MatRingF2& R) const;
};

struct VerifyReport {
  std::string proposition;
  std::vector<long> parameters;
  bool verified = false;
  std::size_t subspaces_checked = 0;
  std::size_t hypotheses_met = 0;  // R-closed subspaces satisfying the surjectivity hypotheses
  std::optional<gf2::Subspace> counterexample;
};

// Max ambient dimension handled by the enumerations.
inline constexpr std::size_t kMaxAmbient = 6;

// M = E[phi]^a ⊕ E[2]^b with E[phi] = <e1>; hypotheses: T -> E[phi]^a onto,
// and T -> E[2]^b -> (E[2]/E[phi])^b onto.
VerifyReport verify_prop_IV_cofavored(long a, long b);
// M = E[phi1]^a ⊕ E[phi2]^b ⊕ E[2]^c with E[phi1] = <e1>, E[phi2] = <e2>; hypotheses:
// T -> (x-coordinates of the E[phi1] and E[2] parts) onto, T -> (y-coordinates of the E[phi2] and E[2] parts) onto.
VerifyReport verify_prop_V_cofavored(long a, long b, long c);

struct HomReport {
  // E[2]->E[2], E[2]->E[2]/E[phi], E[phi]->E[2], E[phi]->E[2]/E[phi]
  std::array<std::size_t, 4> nonzero_counts{};
  std::array<std::vector<gf2::BitMatrix>, 4> maps;
};

HomReport classify_equivariant_homs();

// Linear maps Gamma (rows = target dim) with act_t(g) Gamma = Gamma act_s(g) for all generators.
std::vector<gf2::BitMatrix> equivariant_maps(std::size_t src_dim, std::size_t dst_dim,
                                             const std::vector<gf2::BitMatrix>& src_action,
                                             const std::vector<gf2::BitMatrix>& dst_action);

}  // namespace twistsel::galmod
