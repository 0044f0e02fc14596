#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "twistsel/gf2.hpp"
#include "twistsel/rng.hpp"

namespace twistsel::randmodel {

using Real = long double;  // limit probabilities reach 2^-1700, below double range

struct RankDistribution {
  std::map<long, Real> probs;
  std::map<long, Real> errors;  // certified absolute error per entry (0 when exact)
  Real tail_bound = 0;          // mass beyond the largest listed rank
  std::size_t samples = 0;      // > 0 for empirical distributions
  Real total() const;
  Real at(long r) const;
};

struct JointDistribution {
  std::map<std::pair<long, long>, Real> probs;  // (r_phi, r2)
  Real tail_bound = 0;
  RankDistribution first() const;
  RankDistribution second() const;
};

struct Approx {
  Real value = 0;
  Real error = 0;
};

// Exact finite-size laws.
mpq_class p_mat_exact(long j, long m, long n);
mpq_class p_alt_exact(long j, long n);
mpq_class p_v_exact(long j, long n, long m);
std::vector<mpq_class> p_v_distribution(long n, long m);  // index j = 0..n

// lim_n P^Mat(j | (n-u) x n), by increasing n until the relative change is below tol/2.
Approx p_mat_limit(long j, long u, Real tol = 1e-15L);
// Product formula, used as a cross-check.
Real p_mat_limit_closed_form(long j, long u);
Real eta_infinity();  // prod_{i>=1} (1 - 2^-i)

Real to_real(const mpq_class& q);

// Monte-Carlo estimates; chunks use rng.split(chunk) so results do not depend on scheduling.
RankDistribution p_mat_monte_carlo(long m, long n, std::size_t samples, const Rng& rng);
RankDistribution p_alt_monte_carlo(long n, std::size_t samples, const Rng& rng);
RankDistribution p_v_monte_carlo(long n, long m, std::size_t samples, const Rng& rng);
// Kernel dimension of the pairing P0(Tv, Tw) with P0 the standard symplectic form on F2^m.
std::size_t pulled_back_kernel_dim(const gf2::BitMatrix& T);

// Category C: objects (V0 ⊆ V) with a = dim V0, b = dim V/V0.
struct ObjC {
  long a = 0;
  long b = 0;
};
mpz_class count_inj(long k, long n);  // injective linear maps F2^k -> F2^n
mpz_class count_inj_C(ObjC O, ObjC A);

// Category D: maps V -> L, up to isomorphism determined by (dim V, image).
struct ObjD {
  std::size_t dim = 0;
  gf2::Subspace image;
};
mpz_class count_inj_D(const ObjD& O, const ObjD& A);

struct MeasureC {
  std::map<std::pair<long, long>, Real> mass;  // (a, b)
  Real tail_bound = 0;
};
MeasureC measure_mu_IV(long u, long max_dim = 40);
Approx moment_mu_IV(long a, long b, long u);
Real moment_mu_IV_target(long a, long b, long u);

// P(image of a uniform map F2^c -> F2^L is exactly a given subspace of dimension l).
Real p_loc(long c, long l, long L);
Approx moment_mu_V(const ObjD& O, long u, long L_dim);
Real moment_mu_V_target(std::size_t d, long u, long L_dim);

JointDistribution case_IV_r2_model(long u, long max_rank = 40);
JointDistribution case_V_r2_model(long u1, long u0, long max_rank = 40);

// Least-squares slope of -log2 P(rank = r) against r^2 over r in [r_lo, r_hi], skipping zero mass.
double tail_exponent(const RankDistribution& dist, long r_lo, long r_hi);

// Marginal r_phi law lim P^Mat(. | (oo-u) x oo) as a distribution.
RankDistribution p_mat_limit_distribution(long u, long max_rank = 40);

}  // namespace twistsel::randmodel
