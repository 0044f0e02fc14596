#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "twistsel/randmodel.hpp"

using namespace twistsel;
using namespace twistsel::randmodel;

namespace {

mpq_class freq(const std::map<int, std::uint64_t>& counts, int j) {
  std::uint64_t total = 0;
  for (auto& [k, c] : counts) total += c;
  auto it = counts.find(j);
  mpq_class q(mpz_class(it == counts.end() ? 0UL : it->second), mpz_class(total));
  q.canonicalize();
  return q;
}

}  // namespace

TEST(Exact, MatrixLawMatchesEnumeration) {
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n) {
      auto c = oracle::enumerate_mat(m, n);
      for (int j = 0; j <= n; ++j) EXPECT_EQ(p_mat_exact(j, m, n), freq(c, j)) << m << "x" << n << " j=" << j;
    }
}

TEST(Exact, AlternatingLawMatchesEnumeration) {
  for (int n = 1; n <= 5; ++n) {
    auto c = oracle::enumerate_alt(n);
    for (int j = 0; j <= n; ++j) EXPECT_EQ(p_alt_exact(j, n), freq(c, j)) << n << " j=" << j;
  }
}

TEST(Exact, PulledBackLawMatchesEnumeration) {
  for (auto [n, m] : {std::pair{1, 2}, {2, 2}, {3, 2}, {2, 4}, {3, 4}, {4, 2}}) {
    auto c = oracle::enumerate_pulled_back(n, m);
    auto dist = p_v_distribution(n, m);
    for (int j = 0; j <= n; ++j) {
      EXPECT_EQ(p_v_exact(j, n, m), freq(c, j)) << n << "," << m << " j=" << j;
      EXPECT_EQ(dist[j], freq(c, j));
    }
  }
  EXPECT_EQ(p_v_exact(0, 2, 2), mpq_class(3, 8));
  EXPECT_THROW(p_v_exact(0, 2, 3), std::exception);  // odd symplectic dimension
}

TEST(Exact, LawsSumToOne) {
  for (long n = 1; n <= 8; ++n) {
    mpq_class mat = 0, alt = 0;
    for (long j = 0; j <= n; ++j) {
      mat += p_mat_exact(j, n + 2, n);
      alt += p_alt_exact(j, n);
    }
    EXPECT_EQ(mat, 1);
    EXPECT_EQ(alt, 1);
  }
}

TEST(Limit, ClosedFormAgrees) {
  for (long u = -3; u <= 3; ++u)
    for (long j = std::max(0L, u); j <= std::max(0L, u) + 5; ++j) {
      auto lim = p_mat_limit(j, u);
      Real cf = p_mat_limit_closed_form(j, u);
      EXPECT_NEAR(static_cast<double>(lim.value), static_cast<double>(cf), 1e-13 * static_cast<double>(cf) + 1e-300)
          << "j=" << j << " u=" << u;
    }
  EXPECT_NEAR(static_cast<double>(p_mat_limit(0, 0).value), 0.288788095086602, 1e-12);
  EXPECT_NEAR(static_cast<double>(eta_infinity()), 0.288788095086602, 1e-12);
  // support: kernel dim is at least u
  EXPECT_EQ(p_mat_limit(1, 2).value, 0);
}

TEST(Limit, DistributionMass) {
  for (long u = -2; u <= 2; ++u) {
    auto d = p_mat_limit_distribution(u);
    EXPECT_NEAR(static_cast<double>(d.total()), 1.0, 1e-12);
  }
}

TEST(MonteCarlo, DeterministicAndClose) {
  Rng rng(12345);
  auto a = p_mat_monte_carlo(4, 4, 20000, rng);
  auto b = p_mat_monte_carlo(4, 4, 20000, rng);
  EXPECT_EQ(a.probs, b.probs);
  for (long j = 0; j <= 4; ++j) EXPECT_NEAR(static_cast<double>(a.at(j)), to_real(p_mat_exact(j, 4, 4)), 0.015);
  auto alt = p_alt_monte_carlo(5, 20000, rng);
  for (long j = 0; j <= 5; ++j) EXPECT_NEAR(static_cast<double>(alt.at(j)), to_real(p_alt_exact(j, 5)), 0.015);
  auto v = p_v_monte_carlo(3, 4, 20000, rng);
  for (long j = 0; j <= 3; ++j) EXPECT_NEAR(static_cast<double>(v.at(j)), to_real(p_v_exact(j, 3, 4)), 0.015);
  EXPECT_NE(p_mat_monte_carlo(4, 4, 20000, Rng(1)).probs, a.probs);
}

TEST(Morphisms, CountInjMatchesEnumeration) {
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int a2 = 0; a2 <= 2; ++a2)
        for (int b2 = 0; b2 <= 2; ++b2)
          EXPECT_EQ(count_inj_C({a, b}, {a2, b2}), mpz_class(oracle::brute_inj_C(a, b, a2, b2)))
              << a << b << " -> " << a2 << b2;
  EXPECT_EQ(count_inj(2, 3), 42);
  EXPECT_EQ(count_inj(3, 2), 0);
}

TEST(Morphisms, CountInjDMatchesEnumeration) {
  const std::size_t L = 3;
  auto subspaces = gf2::enumerate_subspaces(L);
  for (int d = 0; d <= 2; ++d)
    for (int c = 0; c <= 3; ++c)
      for (auto& IO : subspaces)
        for (auto& IA : subspaces) {
          if (static_cast<int>(IO.dim()) > d || static_cast<int>(IA.dim()) > c) continue;
          // standard maps: basis vector i goes to the i-th image basis vector, the rest to 0
          std::vector<oracle::Mask> fO(d, 0), fA(c, 0);
          for (std::size_t i = 0; i < IO.dim(); ++i) fO[i] = static_cast<oracle::Mask>(IO.basis().row(i).mask());
          for (std::size_t i = 0; i < IA.dim(); ++i) fA[i] = static_cast<oracle::Mask>(IA.basis().row(i).mask());
          ObjD O{static_cast<std::size_t>(d), IO}, A{static_cast<std::size_t>(c), IA};
          EXPECT_EQ(count_inj_D(O, A), mpz_class(oracle::brute_inj_D(d, fO, c, fA)));
        }
}

TEST(Moments, CaseIVIdentity) {
  for (long u = -2; u <= 2; ++u)
    for (long a = 0; a <= 2; ++a)
      for (long b = 0; b <= 2; ++b) {
        auto m = moment_mu_IV(a, b, u);
        Real t = moment_mu_IV_target(a, b, u);
        EXPECT_NEAR(static_cast<double>(m.value / t), 1.0, 1e-6) << a << "," << b << " u=" << u;
        EXPECT_EQ(t, std::ldexp(1.0L, static_cast<int>(a * u + a * b + b * (b + 1) / 2)));
      }
}

TEST(Moments, CaseVIdentity) {
  for (long Ld = 0; Ld <= 3; ++Ld)
    for (auto& I : gf2::enumerate_subspaces(Ld))
      for (std::size_t d = I.dim(); d <= 2; ++d)
        for (long u : {0L, 1L, 2L}) {
          auto m = moment_mu_V(ObjD{d, I}, u, Ld);
          Real t = moment_mu_V_target(d, u, Ld);
          EXPECT_NEAR(static_cast<double>(m.value / t), 1.0, 1e-6) << "d=" << d << " L=" << Ld << " u=" << u;
        }
}

TEST(Models, JointLawsAreProbabilities) {
  auto iv = case_IV_r2_model(0);
  Real s = 0;
  for (auto& [k, p] : iv.probs) {
    EXPECT_GE(p, 0);
    s += p;
  }
  EXPECT_NEAR(static_cast<double>(s + iv.tail_bound), 1.0, 1e-9);
  auto v = case_V_r2_model(-1, 2);
  EXPECT_NEAR(static_cast<double>(v.first().total() + v.tail_bound), 1.0, 1e-9);
  EXPECT_NEAR(static_cast<double>(v.second().total() + v.tail_bound), 1.0, 1e-9);
}

TEST(Models, TailExponents) {
  EXPECT_NEAR(tail_exponent(case_IV_r2_model(0).second(), 10, 30), 0.375, 0.05);
  EXPECT_NEAR(tail_exponent(case_V_r2_model(-1, 2).second(), 10, 30), 0.25, 0.05);
  // the P^Mat marginal decays like 2^{-r^2}
  EXPECT_NEAR(tail_exponent(p_mat_limit_distribution(0), 10, 30), 1.0, 0.05);
}
