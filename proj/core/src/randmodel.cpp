#include "twistsel/randmodel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace twistsel::randmodel {

namespace {

mpz_class pow2(long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return r;
}

// Gaussian binomial [n choose k] at q = 2.
mpz_class gauss_binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  mpz_class num = 1, den = 1;
  for (long i = 0; i < k; ++i) {
    num *= pow2(n - i) - 1;
    den *= pow2(i + 1) - 1;
  }
  return num / den;
}

Real pow2r(long e) { return std::ldexp(Real{1}, static_cast<int>(e)); }

constexpr long kSumCap = 64;  // truncation of the outer sums over dim(A)

std::mutex g_memo_mu;
std::map<std::pair<long, long>, Approx> g_mat_memo;
std::map<long, std::vector<Real>> g_alt_memo;
std::map<std::pair<long, long>, std::vector<Real>> g_v_memo;

Approx mat_limit_cached(long j, long u) {
  {
    std::lock_guard lk(g_memo_mu);
    auto it = g_mat_memo.find({j, u});
    if (it != g_mat_memo.end()) return it->second;
  }
  Approx a = p_mat_limit(j, u);
  std::lock_guard lk(g_memo_mu);
  g_mat_memo.emplace(std::make_pair(j, u), a);
  return a;
}

const std::vector<Real>& alt_row(long n) {
  std::lock_guard lk(g_memo_mu);
  auto it = g_alt_memo.find(n);
  if (it != g_alt_memo.end()) return it->second;
  std::vector<Real> row(static_cast<std::size_t>(n) + 1);
  for (long j = 0; j <= n; ++j) row[j] = to_real(p_alt_exact(j, n));
  return g_alt_memo.emplace(n, std::move(row)).first->second;
}

const std::vector<Real>& v_row(long n, long m) {
  std::lock_guard lk(g_memo_mu);
  auto it = g_v_memo.find({n, m});
  if (it != g_v_memo.end()) return it->second;
  auto exact = p_v_distribution(n, m);
  std::vector<Real> row;
  for (auto& q : exact) row.push_back(to_real(q));
  return g_v_memo.emplace(std::make_pair(n, m), std::move(row)).first->second;
}

// Crude but safe: P^Mat(c | (oo-u) x oo) <= 2^{-c(c-u)} / eta_oo^2.
Real mat_upper(long c, long u) {
  return std::exp2(-static_cast<Real>(c) * static_cast<Real>(c - u)) / (eta_infinity() * eta_infinity());
}

}  // namespace

Real RankDistribution::total() const {
  Real s = 0;
  for (auto& [r, p] : probs) s += p;
  return s;
}

Real RankDistribution::at(long r) const {
  auto it = probs.find(r);
  return it == probs.end() ? Real{0} : it->second;
}

RankDistribution JointDistribution::first() const {
  RankDistribution d;
  for (auto& [k, p] : probs) d.probs[k.first] += p;
  d.tail_bound = tail_bound;
  return d;
}

RankDistribution JointDistribution::second() const {
  RankDistribution d;
  for (auto& [k, p] : probs) d.probs[k.second] += p;
  d.tail_bound = tail_bound;
  return d;
}

Real to_real(const mpq_class& q) {
  if (q == 0) return 0;
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::ldexp(static_cast<Real>(mn) / static_cast<Real>(md), static_cast<int>(en - ed));
}

mpq_class p_mat_exact(long j, long m, long n) {
  if (m < 0 || n < 0 || j < 0) throw std::invalid_argument("p_mat_exact: negative dimension");
  if (j > n) throw std::invalid_argument("p_mat_exact: j > n");
  long r = n - j;
  if (r > m) return 0;
  mpz_class num = gauss_binom(n, j);
  for (long i = 0; i < r; ++i) num *= pow2(m) - pow2(i);
  mpq_class q(num, pow2(m * n));
  q.canonicalize();
  return q;
}

mpq_class p_alt_exact(long j, long n) {
  if (j < 0 || n < 0 || j > n) throw std::invalid_argument("p_alt_exact: need 0 <= j <= n");
  if ((n - j) % 2) return 0;
  long s = (n - j) / 2;
  // Alternating n x n matrices of rank 2s.
  mpq_class count = 1;
  for (long i = 0; i < s; ++i) {
    count *= mpq_class(pow2(2 * i) * (pow2(n - 2 * i) - 1) * (pow2(n - 2 * i - 1) - 1), pow2(2 * i + 2) - 1);
  }
  count /= mpq_class(pow2(n * (n - 1) / 2));
  count.canonicalize();
  return count;
}

std::vector<mpq_class> p_v_distribution(long n, long m) {
  if (n < 0 || m < 0) throw std::invalid_argument("p_v: negative dimension");
  if (m % 2) throw std::invalid_argument("p_v: m must be even");
  // Images of the basis vectors arrive one at a time. State: r = dim U, k = dim(U ∩ U^perp),
  // with U the span so far inside the symplectic F2^m.
  std::map<std::pair<long, long>, mpq_class> state{{{0, 0}, mpq_class(1)}};
  const mpz_class full = pow2(m);
  for (long step = 0; step < n; ++step) {
    std::map<std::pair<long, long>, mpq_class> next;
    for (auto& [rk, p] : state) {
      auto [r, k] = rk;
      mpq_class stay(pow2(r), full);
      next[{r, k}] += p * stay;
      // x outside U but orthogonal to the radical: the radical grows
      mpz_class grow = pow2(m - k) - pow2(r);
      if (grow > 0) next[{r + 1, k + 1}] += p * mpq_class(grow, full);
      // x pairs nontrivially with the radical: it shrinks
      mpz_class shrink = full - pow2(m - k);
      if (shrink > 0) next[{r + 1, k - 1}] += p * mpq_class(shrink, full);
    }
    for (auto& [rk, p] : next) p.canonicalize();
    state = std::move(next);
  }
  std::vector<mpq_class> out(static_cast<std::size_t>(n) + 1, mpq_class(0));
  for (auto& [rk, p] : state) out[static_cast<std::size_t>(n - (rk.first - rk.second))] += p;
  for (auto& q : out) q.canonicalize();
  return out;
}

mpq_class p_v_exact(long j, long n, long m) {
  if (j < 0 || j > n) throw std::invalid_argument("p_v_exact: need 0 <= j <= n");
  return p_v_distribution(n, m)[static_cast<std::size_t>(j)];
}

Real eta_infinity() {
  static const Real eta = [] {
    Real e = 1;
    for (int i = 1; i < 80; ++i) e *= 1 - std::ldexp(Real{1}, -i);
    return e;
  }();
  return eta;
}

Real p_mat_limit_closed_form(long j, long u) {
  if (j < std::max(u, 0L)) return 0;
  auto eta = [](long k) {
    Real e = 1;
    for (long i = 1; i <= k; ++i) e *= 1 - std::ldexp(Real{1}, static_cast<int>(-i));
    return e;
  };
  return std::exp2(-static_cast<Real>(j) * static_cast<Real>(j - u)) * eta_infinity() / (eta(j) * eta(j - u));
}

Approx p_mat_limit(long j, long u, Real tol) {
  if (j < std::max(u, 0L)) return {0, 0};
  long n = std::max({j, j - u, u, 1L});
  Real prev = to_real(p_mat_exact(j, n - u, n));
  // relative: the values of interest go down to 2^-1700
  for (long step = 0; step < 400; ++step) {
    ++n;
    Real cur = to_real(p_mat_exact(j, n - u, n));
    Real diff = std::fabs(cur - prev);
    if (diff < tol / 2 * cur) return {cur, diff};
    prev = cur;
  }
  throw std::runtime_error("p_mat_limit: no convergence");
}

std::size_t pulled_back_kernel_dim(const gf2::BitMatrix& T) {
  const std::size_t m = T.rows(), n = T.cols();
  if (m % 2) throw std::invalid_argument("pulled_back_kernel_dim: odd target dimension");
  // J T: swap paired rows
  gf2::BitMatrix JT(m, n);
  for (std::size_t i = 0; i < m; ++i) JT.row(i) = T.row(i ^ 1);
  gf2::BitMatrix G = T.transpose() * JT;
  return n - gf2::rank(G);
}

namespace {

constexpr std::size_t kChunk = 4096;

template <class F>
RankDistribution monte_carlo(std::size_t samples, const Rng& rng, F&& draw) {
  std::map<long, std::size_t> counts;
  std::size_t chunks = (samples + kChunk - 1) / kChunk;
  for (std::size_t c = 0; c < chunks; ++c) {
    Rng sub = rng.split(c);
    std::size_t todo = std::min(kChunk, samples - c * kChunk);
    for (std::size_t s = 0; s < todo; ++s) ++counts[draw(sub)];
  }
  RankDistribution d;
  d.samples = samples;
  for (auto& [j, k] : counts) {
    Real p = static_cast<Real>(k) / static_cast<Real>(samples);
    d.probs[j] = p;
    d.errors[j] = std::sqrt(p * (1 - p) / static_cast<Real>(samples));
  }
  return d;
}

}  // namespace

RankDistribution p_mat_monte_carlo(long m, long n, std::size_t samples, const Rng& rng) {
  return monte_carlo(samples, rng, [&](Rng& r) {
    auto M = gf2::sample_matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(n), r);
    return n - static_cast<long>(gf2::rank(M));
  });
}

RankDistribution p_alt_monte_carlo(long n, std::size_t samples, const Rng& rng) {
  return monte_carlo(samples, rng, [&](Rng& r) {
    auto M = gf2::sample_alternating(static_cast<std::size_t>(n), r);
    return n - static_cast<long>(gf2::rank(M));
  });
}

RankDistribution p_v_monte_carlo(long n, long m, std::size_t samples, const Rng& rng) {
  if (m % 2) throw std::invalid_argument("p_v_monte_carlo: m must be even");
  return monte_carlo(samples, rng, [&](Rng& r) {
    auto T = gf2::sample_matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(n), r);
    return static_cast<long>(pulled_back_kernel_dim(T));
  });
}

mpz_class count_inj(long k, long n) {
  if (k < 0 || n < 0) throw std::invalid_argument("count_inj: negative dimension");
  if (k > n) return 0;
  mpz_class r = 1;
  for (long i = 0; i < k; ++i) r *= pow2(n) - pow2(i);
  return r;
}

mpz_class count_inj_C(ObjC O, ObjC A) {
  if (O.a < 0 || O.b < 0 || A.a < 0 || A.b < 0) throw std::invalid_argument("count_inj_C: negative dimension");
  return count_inj(O.a, A.a) * count_inj(O.b, A.b) * pow2(O.b * A.a);
}

mpz_class count_inj_D(const ObjD& O, const ObjD& A) {
  if (O.image.ambient_dim() != A.image.ambient_dim()) throw std::invalid_argument("count_inj_D: ambient mismatch");
  if (O.dim < O.image.dim() || A.dim < A.image.dim()) throw std::invalid_argument("count_inj_D: dim below image");
  if (!O.image.is_subspace_of(A.image)) return 0;
  const long d = static_cast<long>(O.dim), k = static_cast<long>(O.image.dim());
  const long fiber = static_cast<long>(A.dim - A.image.dim());  // dim ker(A -> L)
  // Basis of O: k vectors lifting the image, then d - k spanning the kernel.
  mpz_class r = pow2(k * fiber);
  for (long i = 0; i < d - k; ++i) {
    if (i >= fiber) return 0;
    r *= pow2(fiber) - pow2(i);
  }
  return r;
}

MeasureC measure_mu_IV(long u, long max_dim) {
  MeasureC mu;
  for (long a = std::max(u, 0L); a <= max_dim; ++a) {
    Real pa = mat_limit_cached(a, u).value;
    if (pa == 0) continue;
    const auto& alt = alt_row(a - u);
    for (long b = 0; b < static_cast<long>(alt.size()) && b <= max_dim; ++b)
      if (alt[b] > 0) mu.mass[{a, b}] = pa * alt[b];
  }
  for (long a = max_dim + 1; a <= max_dim + 40; ++a) mu.tail_bound += mat_upper(a, u);
  return mu;
}

Real moment_mu_IV_target(long a, long b, long u) { return std::exp2(static_cast<Real>(a * u + a * b + b * (b + 1) / 2)); }

Approx moment_mu_IV(long a, long b, long u) {
  Approx out;
  const long c0 = std::max(u, 0L);
  for (long c = c0; c <= kSumCap; ++c) {
    Approx pm = mat_limit_cached(c, u);
    if (pm.value == 0) continue;
    const auto& alt = alt_row(c - u);
    Real inner = 0;
    for (long k = 0; k < static_cast<long>(alt.size()); ++k) {
      if (alt[k] == 0) continue;
      inner += alt[k] * to_real(mpq_class(count_inj_C({a, b}, {c, k})));
    }
    out.value += pm.value * inner;
    out.error += pm.error * inner;
  }
  // beyond the cap: #Inj <= 2^{c a + (c-u) b + c b}, alternating mass <= 1
  for (long c = kSumCap + 1; c <= kSumCap + 40; ++c)
    out.error += mat_upper(c, u) * std::exp2(static_cast<Real>(c * a + (c - u) * b + c * b));
  return out;
}

Real p_loc(long c, long l, long L) {
  if (l > L || l > c) return 0;
  Real r = 1;
  for (long i = 0; i < l; ++i) r *= (pow2r(c) - pow2r(i)) / pow2r(L);
  // remaining factor 2^{-(c-l)L}
  return r * std::exp2(-static_cast<Real>((c - l) * L));
}

Real moment_mu_V_target(std::size_t d, long u, long L_dim) {
  return std::exp2(static_cast<Real>(static_cast<long>(d) * (u - L_dim)));
}

Approx moment_mu_V(const ObjD& O, long u, long L_dim) {
  if (static_cast<long>(O.image.ambient_dim()) != L_dim) throw std::invalid_argument("moment_mu_V: ambient mismatch");
  auto lambdas = gf2::enumerate_subspaces_uncapped(static_cast<std::size_t>(L_dim));
  Approx out;
  for (long c = std::max(u, 0L); c <= kSumCap; ++c) {
    Approx pm = mat_limit_cached(c, u);
    if (pm.value == 0) continue;
    Real inner = 0;
    for (auto& lam : lambdas) {
      long l = static_cast<long>(lam.dim());
      if (l > c || !O.image.is_subspace_of(lam)) continue;
      ObjD A{static_cast<std::size_t>(c), lam};
      inner += p_loc(c, l, L_dim) * to_real(mpq_class(count_inj_D(O, A)));
    }
    out.value += pm.value * inner;
    out.error += pm.error * inner;
  }
  for (long c = kSumCap + 1; c <= kSumCap + 40; ++c)
    out.error += mat_upper(c, u) * std::exp2(static_cast<Real>(c * static_cast<long>(O.dim)));
  return out;
}

RankDistribution p_mat_limit_distribution(long u, long max_rank) {
  RankDistribution d;
  for (long j = std::max(u, 0L); j <= max_rank; ++j) {
    Approx a = mat_limit_cached(j, u);
    d.probs[j] = a.value;
    d.errors[j] = a.error;
  }
  for (long j = max_rank + 1; j <= max_rank + 40; ++j) d.tail_bound += mat_upper(j, u);
  return d;
}

JointDistribution case_IV_r2_model(long u, long max_rank) {
  JointDistribution J;
  for (long c = std::max(u, 0L); c <= max_rank; ++c) {
    Real pc = mat_limit_cached(c, u).value;
    const auto& alt = alt_row(c - u);
    for (long k = 0; k < static_cast<long>(alt.size()); ++k)
      if (alt[k] > 0 && pc > 0) J.probs[{c, c + k}] = pc * alt[k];
  }
  for (long c = max_rank + 1; c <= max_rank + 40; ++c) J.tail_bound += mat_upper(c, u);
  return J;
}

JointDistribution case_V_r2_model(long u1, long u0, long max_rank) {
  if (u0 < 0 || u0 % 2) throw std::invalid_argument("case_V_r2_model: u0 must be even and >= 0");
  JointDistribution J;
  for (long c = std::max(u1, 0L); c <= max_rank; ++c) {
    Real pc = mat_limit_cached(c, u1).value;
    const auto& pv = v_row(c - u1, u0);
    for (long k = 0; k < static_cast<long>(pv.size()); ++k)
      if (pv[k] > 0 && pc > 0) J.probs[{c, c + k}] = pc * pv[k];
  }
  for (long c = max_rank + 1; c <= max_rank + 40; ++c) J.tail_bound += mat_upper(c, u1);
  return J;
}

double tail_exponent(const RankDistribution& dist, long r_lo, long r_hi) {
  if (r_lo < 5 || r_hi <= r_lo) throw std::invalid_argument("tail_exponent: need r_hi > r_lo >= 5");
  if (dist.probs.empty() || dist.probs.rbegin()->first < r_hi)
    throw std::invalid_argument("tail_exponent: distribution not certified up to r_hi");
  std::vector<std::pair<Real, Real>> pts;
  for (long r = r_lo; r <= r_hi; ++r) {
    Real p = dist.at(r);
    if (p > 0) pts.emplace_back(static_cast<Real>(r) * r, -std::log2(p));
  }
  if (pts.size() < 3) throw std::invalid_argument("tail_exponent: insufficient tail data");
  Real mx = 0, my = 0;
  for (auto& [x, y] : pts) mx += x, my += y;
  mx /= pts.size();
  my /= pts.size();
  Real sxy = 0, sxx = 0;
  for (auto& [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
  return static_cast<double>(sxy / sxx);
}

}  // namespace twistsel::randmodel
