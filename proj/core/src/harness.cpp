#include "twistsel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "twistsel/descent.hpp"

namespace twistsel::harness {

using randmodel::JointDistribution;
using randmodel::RankDistribution;

// ---------- twist classes ----------

TwistClassSpec TwistClassSpec::make(const CurveModel& E, i64 d0) {
  if (d0 == 0) throw std::invalid_argument("d0 must be nonzero");
  TwistClassSpec s;
  s.d0 = squarefree_kernel(d0);
  if (s.d0.to_i64() != d0) throw std::invalid_argument("d0 must be squarefree");
  s.places = {Place::infinity(), Place{2}};
  for (u64 p : E.bad_primes())
    if (p != 2) s.places.push_back(Place{p});
  return s;
}

std::vector<unsigned> TwistClassSpec::key(i64 d) const {
  std::vector<unsigned> k;
  const mpz_class z(static_cast<long>(d));
  for (const Place v : places) k.push_back(localize(z, v).bits);
  return k;
}

bool TwistClassSpec::contains(i64 d) const {
  if (d == 0) return false;
  const mpz_class z(static_cast<long>(d));
  for (const Place v : places)
    if (!(localize(z, v) == localize(d0, v))) return false;
  return true;
}

std::vector<i64> squarefree_up_to(i64 H) {
  if (H < 1) return {};
  if (H > 100000000) throw std::invalid_argument("height above 1e8");
  std::vector<bool> sf(static_cast<std::size_t>(H) + 1, true);
  const i64 r = static_cast<i64>(std::sqrt(static_cast<double>(H))) + 1;
  std::vector<bool> composite(static_cast<std::size_t>(r) + 1, false);
  for (i64 p = 2; p <= r; ++p) {
    if (composite[p]) continue;
    for (i64 q = p * p; q <= r; q += p) composite[q] = true;
    for (i64 m = p * p; m <= H; m += p * p) sf[m] = false;
  }
  std::vector<i64> out;
  for (i64 d = H; d >= 1; --d)
    if (sf[d]) out.push_back(-d);
  for (i64 d = 1; d <= H; ++d)
    if (sf[d]) out.push_back(d);
  return out;
}

std::vector<i64> enumerate_twist_class(const TwistClassSpec& spec, i64 H) {
  std::vector<i64> out;
  for (i64 d : squarefree_up_to(H))
    if (spec.contains(d)) out.push_back(d);
  return out;
}

// ---------- per-twist analysis ----------

struct TwistAnalyzer::Impl {
  CurveModel E;
  CaseLabel label;
  bool balanced = false;
  std::optional<IsogenyDescent> phi, phid;
  std::optional<TwoDescent> two;
  std::unique_ptr<CaseVDescent> caseV;

  explicit Impl(const CurveModel& curve) : E(curve), label(classify_case(curve)) {
    if (label.kind == Case::V) {
      caseV = std::make_unique<CaseVDescent>(E);
      balanced = true;
      return;
    }
    TwoIsogeny iso;
    if (label.kind == Case::IV) {
      iso = label.balanced.at(0);
      balanced = true;
    } else {
      auto all = enumerate_two_isogenies(E);
      if (all.empty()) throw std::invalid_argument("curve has no rational 2-isogeny");
      iso = all.front();
    }
    phi.emplace(iso);
    phid.emplace(iso.dual());
    if (iso.kernel_model.roots) two.emplace(iso.kernel_model);
  }
};

TwistAnalyzer::TwistAnalyzer(const CurveModel& E) : impl_(new Impl(E)) {}
TwistAnalyzer::~TwistAnalyzer() { delete impl_; }
Case TwistAnalyzer::kind() const { return impl_->label.kind; }

namespace {

std::size_t torsion_dim(const IsogenyDescent& D, const SelmerGroup& s, const SquareClass& d, gf2::Subspace* out = nullptr) {
  gf2::Subspace t(s.generators.size());
  for (const auto& c : D.torsion_image(d)) t.add(s.coordinates(c));
  if (out) *out = t;
  return t.dim();
}

// Image of Sel^2 -> Sel^{phi'} (first coordinate) modulo the torsion image there.
std::size_t sel2_projection(const SelmerGroup& sel2, const IsogenyDescent& Dd, const SelmerGroup& seld,
                            const SquareClass& d, std::vector<std::string>& violations) {
  gf2::Subspace tors;
  torsion_dim(Dd, seld, d, &tors);
  gf2::Subspace span = tors;
  bool inside = true;
  for (const auto& [c1, c2] : sel2.pair_basis) {
    if (!seld.contains(c1)) {
      inside = false;
      continue;
    }
    span.add(seld.coordinates(c1));
  }
  if (!inside) violations.push_back("sel2_projection");
  return span.dim() - tors.dim();
}

}  // namespace

TwistRecord TwistAnalyzer::analyze(i64 d) const {
  TwistRecord rec;
  rec.d = d;
  rec.kind = impl_->label.kind;
  try {
    const SquareClass dc = squarefree_kernel(d);
    if (dc.to_i64() != d) throw std::invalid_argument("d is not squarefree");
    if (impl_->caseV) {
      const CaseVDescent& V = *impl_->caseV;
      const CaseVRecord c = V.rank_identity_check(dc);
      rec.dim_sel_phi1 = c.dim_sel_phi1;
      rec.dim_sel_phi1_dual = c.dim_sel_phi1_dual;
      rec.dim_sel_phi2 = c.dim_sel_phi2;
      rec.dim_sel_phi2_dual = c.dim_sel_phi2_dual;
      rec.dim_sel2 = c.dim_sel2;
      rec.r_phi1 = c.r_phi1;
      rec.r_phi1_dual = c.r_phi1_dual;
      rec.r2 = c.r2;
      rec.u1 = c.u1;
      rec.u2 = c.u2;
      rec.u0 = c.u0;
      rec.defect = c.defect;
      rec.loc_image_dim = c.loc_image_dim;
      rec.L_dim = c.L_dim;
      rec.has_r2 = rec.has_phi2 = true;
      rec.degenerate = c.degenerate;
      const int gw1 = static_cast<int>(c.dim_sel_phi1) - static_cast<int>(c.dim_sel_phi1_dual);
      const int gw2 = static_cast<int>(c.dim_sel_phi2) - static_cast<int>(c.dim_sel_phi2_dual);
      if (gw1 != c.u1 || gw2 != c.u2 || V.phi1_dual().tamagawa(dc).u != -c.u1 ||
          V.phi2_dual().tamagawa(dc).u != -c.u2)
        rec.violations.push_back("greenberg_wiles");
      if (c.u0 < 0 || c.u0 % 2) rec.violations.push_back("u0");
      if (!c.ok) rec.violations.push_back("defect");
      if (!c.loc_kernel_matches || !c.loc_containment_ok) rec.violations.push_back("localization");
      const SelmerGroup s1 = V.phi1().selmer(dc);
      rec.tors_phi1 = torsion_dim(V.phi1(), s1, dc);
      rec.sel2_image = sel2_projection(V.two().selmer(dc), V.phi1_dual(), V.phi1_dual().selmer(dc), dc, rec.violations);
    } else {
      const IsogenyDescent& D = *impl_->phi;
      const IsogenyDescent& Dd = *impl_->phid;
      const SelmerGroup s = D.selmer(dc);
      const SelmerGroup sd = Dd.selmer(dc);
      rec.dim_sel_phi1 = s.dim;
      rec.dim_sel_phi1_dual = sd.dim;
      rec.u1 = D.tamagawa(dc).u;
      if (static_cast<int>(s.dim) - static_cast<int>(sd.dim) != rec.u1 || Dd.tamagawa(dc).u != -rec.u1)
        rec.violations.push_back("greenberg_wiles");
      rec.tors_phi1 = torsion_dim(D, s, dc);
      rec.r_phi1 = static_cast<long>(s.dim) - static_cast<long>(rec.tors_phi1);
      rec.r_phi1_dual = static_cast<long>(sd.dim) - static_cast<long>(torsion_dim(Dd, sd, dc));
      const auto& iso = D.isogeny();
      rec.degenerate = has_halvable_two_torsion(twist(iso.kernel_model, dc)) ||
                       has_halvable_two_torsion(twist(iso.target, dc));
      if (impl_->two) {
        const SelmerGroup s2 = impl_->two->selmer(dc);
        rec.dim_sel2 = s2.dim;
        rec.r2 = static_cast<long>(s2.dim) - 2;
        rec.has_r2 = true;
        rec.sel2_image = sel2_projection(s2, Dd, sd, dc, rec.violations);
      }
    }
    if (impl_->balanced && rec.r_phi1 < std::max(rec.u1, 0) && !rec.degenerate) rec.violations.push_back("support");
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

// ---------- aggregation ----------

RankDistribution SweepResult::empirical_r_phi(std::optional<i64> class_d0) const {
  RankDistribution out;
  std::map<long, std::size_t> counts;
  for (const auto& r : records) {
    if (!r.usable() || (class_d0 && r.class_d0 != *class_d0)) continue;
    ++counts[r.r_phi1];
    ++out.samples;
  }
  for (auto& [k, n] : counts) out.probs[k] = static_cast<randmodel::Real>(n) / out.samples;
  return out;
}

JointDistribution SweepResult::empirical_joint(std::optional<i64> class_d0) const {
  JointDistribution out;
  std::map<std::pair<long, long>, std::size_t> counts;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (!r.usable() || !r.has_r2 || (class_d0 && r.class_d0 != *class_d0)) continue;
    ++counts[{r.r_phi1, r.r2}];
    ++n;
  }
  for (auto& [k, c] : counts) out.probs[k] = static_cast<randmodel::Real>(c) / n;
  return out;
}

std::map<long, std::map<std::size_t, std::size_t>> SweepResult::loc_image_given_r_phi1_dual() const {
  std::map<long, std::map<std::size_t, std::size_t>> out;
  for (const auto& r : records)
    if (r.usable() && r.has_phi2) ++out[r.r_phi1_dual][r.loc_image_dim];
  return out;
}

std::size_t SweepResult::violation_total() const {
  std::size_t n = 0;
  for (auto& [k, c] : violations) n += c;
  return n;
}

// ---------- CSV ----------

namespace {

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == ';' || c == '\n' || c == '\r') c = ' ';
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<Case> case_from_string(const std::string& s) {
  for (Case c : {Case::I, Case::II, Case::III, Case::IV, Case::V})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

}  // namespace

std::string csv_header() {
  return "d,case,dim_sel_phi1,dim_sel_phi1_dual,dim_sel_phi2,dim_sel_phi2_dual,dim_sel2,u1,u2,u0,defect,"
         "loc_image_dim,flags,class_d0,r_phi1,r_phi1_dual,r2,L_dim,tors_phi1,sel2_image";
}

std::string to_csv(const TwistRecord& r) {
  std::vector<std::string> flags;
  if (r.degenerate) flags.push_back("degenerate");
  if (r.has_r2) flags.push_back("r2");
  if (r.has_phi2) flags.push_back("phi2");
  for (auto& v : r.violations) flags.push_back("violation:" + v);
  if (!r.error.empty()) flags.push_back("error:" + sanitize(r.error));
  std::string f;
  for (std::size_t i = 0; i < flags.size(); ++i) f += (i ? ";" : "") + flags[i];
  std::ostringstream o;
  o << r.d << ',' << to_string(r.kind) << ',' << r.dim_sel_phi1 << ',' << r.dim_sel_phi1_dual << ',' << r.dim_sel_phi2
    << ',' << r.dim_sel_phi2_dual << ',' << r.dim_sel2 << ',' << r.u1 << ',' << r.u2 << ',' << r.u0 << ',' << r.defect
    << ',' << r.loc_image_dim << ',' << f << ',' << r.class_d0 << ',' << r.r_phi1 << ',' << r.r_phi1_dual << ','
    << r.r2 << ',' << r.L_dim << ',' << r.tors_phi1 << ',' << r.sel2_image;
  return o.str();
}

std::optional<TwistRecord> from_csv(const std::string& line) {
  auto f = split(line, ',');
  if (f.size() != 20) return std::nullopt;
  try {
    TwistRecord r;
    std::size_t i = 0;
    auto L = [&] { return std::stol(f[i++]); };
    auto U = [&] { return static_cast<std::size_t>(std::stoul(f[i++])); };
    r.d = L();
    auto c = case_from_string(f[i++]);
    if (!c) return std::nullopt;
    r.kind = *c;
    r.dim_sel_phi1 = U();
    r.dim_sel_phi1_dual = U();
    r.dim_sel_phi2 = U();
    r.dim_sel_phi2_dual = U();
    r.dim_sel2 = U();
    r.u1 = static_cast<int>(L());
    r.u2 = static_cast<int>(L());
    r.u0 = static_cast<int>(L());
    r.defect = L();
    r.loc_image_dim = U();
    if (!f[i].empty())
      for (auto& tok : split(f[i], ';')) {
        if (tok == "degenerate") r.degenerate = true;
        else if (tok == "r2") r.has_r2 = true;
        else if (tok == "phi2") r.has_phi2 = true;
        else if (tok.rfind("violation:", 0) == 0) r.violations.push_back(tok.substr(10));
        else if (tok.rfind("error:", 0) == 0) r.error = tok.substr(6);
        else return std::nullopt;
      }
    ++i;
    r.class_d0 = L();
    r.r_phi1 = L();
    r.r_phi1_dual = L();
    r.r2 = L();
    r.L_dim = U();
    r.tors_phi1 = U();
    r.sel2_image = U();
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string distribution_csv(const RankDistribution& d) {
  std::ostringstream o;
  o << "rank,probability,error_bound\n";
  char buf[96];
  for (auto& [r, p] : d.probs) {
    auto e = d.errors.find(r);
    std::snprintf(buf, sizeof buf, "%ld,%.17Lg,%.3Lg\n", r, p, e == d.errors.end() ? randmodel::Real{0} : e->second);
    o << buf;
  }
  return o.str();
}

// ---------- sweep ----------

namespace {

std::string meta_line(const CurveModel& E, std::optional<i64> d0, i64 H) {
  std::ostringstream o;
  o << "# sweep A=" << E.A.get_str() << " B=" << E.B.get_str() << " H=" << H << " d0=" << (d0 ? std::to_string(*d0) : "all");
  return o.str();
}

}  // namespace

SweepResult sweep(const CurveModel& E, std::optional<i64> d0, i64 H, const SweepOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const TwistAnalyzer analyzer(E);
  SweepResult res;
  res.curve = E;
  res.kind = analyzer.kind();
  res.H = H;
  res.d0 = d0;

  // Class of each d, named by its smallest-magnitude member.
  const TwistClassSpec base = TwistClassSpec::make(E, d0.value_or(1));
  std::vector<i64> ds;
  std::map<i64, i64> class_of;
  {
    auto all = squarefree_up_to(H);
    std::vector<i64> by_size = all;
    std::stable_sort(by_size.begin(), by_size.end(), [](i64 x, i64 y) {
      return std::llabs(x) != std::llabs(y) ? std::llabs(x) < std::llabs(y) : x > y;
    });
    std::map<std::vector<unsigned>, i64> first;
    for (i64 d : by_size) first.emplace(base.key(d), d);
    for (i64 d : all) {
      if (d0 && !base.contains(d)) continue;
      ds.push_back(d);
      class_of[d] = first.at(base.key(d));
    }
  }

  std::map<i64, TwistRecord> done;
  const std::string meta = meta_line(E, d0, H);
  if (!opts.out_csv.empty()) {
    namespace fs = std::filesystem;
    if (opts.resume && fs::exists(opts.out_csv)) {
      std::ifstream in(opts.out_csv);
      std::string line;
      std::getline(in, line);
      if (line != meta) throw std::runtime_error("resume: " + opts.out_csv + " belongs to a different sweep");
      std::getline(in, line);
      while (std::getline(in, line))
        if (auto r = from_csv(line)) done[r->d] = *r;
      res.resumed = done.size();
    }
    // Rewrite so a torn last line from an interrupted run disappears.
    const std::string tmp = opts.out_csv + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp);
      out << meta << '\n' << csv_header() << '\n';
      for (auto& [d, r] : done) out << to_csv(r) << '\n';
    }
    fs::rename(tmp, opts.out_csv);
  }

  std::vector<i64> todo;
  for (i64 d : ds)
    if (!done.count(d)) todo.push_back(d);
  bool stopped = false;
  if (opts.stop_after && *opts.stop_after < todo.size()) {
    todo.resize(*opts.stop_after);
    stopped = true;
  }

  std::ofstream out;
  if (!opts.out_csv.empty()) out.open(opts.out_csv, std::ios::app);
  const unsigned threads = std::max(1u, opts.threads);
  const std::size_t block = std::max<std::size_t>(1, opts.block);
  for (std::size_t start = 0; start < todo.size(); start += block) {
    const std::size_t n = std::min(block, todo.size() - start);
    std::vector<TwistRecord> recs(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        recs[i] = analyzer.analyze(todo[start + i]);
        recs[i].class_d0 = class_of.at(recs[i].d);
      }
    };
    if (threads == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    for (auto& r : recs) {
      if (out.is_open()) out << to_csv(r) << '\n';
      done[r.d] = std::move(r);
    }
    if (out.is_open()) out.flush();
  }
  res.complete = !stopped;

  // The file keeps block order; rewrite sorted so interrupted and uninterrupted runs match byte for byte.
  if (out.is_open()) {
    out.close();
    std::ofstream again(opts.out_csv, std::ios::trunc);
    again << meta << '\n' << csv_header() << '\n';
    for (auto& [d, r] : done) again << to_csv(r) << '\n';
  }

  const bool check_u = res.kind == Case::IV || res.kind == Case::V;
  for (auto& [d, r] : done) {
    auto [it, fresh] = res.classes.try_emplace(r.class_d0);
    ClassSummary& cs = it->second;
    if (fresh) cs.d0 = r.class_d0;
    ++cs.count;
    if (!r.error.empty()) {
      ++cs.errors;
      ++res.errors;
      res.records.push_back(r);
      continue;
    }
    if (r.degenerate) {
      ++cs.flagged;
      ++res.flagged;
    }
    if (cs.count - cs.errors == 1) {
      cs.u1 = r.u1;
      cs.u2 = r.u2;
    } else if (check_u && (r.u1 != cs.u1 || r.u2 != cs.u2)) {
      r.violations.push_back("u_constancy");
    }
    for (auto& v : r.violations) ++res.violations[v];
    res.records.push_back(r);
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

// ---------- moments and comparison ----------

MomentEstimate estimate_moments(const SweepResult& result, long a, long b, std::optional<i64> class_d0) {
  if (a < 0 || b < 0 || a > 2 || b > 2) throw std::invalid_argument("moments: need 0 <= a, b <= 2");
  if (!class_d0) {
    if (result.classes.size() != 1) throw std::invalid_argument("moments: choose a twist class");
    class_d0 = result.classes.begin()->first;
  }
  auto cls = result.classes.find(*class_d0);
  if (cls == result.classes.end()) throw std::invalid_argument("moments: unknown twist class");
  MomentEstimate m;
  m.a = a;
  m.b = b;
  long double sum = 0;
  for (const auto& r : result.records) {
    if (!r.usable() || r.class_d0 != *class_d0) continue;
    if (b > 0 && !r.has_r2) throw std::invalid_argument("moments: sweep has no 2-Selmer data");
    // tuples in Sel^phi independent modulo torsion, each with 2^tors lifts
    mpz_class n = randmodel::count_inj(a, r.r_phi1);
    n <<= static_cast<mp_bitcnt_t>(a * static_cast<long>(r.tors_phi1));
    if (b > 0) {
      const long s = static_cast<long>(r.sel2_image);
      mpz_class nb = randmodel::count_inj(b, s);
      nb <<= static_cast<mp_bitcnt_t>(b * (static_cast<long>(r.dim_sel2) - s));
      n *= nb;
    }
    sum += static_cast<long double>(n.get_d());
    ++m.samples;
  }
  if (m.samples == 0) throw std::invalid_argument("moments: no usable twists");
  m.estimate = static_cast<double>(sum / m.samples);
  const double h0 = result.curve.full_two_torsion() ? 4.0 : 2.0;
  const long u = cls->second.u1;
  m.target = std::pow(h0, static_cast<double>(b)) * std::exp2(static_cast<double>(a + a * u + a * b + b * (b + 1) / 2));
  return m;
}

Comparison compare(const RankDistribution& emp, const RankDistribution& model) {
  if (emp.probs.empty()) throw std::invalid_argument("compare: empty empirical distribution");
  Comparison c;
  std::map<long, std::pair<double, double>> rows;
  for (auto& [r, p] : emp.probs) rows[r].first = static_cast<double>(p);
  for (auto& [r, p] : model.probs) rows[r].second = static_cast<double>(p);
  const double n = emp.samples ? static_cast<double>(emp.samples) : 1.0;
  for (auto& [r, em] : rows) {
    auto [e, m] = em;
    c.tv_distance += std::fabs(e - m) / 2;
    if (m > 0) c.chi_square += n * (e - m) * (e - m) / m;
    else if (e > 0) c.chi_square = INFINITY;
    c.table.push_back({r, e, m, e - m});
  }
  return c;
}

std::string report_json(const SweepResult& res) {
  using nlohmann::json;
  json j;
  j["curve"] = {{"A", res.curve.A.get_str()}, {"B", res.curve.B.get_str()}, {"case", to_string(res.kind)}};
  j["d0"] = res.d0 ? json(*res.d0) : json("all");
  j["H"] = res.H;
  j["counts"] = {{"twists", res.records.size()}, {"flagged", res.flagged}, {"errors", res.errors},
                 {"resumed", res.resumed},       {"complete", res.complete}, {"seconds", res.seconds}};
  auto dist_json = [](const RankDistribution& d) {
    json o = json::object();
    for (auto& [r, p] : d.probs) o[std::to_string(r)] = static_cast<double>(p);
    return o;
  };
  json emp = json::object(), mod = json::object(), tv = json::object();
  const bool balanced = res.kind == Case::IV || res.kind == Case::V;
  for (auto& [d0, cs] : res.classes) {
    const std::string key = std::to_string(d0);
    auto er = res.empirical_r_phi(d0);
    if (er.probs.empty()) continue;
    json e = {{"u1", cs.u1}, {"u2", cs.u2}, {"count", cs.count}, {"r_phi", dist_json(er)}};
    auto joint = res.empirical_joint(d0);
    if (!joint.probs.empty()) e["r2"] = dist_json(joint.second());
    emp[key] = e;
    if (!balanced) continue;
    const long top = er.probs.rbegin()->first + 6;
    auto model_rphi = randmodel::p_mat_limit_distribution(cs.u1, std::max(top, 12L));
    json m = {{"r_phi", dist_json(model_rphi)}};
    json t = {{"r_phi", compare(er, model_rphi).tv_distance}};
    if (!joint.probs.empty()) {
      RankDistribution model_r2;
      const int u0 = -cs.u1 - cs.u2;
      if (res.kind == Case::IV) model_r2 = randmodel::case_IV_r2_model(cs.u1, 30).second();
      else if (u0 >= 0 && u0 % 2 == 0) model_r2 = randmodel::case_V_r2_model(cs.u1, u0, 30).second();
      if (!model_r2.probs.empty()) {
        auto er2 = joint.second();
        er2.samples = er.samples;
        m["r2"] = dist_json(model_r2);
        t["r2"] = compare(er2, model_r2).tv_distance;
      }
    }
    mod[key] = m;
    tv[key] = t;
  }
  j["empirical_dists"] = emp;
  j["model_dists"] = mod;
  j["tv_distances"] = tv;
  json viol = json::object();
  for (auto& [k, n] : res.violations) viol[k] = n;
  j["invariant_violations"] = viol;
  return j.dump(2);
}

}  // namespace twistsel::harness
