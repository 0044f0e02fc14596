#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "twistsel/curves.hpp"
#include "twistsel/descent.hpp"
#include "twistsel/galmod.hpp"
#include "twistsel/harness.hpp"
#include "twistsel/randmodel.hpp"

namespace twistsel::cli {

using nlohmann::json;
namespace rm = randmodel;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CurveModel curve_or_usage(const std::string& text) {
  CurveInput in;
  try {
    in = parse_curve(text);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (!in.model) throw UsageError("curve has no rational 2-torsion point; descent needs one");
  return *in.model;
}

json subspace_json(const gf2::Subspace& S) {
  json rows = json::array();
  for (std::size_t i = 0; i < S.dim(); ++i) rows.push_back(S.basis().row(i).to_string());
  return rows;
}

json curve_json(const CurveModel& E) { return {{"A", E.A.get_str()}, {"B", E.B.get_str()}}; }

std::string shape_name(GraphShape s) {
  switch (s) {
    case GraphShape::Single: return "single";
    case GraphShape::Path2: return "path2";
    case GraphShape::Star4: return "star4";
    case GraphShape::Six: return "six";
    case GraphShape::Eight: return "eight";
  }
  return "?";
}

json classify_json(const std::string& text) {
  const CurveInput in = parse_curve(text);
  json j{{"input", text}};
  if (!in.model) {
    // No rational root: no rational 2-torsion and no 2-isogeny.
    j["case"] = "I";
    j["balanced"] = json::array();
    j["graph"] = {{"shape", shape_name(GraphShape::Single)}, {"vertices", 1}, {"edges", json::array()}};
    return j;
  }
  const CurveModel& E = *in.model;
  const CaseLabel label = classify_case(E);
  j["model"] = curve_json(E);
  j["case"] = to_string(label.kind);
  j["full_two_torsion"] = E.full_two_torsion();
  json bal = json::array();
  for (const auto& phi : label.balanced)
    bal.push_back({{"kernel_x", phi.kernel_x.get_str()}, {"target", curve_json(phi.target)}});
  j["balanced"] = bal;
  j["two_vertex_case_iv"] = label.two_vertex_case_iv;
  const IsogenyGraph g = build_isogeny_graph(E);
  json verts = json::array(), edges = json::array();
  for (const auto& v : g.vertices) verts.push_back(curve_json(v));
  for (auto [a, b] : g.edges) edges.push_back({a, b});
  j["graph"] = {{"shape", shape_name(g.shape)}, {"vertices", verts}, {"edges", edges}, {"degrees", g.degrees()}};
  return j;
}

json selmer_json(const SelmerGroup& s) {
  json basis = json::array();
  if (s.kind == SelmerGroup::Kind::Phi)
    for (const auto& c : s.basis) basis.push_back(c.to_string());
  else
    for (const auto& [a, b] : s.pair_basis) basis.push_back({a.to_string(), b.to_string()});
  return {{"dim", s.dim}, {"basis", basis}};
}

json tamagawa_json(const TamagawaData& t) {
  json dims = json::object();
  for (auto& [v, k] : t.local_dims) dims[v.to_string()] = k;
  return {{"u", t.u}, {"local_dims", dims}};
}

json record_json(const harness::TwistRecord& r) {
  json flags = json::array();
  for (auto& v : r.violations) flags.push_back(v);
  json j{{"d", r.d},
         {"case", to_string(r.kind)},
         {"dim_sel_phi1", r.dim_sel_phi1},
         {"dim_sel_phi1_dual", r.dim_sel_phi1_dual},
         {"r_phi1", r.r_phi1},
         {"r_phi1_dual", r.r_phi1_dual},
         {"u1", r.u1},
         {"degenerate", r.degenerate},
         {"violations", flags}};
  if (r.has_r2) j["dim_sel2"] = r.dim_sel2, j["r2"] = r.r2;
  if (r.has_phi2) {
    j["dim_sel_phi2"] = r.dim_sel_phi2;
    j["dim_sel_phi2_dual"] = r.dim_sel_phi2_dual;
    j["u2"] = r.u2;
    j["u0"] = r.u0;
    j["defect"] = r.defect;
    j["loc_image_dim"] = r.loc_image_dim;
    j["L_dim"] = r.L_dim;
  }
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

std::string fmt_real(rm::Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", x);
  return buf;
}

// key=value pairs from --params, e.g. "n=4,m=2".
std::map<std::string, long> parse_params(const std::string& s) {
  std::map<std::string, long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--params: expected key=value, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = std::stol(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--params: bad integer in '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Selmer statistics in quadratic twist families of curves with a 2-isogeny", "twistsel"};
  app.require_subcommand(1);

  // classify
  auto* cls = app.add_subcommand("classify", "Case label and 2-isogeny graph of one or more curves");
  std::vector<std::string> cls_curves;
  cls->add_option("curves", cls_curves, "\"A B\", \"roots: r s\" or \"cubic: a2 a4 a6\"")->required();

  // descend
  auto* desc = app.add_subcommand("descend", "Full descent record for a single twist");
  std::string desc_curve;
  long long desc_d = 1;
  desc->add_option("--curve", desc_curve, "curve, e.g. \"-34 225\"")->required();
  desc->add_option("--d", desc_d, "squarefree twist parameter")->required();

  // sweep
  auto* sw = app.add_subcommand("sweep", "Descent over all twists up to a height");
  std::string sw_curve, sw_out, sw_report;
  std::optional<long long> sw_d0;
  long long sw_H = 1000;
  unsigned sw_threads = 1;
  bool sw_resume = false;
  sw->add_option("--curve", sw_curve, "curve")->required();
  sw->add_option("--d0", sw_d0, "twist class representative (default: every class)");
  sw->add_option("--height,-H", sw_H, "bound on |d|")->check(CLI::Range(1LL, 100000000LL));
  sw->add_option("--threads", sw_threads, "worker threads")->check(CLI::Range(1u, 1024u));
  sw->add_option("--out", sw_out, "per-twist CSV (append-only, resumable)");
  sw->add_option("--report", sw_report, "JSON report path (default: stdout)");
  sw->add_flag("--resume", sw_resume, "continue an interrupted sweep from --out");

  // model
  auto* mod = app.add_subcommand("model", "Random-matrix model tables");
  std::string dist, params;
  std::optional<long> n, m, u, u0, j, mc_samples, max_rank;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<long>> tail;
  bool as_json = false;
  mod->add_option("--dist", dist, "mat | alt | v | case4 | case5")
      ->required()
      ->check(CLI::IsMember({"mat", "alt", "v", "case4", "case5"}));
  mod->add_option("--params", params, "key=value list, e.g. n=4,m=2");
  mod->add_option("--n", n, "columns / size");
  mod->add_option("--m", m, "rows (mat) or symplectic dimension (v)");
  mod->add_option("--u", u, "shape offset u (limit laws); u1 for case5");
  mod->add_option("--u0", u0, "u0 for case5");
  mod->add_option("--j", j, "single kernel dimension");
  mod->add_option("--max-rank", max_rank, "truncation for limit laws");
  mod->add_option("--mc", mc_samples, "Monte-Carlo samples instead of exact values");
  mod->add_option("--seed", seed, "seed for Monte-Carlo runs");
  mod->add_option("--tail", tail, "print the tail exponent over [lo, hi]")->expected(2);
  mod->add_flag("--json", as_json, "JSON instead of CSV");

  // verify
  auto* ver = app.add_subcommand("verify", "Module lemmas by enumeration and moment identities");
  bool ver_quick = false;
  ver->add_flag("--quick", ver_quick, "smaller parameter ranges");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kPass;
    }
    err << json{{"error", e.what()}, {"kind", "usage"}}.dump() << '\n';
    return kUsage;
  }

  try {
    if (*cls) {
      json res = json::array();
      for (auto& c : cls_curves) {
        try {
          res.push_back(classify_json(c));
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
      out << (res.size() == 1 ? res[0] : res).dump(2) << '\n';
      return kPass;
    }

    if (*desc) {
      const CurveModel E = curve_or_usage(desc_curve);
      if (desc_d == 0) throw UsageError("--d must be nonzero");
      const SquareClass d = squarefree_kernel(static_cast<i64>(desc_d));
      if (d.to_i64() != desc_d) throw UsageError("--d must be squarefree");
      const harness::TwistAnalyzer an(E);
      const auto rec = an.analyze(desc_d);
      json jr = record_json(rec);
      const CaseLabel label = classify_case(E);
      std::vector<TwoIsogeny> isos = label.balanced.empty() ? enumerate_two_isogenies(E) : label.balanced;
      json sel = json::array();
      for (const auto& phi : isos) {
        for (const auto& iso : {phi, phi.dual()}) {
          IsogenyDescent D(iso);
          sel.push_back({{"source", curve_json(iso.source)},
                         {"target", curve_json(iso.target)},
                         {"kernel_x", iso.kernel_x.get_str()},
                         {"selmer", selmer_json(D.selmer(d))},
                         {"tamagawa", tamagawa_json(D.tamagawa(d))}});
        }
        if (!label.balanced.empty() && label.kind == Case::IV) break;
      }
      jr["isogeny_descents"] = sel;
      if (!isos.empty() && isos.front().kernel_model.roots)
        jr["two_selmer"] = selmer_json(TwoDescent(isos.front().kernel_model).selmer(d));
      out << jr.dump(2) << '\n';
      if (!rec.error.empty()) return kComputation;
      return rec.violations.empty() ? kPass : kVerification;
    }

    if (*sw) {
      const CurveModel E = curve_or_usage(sw_curve);
      if (sw_d0 && (*sw_d0 == 0 || squarefree_kernel(static_cast<i64>(*sw_d0)).to_i64() != *sw_d0))
        throw UsageError("--d0 must be a nonzero squarefree integer");
      if (sw_resume && sw_out.empty()) throw UsageError("--resume needs --out");
      harness::SweepOptions opts;
      opts.threads = sw_threads;
      opts.out_csv = sw_out;
      opts.resume = sw_resume;
      std::optional<i64> d0;
      if (sw_d0) d0 = static_cast<i64>(*sw_d0);
      harness::SweepResult res;
      try {
        res = harness::sweep(E, d0, static_cast<i64>(sw_H), opts);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const std::string rep = harness::report_json(res);
      if (sw_report.empty()) {
        out << rep << '\n';
      } else {
        std::ofstream f(sw_report);
        if (!f) throw std::runtime_error("cannot write " + sw_report);
        f << rep << '\n';
      }
      if (res.errors) return kComputation;
      return res.violation_total() ? kVerification : kPass;
    }

    if (*mod) {
      for (auto& [k, v] : parse_params(params)) {
        if (k == "n") n = v;
        else if (k == "m") m = v;
        else if (k == "u" || k == "u1") u = v;
        else if (k == "u0") u0 = v;
        else if (k == "j") j = v;
        else throw UsageError("--params: unknown key '" + k + "'");
      }
      if (mc_samples && !seed) throw UsageError("--mc needs --seed");
      const long top = max_rank.value_or(30);
      std::vector<std::array<std::string, 3>> rows;  // rank, probability, error
      std::vector<std::array<std::string, 3>> joint;  // r_phi, r2, probability
      rm::RankDistribution for_tail;
      auto emit_exact = [&](const std::vector<mpq_class>& probs) {
        for (std::size_t k = 0; k < probs.size(); ++k) {
          if (j ? static_cast<long>(k) != *j : probs[k] == 0) continue;
          rows.push_back({std::to_string(k), probs[k].get_str(), "0"});
          for_tail.probs[static_cast<long>(k)] = rm::to_real(probs[k]);
        }
      };
      auto emit_dist = [&](const rm::RankDistribution& d) {
        for (auto& [k, p] : d.probs) {
          if (j && k != *j) continue;
          auto e = d.errors.find(k);
          rows.push_back({std::to_string(k), fmt_real(p), fmt_real(e == d.errors.end() ? 0 : e->second)});
        }
        for_tail = d;
      };
      auto need = [&](const std::optional<long>& v, const char* name) {
        if (!v) throw UsageError(std::string("--dist ") + dist + " needs --" + name);
        if (*v < 0 && std::string(name) != "u") throw UsageError(std::string("--") + name + " must be >= 0");
        return *v;
      };
      if (dist == "mat") {
        if (m && n) {
          if (mc_samples) {
            emit_dist(rm::p_mat_monte_carlo(*m, *n, static_cast<std::size_t>(*mc_samples), Rng(*seed)));
          } else {
            std::vector<mpq_class> p;
            for (long k = 0; k <= *n; ++k) p.push_back(rm::p_mat_exact(k, *m, *n));
            emit_exact(p);
          }
        } else {
          emit_dist(rm::p_mat_limit_distribution(need(u, "u"), top));
        }
      } else if (dist == "alt") {
        const long nn = need(n, "n");
        if (mc_samples) {
          emit_dist(rm::p_alt_monte_carlo(nn, static_cast<std::size_t>(*mc_samples), Rng(*seed)));
        } else {
          std::vector<mpq_class> p;
          for (long k = 0; k <= nn; ++k) p.push_back(rm::p_alt_exact(k, nn));
          emit_exact(p);
        }
      } else if (dist == "v") {
        const long nn = need(n, "n"), mm = need(m, "m");
        if (mm % 2) throw UsageError("--m must be even for --dist v");
        if (mc_samples) emit_dist(rm::p_v_monte_carlo(nn, mm, static_cast<std::size_t>(*mc_samples), Rng(*seed)));
        else emit_exact(rm::p_v_distribution(nn, mm));
      } else {
        if (mc_samples) throw UsageError("--mc is not available for composed models");
        rm::JointDistribution J;
        if (dist == "case4") {
          J = rm::case_IV_r2_model(need(u, "u"), top);
        } else {
          const long uu0 = need(u0, "u0");
          if (uu0 % 2) throw UsageError("--u0 must be even");
          J = rm::case_V_r2_model(need(u, "u"), uu0, top);
        }
        for (auto& [k, p] : J.probs) joint.push_back({std::to_string(k.first), std::to_string(k.second), fmt_real(p)});
        for_tail = J.second();
      }

      json doc;
      if (tail) {
        const double s = rm::tail_exponent(for_tail, (*tail)[0], (*tail)[1]);
        doc["tail_exponent"] = s;
      }
      if (as_json) {
        json t = json::object();
        for (auto& r : rows) t[r[0]] = r[1];
        json jt = json::array();
        for (auto& r : joint) jt.push_back({{"r_phi", std::stol(r[0])}, {"r2", std::stol(r[1])}, {"probability", r[2]}});
        doc["dist"] = dist;
        if (!rows.empty()) doc["table"] = t;
        if (!joint.empty()) doc["joint"] = jt;
        out << doc.dump(2) << '\n';
      } else {
        if (!joint.empty()) {
          out << "r_phi,r2,probability\n";
          for (auto& r : joint) out << r[0] << ',' << r[1] << ',' << r[2] << '\n';
        } else {
          out << "rank,probability,error_bound\n";
          for (auto& r : rows) out << r[0] << ',' << r[1] << ',' << r[2] << '\n';
        }
        if (tail) out << "# tail_exponent," << doc["tail_exponent"].get<double>() << '\n';
      }
      return kPass;
    }

    if (*ver) {
      json checks = json::array();
      bool all = true;
      auto add = [&](json c) {
        all = all && c["verified"].get<bool>();
        checks.push_back(std::move(c));
      };
      const long cap = ver_quick ? 4 : 6;
      for (long a = 0; a <= cap; ++a)
        for (long b = 0; a + 2 * b <= cap; ++b) {
          auto r = galmod::verify_prop_IV_cofavored(a, b);
          json c{{"proposition", r.proposition}, {"parameters", r.parameters}, {"verified", r.verified}};
          if (r.counterexample) c["counterexample"] = subspace_json(*r.counterexample);
          add(c);
        }
      for (long a = 0; a <= cap; ++a)
        for (long b = 0; a + b <= cap; ++b)
          for (long c3 = 0; a + b + 2 * c3 <= cap; ++c3) {
            auto r = galmod::verify_prop_V_cofavored(a, b, c3);
            json c{{"proposition", r.proposition}, {"parameters", r.parameters}, {"verified", r.verified}};
            if (r.counterexample) c["counterexample"] = subspace_json(*r.counterexample);
            add(c);
          }
      {
        auto h = galmod::classify_equivariant_homs();
        std::vector<std::size_t> got(h.nonzero_counts.begin(), h.nonzero_counts.end());
        add({{"proposition", "equivariant_homs"},
             {"parameters", json::array()},
             {"counts", got},
             {"verified", got == std::vector<std::size_t>{1, 1, 1, 0}}});
      }
      for (long uu = -2; uu <= 2; ++uu)
        for (long a = 0; a <= 3; ++a)
          for (long b = 0; b <= 3; ++b) {
            auto mm = rm::moment_mu_IV(a, b, uu);
            const rm::Real t = rm::moment_mu_IV_target(a, b, uu);
            const double rel = static_cast<double>(std::fabs(mm.value / t - 1));
            add({{"proposition", "moment_IV"}, {"parameters", {a, b, uu}}, {"relative_error", rel}, {"verified", rel < 1e-6}});
          }
      for (long L = 0; L <= 4; ++L)
        for (const auto& lam : gf2::enumerate_subspaces_uncapped(static_cast<std::size_t>(L)))
          for (std::size_t d = lam.dim(); d <= 3; ++d)
            for (long uu = -2; uu <= 2; ++uu) {
              auto mm = rm::moment_mu_V(rm::ObjD{d, lam}, uu, L);
              const rm::Real t = rm::moment_mu_V_target(d, uu, L);
              const double rel = static_cast<double>(std::fabs(mm.value / t - 1));
              add({{"proposition", "moment_V"},
                   {"parameters", {static_cast<long>(d), static_cast<long>(lam.dim()), uu, L}},
                   {"relative_error", rel},
                   {"verified", rel < 1e-6}});
            }
      std::size_t failed = 0;
      for (auto& c : checks) failed += !c["verified"].get<bool>();
      out << json{{"checks", checks.size()}, {"failed", failed}, {"passed", all}, {"details", checks}}.dump(2) << '\n';
      return all ? kPass : kVerification;
    }
  } catch (const UsageError& e) {
    err << json{{"error", e.what()}, {"kind", "usage"}}.dump() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << json{{"error", e.what()}, {"kind", "usage"}}.dump() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << json{{"error", e.what()}, {"kind", "computation"}}.dump() << '\n';
    return kComputation;
  }
  return kUsage;
}

}  // namespace twistsel::cli
