#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twistsel/arith.hpp"
#include "twistsel/curves.hpp"
#include "twistsel/randmodel.hpp"

namespace twistsel::harness {

// d lies in the class of d0 iff d is squarefree, has the sign of d0, and d*d0 is a local
// square at 2 and at every odd bad prime.
struct TwistClassSpec {
  SquareClass d0;
  std::vector<Place> places;  // infinity, 2, odd bad primes

  static TwistClassSpec make(const CurveModel& E, i64 d0);
  bool contains(i64 d) const;  // d assumed squarefree
  // Tuple of local classes, usable as a map key.
  std::vector<unsigned> key(i64 d) const;
};

std::vector<i64> squarefree_up_to(i64 H);  // -H..H, ascending, zero excluded
std::vector<i64> enumerate_twist_class(const TwistClassSpec& spec, i64 H);

struct TwistRecord {
  i64 d = 0;
  i64 class_d0 = 0;  // smallest-magnitude member of the class of d (ties: positive)
  Case kind = Case::I;
  std::size_t dim_sel_phi1 = 0, dim_sel_phi1_dual = 0, dim_sel_phi2 = 0, dim_sel_phi2_dual = 0, dim_sel2 = 0;
  long r_phi1 = 0, r_phi1_dual = 0, r2 = 0;
  int u1 = 0, u2 = 0, u0 = 0;
  long defect = 0;
  std::size_t loc_image_dim = 0, L_dim = 0;
  std::size_t tors_phi1 = 0;     // dim of the torsion image inside Sel^phi1
  std::size_t sel2_image = 0;    // dim of the image of Sel^2 in Sel^phi1' modulo torsion
  bool has_r2 = false;
  bool has_phi2 = false;
  bool degenerate = false;
  std::vector<std::string> violations;
  std::string error;

  bool usable() const { return error.empty() && !degenerate; }
};

struct ClassSummary {
  i64 d0 = 0;
  int u1 = 0, u2 = 0;
  std::size_t count = 0, flagged = 0, errors = 0;
};

struct SweepOptions {
  unsigned threads = 1;
  std::string out_csv;                  // empty: keep records in memory only
  bool resume = false;
  std::size_t block = 256;              // twists per checkpoint
  std::optional<std::size_t> stop_after;  // new records; for interruption tests
};

struct SweepResult {
  CurveModel curve;
  Case kind = Case::I;
  i64 H = 0;
  std::optional<i64> d0;  // empty: every twist class
  std::vector<TwistRecord> records;  // ascending d
  std::map<i64, ClassSummary> classes;
  std::map<std::string, std::size_t> violations;
  std::size_t flagged = 0, errors = 0, resumed = 0;
  bool complete = false;
  double seconds = 0;

  randmodel::RankDistribution empirical_r_phi(std::optional<i64> class_d0 = std::nullopt) const;
  randmodel::JointDistribution empirical_joint(std::optional<i64> class_d0 = std::nullopt) const;
  // Case V: distribution of dim(localization image) given r_phi1'.
  std::map<long, std::map<std::size_t, std::size_t>> loc_image_given_r_phi1_dual() const;
  std::size_t violation_total() const;
};

// Full descent record for one twist. Per-twist failures land in record.error.
class TwistAnalyzer {
 public:
  explicit TwistAnalyzer(const CurveModel& E);
  ~TwistAnalyzer();
  TwistAnalyzer(const TwistAnalyzer&) = delete;
  TwistAnalyzer& operator=(const TwistAnalyzer&) = delete;
  Case kind() const;
  TwistRecord analyze(i64 d) const;

 private:
  struct Impl;
  Impl* impl_;
};

// d0 given: that class only; otherwise every class with a member of magnitude <= H.
SweepResult sweep(const CurveModel& E, std::optional<i64> d0, i64 H, const SweepOptions& opts = {});

struct MomentEstimate {
  long a = 0, b = 0;
  double estimate = 0;
  double target = 0;
  std::size_t samples = 0;
  bool proxy = true;
};
MomentEstimate estimate_moments(const SweepResult& result, long a, long b, std::optional<i64> class_d0 = std::nullopt);

struct Comparison {
  double tv_distance = 0;
  double chi_square = 0;
  struct Row {
    long rank;
    double empirical, model, delta;
  };
  std::vector<Row> table;
};
Comparison compare(const randmodel::RankDistribution& emp, const randmodel::RankDistribution& model);

// CSV per twist; the declared columns come first, extra columns after flags.
std::string csv_header();
std::string to_csv(const TwistRecord& r);
std::optional<TwistRecord> from_csv(const std::string& line);
std::string distribution_csv(const randmodel::RankDistribution& d);

// {curve, d0, H, counts, empirical_dists, model_dists, tv_distances, invariant_violations}
std::string report_json(const SweepResult& result);

}  // namespace twistsel::harness
