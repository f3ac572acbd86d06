#pragma once

// Monte Carlo and exact estimators built on the emptiness solver.
//
// Every stochastic routine takes (trials, seed, threads). Trial t draws from
// stream_rng(seed, <tag>, t) and writes only its own slot; aggregation is by
// integer counts, so results do not depend on the thread count.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perclab/encoding.hpp"
#include "perclab/hypercube.hpp"
#include "perclab/parallel.hpp"
#include "perclab/sat_engine.hpp"

namespace perclab {

inline constexpr double kWilsonZ = 1.959963984540054;

struct WilsonInterval {
  double lo;
  double hi;
};

WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kWilsonZ);

/// A Bernoulli proportion with its 95% Wilson interval.
struct ProportionEstimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;

  static ProportionEstimate from_counts(std::uint64_t hits, std::uint64_t trials);
  /// sqrt(estimate (1 - estimate) / trials).
  [[nodiscard]] double standard_error() const;
};

struct CurvePoint {
  double p;
  std::uint64_t trials;
  std::uint64_t empty_hits;
  double theta_hat;
  double ci_lo;
  double ci_hi;
};

/// Critical arrival levels of `trials` independent arrival streams (see
/// critical_level). One set of levels answers the emptiness question at
/// every p simultaneously, which couples all curve points and bisection
/// steps on common random numbers.
std::vector<double> critical_levels(const ModelParams& params, std::uint64_t trials, std::uint64_t seed,
                                    unsigned threads, double max_level = std::numeric_limits<double>::infinity());

std::vector<CurvePoint> estimate_curve(const ModelParams& params, const std::vector<double>& ps,
                                       std::uint64_t trials, std::uint64_t seed, unsigned threads = default_threads());

/// Empirical emptiness curve p -> #{levels <= -ln(1-p)} / trials.
class EmpiricalCurve {
 public:
  explicit EmpiricalCurve(std::vector<double> levels);
  [[nodiscard]] std::uint64_t hits(double p) const;
  [[nodiscard]] std::uint64_t trials() const noexcept { return levels_.size(); }
  [[nodiscard]] CurvePoint at(double p) const;

 private:
  std::vector<double> levels_;  // sorted
};

inline constexpr double kBracketTolerance = 0.02;

struct ThresholdEstimate {
  double theta;
  double p_hat;
  double p_lo;
  double p_hi;
  std::uint64_t trials_per_eval;
  std::uint64_t seed;
  double theta_lo;  // empirical curve at p_lo (< theta)
  double theta_hi;  // empirical curve at p_hi (>= theta)
  /// Whether the Wilson intervals at p_lo and p_hi exclude theta from
  /// below and above respectively. Reported, not required for stopping.
  bool separated;
  unsigned evaluations;
};

/// Bisection on a fixed empirical curve: keeps curve(p_lo) < theta <=
/// curve(p_hi), starting from n 2^-n and doubling or halving until bracketed,
/// then halving the bracket until (p_hi - p_lo)/p_lo <= tolerance. Returns
/// the bracket midpoint. Final brackets are cells of one fixed partition of
/// (0, 1], so estimates for different theta on one curve are nested.
ThresholdEstimate bisect_threshold(const EmpiricalCurve& curve, unsigned n, double theta, std::uint64_t seed,
                                   double tolerance = kBracketTolerance);

ThresholdEstimate find_threshold(const ModelParams& params, double theta, std::uint64_t trials_per_eval,
                                 std::uint64_t seed, unsigned threads = default_threads());

struct SharpnessEstimate {
  double eps;
  ThresholdEstimate lower;  // theta = eps
  ThresholdEstimate upper;  // theta = 1 - eps
  double ratio;             // upper.p_hat / lower.p_hat
};

SharpnessEstimate sharpness_window(const ModelParams& params, double eps, std::uint64_t trials_per_eval,
                                   std::uint64_t seed, unsigned threads = default_threads());

/// Largest n for which every disorder is enumerated (2^(2^n) of them).
inline constexpr unsigned kMaxEnumerationN = 4;

/// E_p[f] and the pivotal mass as polynomials in p, tabulated by enumerating
/// every subset of the 2^n centers.
class ExactEmptiness {
 public:
  explicit ExactEmptiness(const ModelParams& params);

  [[nodiscard]] unsigned population() const noexcept { return population_; }
  /// Number of disorders of each size that make the intersection empty.
  [[nodiscard]] const std::vector<std::uint64_t>& empty_by_size() const noexcept { return empty_by_size_; }
  [[nodiscard]] double probability(double p) const;
  /// Sum over centers of P_p(center is pivotal).
  [[nodiscard]] double pivotal_mass(double p) const;
  /// 2p(1-p) times the pivotal mass.
  [[nodiscard]] double influence(double p) const;

 private:
  [[nodiscard]] double evaluate(const std::vector<std::uint64_t>& by_size, double p) const;

  unsigned population_;
  std::vector<std::uint64_t> empty_by_size_;
  std::vector<std::uint64_t> pivotal_by_size_;
};

enum class InfluenceMethod { kExactEnumeration, kPivotalMc };

const char* to_string(InfluenceMethod method);

struct InfluenceEstimate {
  double p;
  double i_hat;
  InfluenceMethod method;
  double standard_error;
  std::uint64_t trials;
};

InfluenceEstimate influence_exact(const ModelParams& params, double p);

/// Number of pivotal centers of one disorder: inactive x is pivotal iff the
/// intersection A is nonempty and misses H(x); active x is pivotal iff A is
/// empty but becomes nonempty without x.
std::uint64_t count_pivotal(const Disorder& d);

InfluenceEstimate influence_mc(const ModelParams& params, double p, std::uint64_t trials, std::uint64_t seed,
                               unsigned threads = default_threads());

struct MargulisRussoRecord {
  double p;
  double dp;
  double lhs;  // central difference of exact E_p[f]
  double rhs;  // I_f(p) / (2p(1-p))
  double gap;
};

MargulisRussoRecord margulis_russo_check(const ModelParams& params, double p, double dp);

/// Whether some y in `a` (sorted codes) lies in every H(centers[i]).
bool intersects_all(std::span<const std::uint64_t> a, std::span<const std::uint64_t> centers,
                    const ModelParams& params);

/// Probability over i.i.d. uniform Y = (Y_1..Y_k) that A misses
/// the intersection of H(f_i(Y)), with f = gentle_apply(map, .).
ProportionEstimate q_of_A(const ModelParams& params, std::span<const std::uint64_t> a, const GentleMap& map,
                          std::uint64_t trials, std::uint64_t seed, unsigned threads = default_threads());

struct RemovalExperimentParams {
  unsigned k;
  unsigned n_star;
  double q_threshold;
  std::uint64_t trials;

  /// n_star = floor(n / sqrt(ln n)), q_threshold = (ln n)^(-1/3).
  static RemovalExperimentParams for_dimension(unsigned n, unsigned k, std::uint64_t trials);
  [[nodiscard]] std::uint64_t budget() const { return std::uint64_t{k} * n_star; }
};

void validate(const RemovalExperimentParams& rp, unsigned n);

struct RemovalResult {
  ProportionEstimate q;
  ProportionEstimate removal;  // at the full budget k * n_star
  /// removal_curve_hits[b - 1]: trials in which the first b uniform
  /// half-cubes already empty A. Nondecreasing in b by construction.
  std::vector<std::uint64_t> removal_curve_hits;
  /// Fitted c in removal >= 1 - exp(-c q n_star); +inf when removal = 1.
  double c_hat;
};

RemovalResult removal_experiment(const ModelParams& params, std::span<const std::uint64_t> a, const GentleMap& map,
                                 const RemovalExperimentParams& rp, std::uint64_t seed,
                                 unsigned threads = default_threads());

/// Estimate of P_p(emptiness | the centers in `forced` are active) from
/// fresh Bernoulli(p) disorders.
ProportionEstimate conditional_emptiness(const ModelParams& params, double p, std::span<const std::uint64_t> forced,
                                         std::uint64_t trials, std::uint64_t seed,
                                         unsigned threads = default_threads());

struct BoostingCertificate {
  std::vector<SpinVector> set;
  double delta;
  double confidence;
  std::uint64_t trials;
  ProportionEstimate estimate;
};

/// Greedy forward selection over d's active centers. Certification is at
/// the given p (the disorder's own selection probability).
std::optional<BoostingCertificate> boosting_search(const Disorder& d, double p, double delta, unsigned k_max,
                                                   std::uint64_t trials, std::uint64_t seed,
                                                   unsigned threads = default_threads());

struct AngleScanRow {
  unsigned m;
  std::uint64_t samples;
  std::uint64_t max_diff;
  double max_ratio;
};

/// For each distance m, the largest |H(x) \ H(y)| / (sqrt(m ln n / n) 2^n)
/// over sampled pairs at Hamming distance m.
std::vector<AngleScanRow> angle_scan(const ModelParams& params, const std::vector<unsigned>& dists,
                                     std::uint64_t samples, std::uint64_t seed, unsigned threads = default_threads());

struct AdmissibilityRow {
  double c2;
  std::uint64_t samples;
  std::uint64_t inadmissible;
};

/// Inadmissibility counts of i.i.d. uniform k-sequences, one row per c2;
/// every row is evaluated on the same sequences.
std::vector<AdmissibilityRow> admissibility_scan(unsigned n, unsigned k, const std::vector<double>& c2s,
                                                 std::uint64_t samples, std::uint64_t seed,
                                                 unsigned threads = default_threads());

/// Uniform sequence of k vectors in dimension n.
SpinSequence random_sequence(unsigned n, unsigned k, Rng& rng);

}  // namespace perclab
