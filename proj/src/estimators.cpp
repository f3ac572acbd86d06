#include "perclab/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace perclab {
namespace {

void require_probability(double p, const char* where) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(where) + ": probability outside [0,1]");
}

void require_trials(std::uint64_t trials, const char* where) {
  if (trials == 0) throw std::invalid_argument(std::string(where) + ": trials must be >= 1");
}

std::uint64_t cube_size(unsigned n) { return std::uint64_t{1} << n; }

void require_codes(std::span<const std::uint64_t> codes, unsigned n, const char* where) {
  for (auto c : codes) {
    if (c >= cube_size(n)) throw std::invalid_argument(std::string(where) + ": code outside the cube");
  }
}

std::uint64_t count_true(const std::vector<std::uint8_t>& flags) {
  return static_cast<std::uint64_t>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
}

}  // namespace

WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double t = static_cast<double>(trials);
  const double phat = static_cast<double>(hits) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double center = (phat + z2 / (2.0 * t)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
  return {std::clamp(center - half, 0.0, phat), std::clamp(center + half, phat, 1.0)};
}

ProportionEstimate ProportionEstimate::from_counts(std::uint64_t hits, std::uint64_t trials) {
  const auto ci = wilson_interval(hits, trials);
  const double est = trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
  return {hits, trials, est, ci.lo, ci.hi};
}

double ProportionEstimate::standard_error() const {
  return trials ? std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(trials)) : 0.0;
}

// ---------------------------------------------------------------------------
// Curves and thresholds

std::vector<double> critical_levels(const ModelParams& params, std::uint64_t trials, std::uint64_t seed,
                                    unsigned threads, double max_level) {
  require_exact_regime(params.n(), "critical_levels");
  std::vector<double> levels(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    ArrivalStream stream(params.n(), stream_rng(seed, Stream::kArrivals, t));
    levels[t] = critical_level(params, stream, max_level);
  });
  return levels;
}

EmpiricalCurve::EmpiricalCurve(std::vector<double> levels) : levels_(std::move(levels)) {
  std::sort(levels_.begin(), levels_.end());
}

std::uint64_t EmpiricalCurve::hits(double p) const {
  // +inf marks "never empty", which must not count even at p = 1.
  const auto finite_end = std::lower_bound(levels_.begin(), levels_.end(), std::numeric_limits<double>::infinity());
  const auto upto = std::upper_bound(levels_.begin(), finite_end, arrival_level(p));
  return static_cast<std::uint64_t>(upto - levels_.begin());
}

CurvePoint EmpiricalCurve::at(double p) const {
  const auto est = ProportionEstimate::from_counts(hits(p), trials());
  return {p, est.trials, est.hits, est.estimate, est.ci_lo, est.ci_hi};
}

std::vector<CurvePoint> estimate_curve(const ModelParams& params, const std::vector<double>& ps,
                                       std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  require_trials(trials, "estimate_curve");
  double p_max = 0.0;
  for (double p : ps) {
    require_probability(p, "estimate_curve");
    p_max = std::max(p_max, p);
  }
  const EmpiricalCurve curve(critical_levels(params, trials, seed, threads, arrival_level(p_max)));
  std::vector<CurvePoint> out;
  out.reserve(ps.size());
  for (double p : ps) out.push_back(curve.at(p));
  return out;
}

ThresholdEstimate bisect_threshold(const EmpiricalCurve& curve, unsigned n, double theta, std::uint64_t seed,
                                   double tolerance) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("find_threshold: theta must lie in (0,1)");
  if (!(tolerance > 0.0)) throw std::invalid_argument("find_threshold: tolerance must be positive");
  const double trials = static_cast<double>(curve.trials());
  unsigned evaluations = 0;
  auto reaches = [&](double p) {
    ++evaluations;
    return static_cast<double>(curve.hits(p)) / trials >= theta;
  };

  const double start = std::min(1.0, std::ldexp(static_cast<double>(n), -static_cast<int>(n)));
  double lo = start;
  double hi = start;
  if (reaches(start)) {
    lo = start / 2.0;
    while (reaches(lo)) {
      hi = lo;
      lo /= 2.0;
      if (lo == 0.0) throw std::runtime_error("find_threshold: curve reaches theta at every p > 0");
    }
  } else {
    hi = std::min(1.0, 2.0 * start);
    while (!reaches(hi)) {
      if (hi == 1.0) {
        throw std::runtime_error("find_threshold: emptiness frequency at p = 1 stays below theta; no bracket in [0,1]");
      }
      lo = hi;
      hi = std::min(1.0, 2.0 * hi);
    }
  }
  while ((hi - lo) / lo > tolerance) {
    const double mid = lo + (hi - lo) / 2.0;
    if (reaches(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const auto at_lo = curve.at(lo);
  const auto at_hi = curve.at(hi);
  ThresholdEstimate est{};
  est.theta = theta;
  est.p_hat = lo + (hi - lo) / 2.0;
  est.p_lo = lo;
  est.p_hi = hi;
  est.trials_per_eval = curve.trials();
  est.seed = seed;
  est.theta_lo = at_lo.theta_hat;
  est.theta_hi = at_hi.theta_hat;
  est.separated = at_lo.ci_hi < theta && at_hi.ci_lo > theta;
  est.evaluations = evaluations;
  return est;
}

ThresholdEstimate find_threshold(const ModelParams& params, double theta, std::uint64_t trials_per_eval,
                                 std::uint64_t seed, unsigned threads) {
  require_trials(trials_per_eval, "find_threshold");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("find_threshold: theta must lie in (0,1)");
  const EmpiricalCurve curve(critical_levels(params, trials_per_eval, seed, threads));
  return bisect_threshold(curve, params.n(), theta, seed);
}

SharpnessEstimate sharpness_window(const ModelParams& params, double eps, std::uint64_t trials_per_eval,
                                   std::uint64_t seed, unsigned threads) {
  require_trials(trials_per_eval, "sharpness_window");
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("sharpness_window: eps must lie in (0, 1/2)");
  const EmpiricalCurve curve(critical_levels(params, trials_per_eval, seed, threads));
  SharpnessEstimate out{eps, bisect_threshold(curve, params.n(), eps, seed),
                        bisect_threshold(curve, params.n(), 1.0 - eps, seed), 0.0};
  out.ratio = out.upper.p_hat / out.lower.p_hat;
  return out;
}

// ---------------------------------------------------------------------------
// Exact enumeration and influence

ExactEmptiness::ExactEmptiness(const ModelParams& params) {
  const unsigned n = params.n();
  if (n > kMaxEnumerationN) {
    throw ExactRegimeError("exact disorder enumeration needs n <= " + std::to_string(kMaxEnumerationN) +
                           "; use the Monte Carlo estimators");
  }
  population_ = 1U << n;
  const std::uint32_t full = (population_ == 32 ? ~0U : (1U << population_) - 1U);

  // h[x] = bitmask over y of H(x).
  std::vector<std::uint32_t> h(population_, 0);
  for (std::uint32_t x = 0; x < population_; ++x) {
    for (std::uint32_t y = 0; y < population_; ++y) {
      if (params.admits(bits::dot(x, y, n))) h[x] |= 1U << y;
    }
  }
  const std::uint64_t subsets = std::uint64_t{1} << population_;
  std::vector<std::uint32_t> inter(subsets);
  inter[0] = full;
  for (std::uint64_t s = 1; s < subsets; ++s) inter[s] = inter[s & (s - 1)] & h[std::countr_zero(s)];

  empty_by_size_.assign(population_ + 1, 0);
  pivotal_by_size_.assign(population_ + 1, 0);
  for (std::uint64_t s = 0; s < subsets; ++s) {
    const auto size = std::popcount(s);
    if (inter[s] == 0) ++empty_by_size_[size];
    for (unsigned x = 0; x < population_; ++x) {
      const std::uint64_t bit = std::uint64_t{1} << x;
      if ((inter[s | bit] == 0) != (inter[s & ~bit] == 0)) ++pivotal_by_size_[size];
    }
  }
}

double ExactEmptiness::evaluate(const std::vector<std::uint64_t>& by_size, double p) const {
  double total = 0.0;
  for (unsigned k = 0; k <= population_; ++k) {
    if (by_size[k] == 0) continue;
    total += static_cast<double>(by_size[k]) * std::pow(p, k) * std::pow(1.0 - p, population_ - k);
  }
  return total;
}

double ExactEmptiness::probability(double p) const { return evaluate(empty_by_size_, p); }
double ExactEmptiness::pivotal_mass(double p) const { return evaluate(pivotal_by_size_, p); }
double ExactEmptiness::influence(double p) const { return 2.0 * p * (1.0 - p) * pivotal_mass(p); }

const char* to_string(InfluenceMethod method) {
  return method == InfluenceMethod::kExactEnumeration ? "exact_enumeration" : "pivotal_mc";
}

InfluenceEstimate influence_exact(const ModelParams& params, double p) {
  require_probability(p, "influence_exact");
  const ExactEmptiness exact(params);
  return {p, exact.influence(p), InfluenceMethod::kExactEnumeration, 0.0, 0};
}

std::uint64_t count_pivotal(const Disorder& d) {
  const auto& params = d.params();
  const unsigned n = params.n();
  if (n > 20) throw ExactRegimeError("count_pivotal: pivotal counting needs n <= 20");
  const int max_flips = params.max_flips();
  const auto a = solution_set(d);
  const std::uint64_t total = cube_size(n);

  if (!a.empty()) {
    // Inactive x is pivotal iff no member of A lies within max_flips of x:
    // multi-source BFS gives every code's distance to A.
    if (max_flips >= static_cast<int>(n)) return 0;
    std::vector<std::uint8_t> dist(total, 0xFF);
    std::vector<std::uint32_t> frontier(a.begin(), a.end());
    for (auto y : a) dist[y] = 0;
    for (std::uint8_t level = 0; !frontier.empty() && level <= max_flips; ++level) {
      std::vector<std::uint32_t> next;
      for (auto z : frontier) {
        for (unsigned i = 0; i < n; ++i) {
          const std::uint32_t w = z ^ (1U << i);
          if (dist[w] == 0xFF) {
            dist[w] = static_cast<std::uint8_t>(level + 1);
            next.push_back(w);
          }
        }
      }
      frontier = std::move(next);
    }
    std::uint64_t pivotal = 0;
    for (std::uint64_t x = 0; x < total; ++x) {
      if (static_cast<int>(dist[x]) > max_flips && !d.contains(x)) ++pivotal;
    }
    return pivotal;
  }

  // A is empty: active x is pivotal iff some y violates x and nothing else.
  const auto active = d.active();
  std::vector<std::uint8_t> pivotal(active.size(), 0);
  for (std::uint64_t y = 0; y < total; ++y) {
    std::size_t violator = active.size();
    unsigned violations = 0;
    for (std::size_t i = 0; i < active.size() && violations < 2; ++i) {
      if (std::popcount(active[i] ^ y) > max_flips) {
        violator = i;
        ++violations;
      }
    }
    if (violations == 1) pivotal[violator] = 1;
  }
  return count_true(pivotal);
}

InfluenceEstimate influence_mc(const ModelParams& params, double p, std::uint64_t trials, std::uint64_t seed,
                               unsigned threads) {
  require_probability(p, "influence_mc");
  require_trials(trials, "influence_mc");
  if (params.n() > 20) throw ExactRegimeError("influence_mc: pivotal counting needs n <= 20");
  std::vector<std::uint64_t> counts(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto rng = stream_rng(seed, Stream::kDisorder, t);
    counts[t] = count_pivotal(sample_disorder(params, p, rng));
  });
  std::uint64_t sum = 0;
  unsigned __int128 sum_sq = 0;
  for (auto c : counts) {
    sum += c;
    sum_sq += static_cast<unsigned __int128>(c) * c;
  }
  const long double t = static_cast<long double>(trials);
  const long double mean = static_cast<long double>(sum) / t;
  long double var = 0.0L;
  if (trials > 1) var = (static_cast<long double>(sum_sq) - t * mean * mean) / (t - 1.0L);
  const double scale = 2.0 * p * (1.0 - p);
  return {p, scale * static_cast<double>(mean), InfluenceMethod::kPivotalMc,
          scale * static_cast<double>(std::sqrt(std::max(0.0L, var) / t)), trials};
}

MargulisRussoRecord margulis_russo_check(const ModelParams& params, double p, double dp) {
  if (!(dp != 0.0) || !(p - std::fabs(dp) > 0.0) || !(p + std::fabs(dp) < 1.0)) {
    throw std::invalid_argument("mr-check: need dp != 0 and 0 < p - |dp| < p + |dp| < 1");
  }
  const ExactEmptiness exact(params);
  const double lhs = (exact.probability(p + dp) - exact.probability(p - dp)) / (2.0 * dp);
  const double rhs = exact.pivotal_mass(p);  // I_f(p) / (2p(1-p))
  return {p, dp, lhs, rhs, std::fabs(lhs - rhs)};
}

// ---------------------------------------------------------------------------
// q(A) and the removal experiment

bool intersects_all(std::span<const std::uint64_t> a, std::span<const std::uint64_t> centers,
                    const ModelParams& params) {
  const int max_flips = params.max_flips();
  return std::any_of(a.begin(), a.end(), [&](std::uint64_t y) {
    return std::all_of(centers.begin(), centers.end(),
                       [&](std::uint64_t x) { return std::popcount(x ^ y) <= max_flips; });
  });
}

SpinSequence random_sequence(unsigned n, unsigned k, Rng& rng) {
  std::vector<SpinVector> vectors;
  vectors.reserve(k);
  const std::size_t words = (n + SpinVector::kWordBits - 1) / SpinVector::kWordBits;
  for (unsigned i = 0; i < k; ++i) {
    std::vector<std::uint64_t> w(words);
    for (auto& x : w) x = rng();
    if (n % SpinVector::kWordBits) w.back() &= (std::uint64_t{1} << (n % SpinVector::kWordBits)) - 1;
    vectors.push_back(SpinVector::from_words(n, std::move(w)));
  }
  return SpinSequence(std::move(vectors));
}

ProportionEstimate q_of_A(const ModelParams& params, std::span<const std::uint64_t> a, const GentleMap& map,
                          std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  const unsigned n = params.n();
  require_trials(trials, "q_of_A");
  require_exact_regime(n, "q_of_A");
  if (map.reference().n() != n) throw std::invalid_argument("q_of_A: map dimension differs from the model");
  require_codes(a, n, "q_of_A");
  const unsigned k = map.reference().k();
  std::vector<std::uint8_t> missed(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto rng = stream_rng(seed, Stream::kVectors, t);
    const auto fy = gentle_apply(map, random_sequence(n, k, rng));
    std::vector<std::uint64_t> centers(k);
    for (unsigned i = 0; i < k; ++i) centers[i] = fy[i].code();
    missed[t] = !intersects_all(a, centers, params);
  });
  return ProportionEstimate::from_counts(count_true(missed), trials);
}

RemovalExperimentParams RemovalExperimentParams::for_dimension(unsigned n, unsigned k, std::uint64_t trials) {
  if (n < 2) throw std::invalid_argument("removal: n_star = floor(n / sqrt(ln n)) needs n >= 2");
  const double log_n = std::log(static_cast<double>(n));
  return {k, static_cast<unsigned>(std::floor(n / std::sqrt(log_n))), std::pow(log_n, -1.0 / 3.0), trials};
}

void validate(const RemovalExperimentParams& rp, unsigned n) {
  if (rp.k == 0) throw std::invalid_argument("removal: k must be >= 1");
  if (rp.n_star == 0) throw std::invalid_argument("removal: n_star must be >= 1");
  require_trials(rp.trials, "removal");
  if (n < 64 && rp.budget() > cube_size(n)) throw std::invalid_argument("removal: k * n_star exceeds 2^n");
}

RemovalResult removal_experiment(const ModelParams& params, std::span<const std::uint64_t> a, const GentleMap& map,
                                 const RemovalExperimentParams& rp, std::uint64_t seed, unsigned threads) {
  const unsigned n = params.n();
  validate(rp, n);
  RemovalResult out;
  out.q = q_of_A(params, a, map, rp.trials, seed, threads);

  // first[t] = number of uniform half-cubes after which A is empty
  // (budget + 1 if the full budget does not suffice).
  const std::uint64_t budget = rp.budget();
  const int max_flips = params.max_flips();
  std::vector<std::uint64_t> first(rp.trials);
  parallel_for(rp.trials, threads, [&](std::size_t t) {
    auto rng = stream_rng(seed, Stream::kRemoval, t);
    std::vector<std::uint64_t> survivors(a.begin(), a.end());
    std::uint64_t b = 0;
    while (!survivors.empty() && b < budget) {
      const std::uint64_t x = uniform_below(rng, cube_size(n));
      std::erase_if(survivors, [&](std::uint64_t y) { return std::popcount(x ^ y) > max_flips; });
      ++b;
    }
    first[t] = survivors.empty() ? b : budget + 1;
  });
  out.removal_curve_hits.assign(budget, 0);
  for (auto f : first) {
    if (f <= budget) ++out.removal_curve_hits[f == 0 ? 0 : f - 1];
  }
  std::partial_sum(out.removal_curve_hits.begin(), out.removal_curve_hits.end(), out.removal_curve_hits.begin());
  out.removal = ProportionEstimate::from_counts(budget ? out.removal_curve_hits.back() : 0, rp.trials);
  const double denom = out.q.estimate * rp.n_star;
  out.c_hat = out.removal.estimate >= 1.0 ? std::numeric_limits<double>::infinity()
              : denom > 0.0              ? -std::log1p(-out.removal.estimate) / denom
                                         : std::numeric_limits<double>::quiet_NaN();
  return out;
}

// ---------------------------------------------------------------------------
// Boosting sets

ProportionEstimate conditional_emptiness(const ModelParams& params, double p, std::span<const std::uint64_t> forced,
                                         std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  require_probability(p, "conditional_emptiness");
  require_trials(trials, "conditional_emptiness");
  require_codes(forced, params.n(), "conditional_emptiness");
  std::vector<std::uint8_t> empty(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto rng = stream_rng(seed, Stream::kDisorder, t);
    const auto d = sample_disorder(params, p, rng);
    std::vector<std::uint64_t> centers(d.active().begin(), d.active().end());
    centers.insert(centers.end(), forced.begin(), forced.end());
    empty[t] = is_empty(Disorder(params, std::move(centers)));
  });
  return ProportionEstimate::from_counts(count_true(empty), trials);
}

std::optional<BoostingCertificate> boosting_search(const Disorder& d, double p, double delta, unsigned k_max,
                                                   std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  const auto& params = d.params();
  const unsigned n = params.n();
  require_probability(p, "boosting_search");
  require_trials(trials, "boosting_search");
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("boosting_search: delta outside [0,1]");
  require_exact_regime(n, "boosting_search");
  const int max_flips = params.max_flips();

  // Survivors of each fresh disorder; candidate sets only shrink them.
  std::vector<std::vector<std::uint32_t>> survivors(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto rng = stream_rng(seed, Stream::kDisorder, t);
    const auto a = solution_set(sample_disorder(params, p, rng));
    survivors[t].assign(a.begin(), a.end());
  });
  auto empties = [&] {
    return static_cast<std::uint64_t>(
        std::count_if(survivors.begin(), survivors.end(), [](const auto& s) { return s.empty(); }));
  };

  std::vector<SpinVector> chosen;
  auto certificate = [&](ProportionEstimate est) -> std::optional<BoostingCertificate> {
    if (est.ci_lo >= 1.0 - delta) return BoostingCertificate{chosen, delta, 0.95, trials, est};
    return std::nullopt;
  };
  if (auto c = certificate(ProportionEstimate::from_counts(empties(), trials))) return c;

  std::vector<std::uint64_t> candidates(d.active().begin(), d.active().end());
  auto misses = [&](std::uint64_t x, const std::vector<std::uint32_t>& s) {
    return std::none_of(s.begin(), s.end(), [&](std::uint32_t y) { return std::popcount(x ^ y) <= max_flips; });
  };
  for (unsigned step = 0; step < k_max && !candidates.empty(); ++step) {
    std::vector<std::uint64_t> score(candidates.size());
    parallel_for(candidates.size(), threads, [&](std::size_t c) {
      std::uint64_t hits = 0;
      for (const auto& s : survivors) hits += misses(candidates[c], s);
      score[c] = hits;
    });
    // Highest score; ties go to the smallest code (candidates are sorted).
    const auto best = static_cast<std::size_t>(std::max_element(score.begin(), score.end()) - score.begin());
    const std::uint64_t x = candidates[best];
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best));
    chosen.push_back(SpinVector::from_code(n, x));
    for (auto& s : survivors) std::erase_if(s, [&](std::uint32_t y) { return std::popcount(x ^ y) > max_flips; });
    if (auto c = certificate(ProportionEstimate::from_counts(empties(), trials))) return c;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Scans

std::vector<AngleScanRow> angle_scan(const ModelParams& params, const std::vector<unsigned>& dists,
                                     std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  const unsigned n = params.n();
  require_exact_regime(n, "angle_scan");
  require_trials(samples, "angle_scan");
  for (unsigned m : dists) {
    if (m > n) throw std::invalid_argument("angle_scan: distance " + std::to_string(m) + " exceeds n");
  }
  std::vector<std::uint64_t> diffs(dists.size() * samples);
  parallel_for(diffs.size(), threads, [&](std::size_t idx) {
    const unsigned m = dists[idx / samples];
    auto rng = stream_rng(seed, Stream::kPairs, idx);
    const auto x = SpinVector::from_code(n, uniform_below(rng, cube_size(n)));
    auto y = x;
    for (auto i : sample_without_replacement(rng, n, m)) y.flip(static_cast<unsigned>(i));
    diffs[idx] = halfcube_diff_size(x, y, params);
  });

  std::vector<AngleScanRow> rows;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const unsigned m = dists[i];
    const auto begin = diffs.begin() + static_cast<std::ptrdiff_t>(i * samples);
    const std::uint64_t max_diff = *std::max_element(begin, begin + static_cast<std::ptrdiff_t>(samples));
    const double denom = std::sqrt(m * std::log(static_cast<double>(n)) / n) * static_cast<double>(cube_size(n));
    const double ratio = max_diff == 0 ? 0.0
                         : denom > 0.0 ? static_cast<double>(max_diff) / denom
                                       : std::numeric_limits<double>::infinity();
    rows.push_back({m, samples, max_diff, ratio});
  }
  return rows;
}

std::vector<AdmissibilityRow> admissibility_scan(unsigned n, unsigned k, const std::vector<double>& c2s,
                                                 std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  require_trials(samples, "admissibility_scan");
  if (k == 0 || k > kMaxSequenceLength) throw std::invalid_argument("admissibility_scan: k out of range");
  if (c2s.empty() || c2s.size() > 64) throw std::invalid_argument("admissibility_scan: need 1..64 values of c2");
  std::vector<AdmissibilityParams> params;
  for (double c2 : c2s) {
    params.push_back(AdmissibilityParams{c2});
    validate(params.back());
  }
  // Bit j of flags[t]: sample t is inadmissible at c2s[j].
  std::vector<std::uint64_t> flags(samples);
  parallel_for(samples, threads, [&](std::size_t t) {
    auto rng = stream_rng(seed, Stream::kVectors, t);
    const auto sizes = class_sizes(random_sequence(n, k, rng));
    std::uint64_t f = 0;
    for (std::size_t j = 0; j < params.size(); ++j) {
      if (!sizes_admissible(sizes, n, params[j])) f |= std::uint64_t{1} << j;
    }
    flags[t] = f;
  });
  std::vector<AdmissibilityRow> rows;
  for (std::size_t j = 0; j < c2s.size(); ++j) {
    const auto count = static_cast<std::uint64_t>(
        std::count_if(flags.begin(), flags.end(), [&](std::uint64_t f) { return (f >> j) & 1U; }));
    rows.push_back({c2s[j], samples, count});
  }
  return rows;
}

}  // namespace perclab
