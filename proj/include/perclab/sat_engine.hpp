#pragma once

// Realized disorders and the exact emptiness solver.
//
// A disorder is the set of active centers {x : omega_x = 1}, stored as sorted
// packed codes. The solver decides whether the intersection of H(x) over the
// active centers is empty by enumerating all 2^n candidates y. The
// intersection over an empty family is the whole cube.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perclab/hypercube.hpp"
#include "perclab/random.hpp"

namespace perclab {

class Disorder {
 public:
  /// Codes are sorted and deduplicated; every code must be < 2^n.
  Disorder(ModelParams params, std::vector<std::uint64_t> active);

  [[nodiscard]] const ModelParams& params() const noexcept { return params_; }
  [[nodiscard]] std::span<const std::uint64_t> active() const noexcept { return active_; }
  [[nodiscard]] std::size_t size() const noexcept { return active_.size(); }
  [[nodiscard]] bool contains(std::uint64_t code) const;

  [[nodiscard]] Disorder switched(const SignSwitch& g) const;
  [[nodiscard]] Disorder with_center(std::uint64_t code) const;

  friend bool operator==(const Disorder&, const Disorder&) = default;

 private:
  ModelParams params_;
  std::vector<std::uint64_t> active_;
};

enum class Backend { kNaive, kGrayCode, kBitParallel };

const char* to_string(Backend backend);
Backend parse_backend(const std::string& name);

struct SolveResult {
  bool empty = true;
  std::uint64_t count = 0;
  /// Smallest surviving code, present iff count > 0.
  std::optional<SpinVector> witness;
  Backend backend = Backend::kBitParallel;
};

SolveResult solve(const Disorder& d, Backend backend = Backend::kBitParallel);

/// Sorted codes of every y in the intersection.
std::vector<std::uint64_t> solution_set(const Disorder& d, Backend backend = Backend::kBitParallel);

/// Emptiness only; stops at the first survivor.
bool is_empty(const Disorder& d);

/// Bernoulli(p) marking of all 2^n centers: K ~ Binomial(2^n, p), then K
/// distinct uniform codes.
Disorder sample_disorder(const ModelParams& params, double p, Rng& rng);

struct CouplingSample {
  Disorder low;
  Disorder high;
};

/// low ~ Bernoulli(p), high ~ Bernoulli(p_hi), low.active subset of high.active.
/// The extra centers are a Binomial(2^n - |low|, (p_hi - p)/(1 - p)) draw from
/// the inactive ones.
CouplingSample sample_coupled(const ModelParams& params, double p, double p_hi, Rng& rng);

/// Monotone arrival process over all 2^n centers: centers arrive in uniformly
/// random order at increasing levels L_1 < L_2 < ... with exponential spacings
/// (L_(i+1) - L_i ~ Exp(1)/(2^n - i)). The centers with L <= -ln(1-p) form a
/// Bernoulli(p) disorder, so one stream couples every p at once.
class ArrivalStream {
 public:
  ArrivalStream(unsigned n, Rng rng);

  struct Arrival {
    double level;
    std::uint64_t code;
  };

  [[nodiscard]] bool exhausted() const noexcept { return shuffle_.exhausted(); }
  Arrival next();

 private:
  Rng rng_;
  SparseShuffle shuffle_;
  double level_ = 0.0;
};

/// -ln(1 - p); +inf at p = 1.
double arrival_level(double p);

/// The disorder formed by the stream's arrivals with level <= arrival_level(p).
Disorder coupled_disorder(const ModelParams& params, ArrivalStream& stream, double p);

/// Level at which the arriving centers first make the intersection empty, or
/// +inf if it never does. Empty at p iff the result is <= arrival_level(p).
/// Arrivals above max_level are not examined (the result is then +inf).
double critical_level(const ModelParams& params, ArrivalStream& stream,
                      double max_level = std::numeric_limits<double>::infinity());

}  // namespace perclab
