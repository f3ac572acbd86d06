#pragma once

// Pattern-class encoding of spin sequences and the constructions built on it.
//
// A sequence Y = (y_1, ..., y_k) is recorded as y_1 together with, for every
// agreement pattern a in {-1,1}^(k-1), the set I_a of coordinates j where
// (y_1^j y_2^j, ..., y_1^j y_k^j) = a. Patterns are stored as (k-1)-bit
// integers: bit (i-2) is set iff a_(i-1) = +1, matching the spin encoding.
// Indices are 0-based in memory and 1-based in JSON.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "perclab/hypercube.hpp"

namespace perclab {

/// Upper bound on sequence length (2^19 pattern classes).
inline constexpr unsigned kMaxSequenceLength = 20;

class SpinSequence {
 public:
  explicit SpinSequence(std::vector<SpinVector> vectors);

  [[nodiscard]] unsigned k() const noexcept { return static_cast<unsigned>(vectors_.size()); }
  [[nodiscard]] unsigned n() const noexcept { return vectors_.front().n(); }
  [[nodiscard]] const SpinVector& operator[](std::size_t i) const { return vectors_[i]; }
  [[nodiscard]] const std::vector<SpinVector>& vectors() const noexcept { return vectors_; }

  [[nodiscard]] SpinSequence switched(const SignSwitch& g) const;
  [[nodiscard]] SpinSequence permuted(const Permutation& sigma) const;

  friend bool operator==(const SpinSequence&, const SpinSequence&) = default;

 private:
  std::vector<SpinVector> vectors_;
};

struct PatternPartition {
  SpinVector first;
  /// classes[a] = sorted I_a, one entry per pattern (2^(k-1) entries).
  std::vector<std::vector<std::uint32_t>> classes;

  [[nodiscard]] unsigned k() const;
  [[nodiscard]] std::vector<std::uint32_t> sizes() const;

  friend bool operator==(const PatternPartition&, const PatternPartition&) = default;
};

class MalformedEncodingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoWitnessError : public std::runtime_error {
 public:
  NoWitnessError(std::uint32_t pattern, std::size_t source_size, std::size_t target_size);
  [[nodiscard]] std::uint32_t pattern() const noexcept { return pattern_; }

 private:
  std::uint32_t pattern_;
};

PatternPartition encode(const SpinSequence& seq);
SpinSequence decode(const PatternPartition& pp, unsigned k);

/// Class sizes |I_a| only; word-parallel for short sequences.
std::vector<std::uint32_t> class_sizes(const SpinSequence& seq);

/// Whether encode(g o seq) and encode(seq) have identical classes.
bool sign_switch_invariance_check(const SignSwitch& g, const SpinSequence& seq);

/// A pair (sigma, g) mapping one sequence onto another as g o (sigma o .).
struct AutomorphismWitness {
  Permutation sigma;
  SignSwitch g;

  [[nodiscard]] SpinSequence apply(const SpinSequence& seq) const { return seq.permuted(sigma).switched(g); }
};

/// Builds sigma classwise (i-th smallest source index -> i-th smallest target
/// index) and g = t_1 o (sigma o s_1); the result is verified before return.
AutomorphismWitness match_automorphism(const SpinSequence& source, const SpinSequence& target);

struct AdmissibilityParams {
  double c2 = 4.0;

  /// c2 * sqrt(n ln n).
  [[nodiscard]] double slack(unsigned n) const;
};

void validate(const AdmissibilityParams& params);

bool is_admissible(const SpinSequence& seq, const AdmissibilityParams& params);
bool sizes_admissible(const std::vector<std::uint32_t>& sizes, unsigned n, const AdmissibilityParams& params);

/// Rebalancing map anchored at an admissible reference sequence X.
/// Admissible inputs are moved (coordinate classes reassigned) until their
/// class sizes equal those of X; inadmissible inputs are left unchanged.
class GentleMap {
 public:
  [[nodiscard]] const SpinSequence& reference() const noexcept { return reference_; }
  [[nodiscard]] const AdmissibilityParams& params() const noexcept { return params_; }
  [[nodiscard]] const std::vector<std::uint32_t>& target_sizes() const noexcept { return target_sizes_; }
  /// 2^k c2 sqrt(n ln n): the per-vector Hamming radius the map respects.
  [[nodiscard]] double closeness_radius() const;

 private:
  friend GentleMap build_gentle_map(const SpinSequence&, const AdmissibilityParams&);
  GentleMap(SpinSequence reference, AdmissibilityParams params, std::vector<std::uint32_t> sizes)
      : reference_(std::move(reference)), params_(params), target_sizes_(std::move(sizes)) {}

  SpinSequence reference_;
  AdmissibilityParams params_;
  std::vector<std::uint32_t> target_sizes_;
};

GentleMap build_gentle_map(const SpinSequence& reference, const AdmissibilityParams& params);

/// Moves indices between classes so that class a ends with target[a]
/// members. Surplus classes (in increasing pattern order) give up their
/// largest indices; deficit classes (in increasing pattern order) take the
/// smallest indices of the pooled surplus.
std::vector<std::vector<std::uint32_t>> rebalance(std::vector<std::vector<std::uint32_t>> classes,
                                                  const std::vector<std::uint32_t>& target);

SpinSequence gentle_apply(const GentleMap& map, const SpinSequence& z);

/// Witness with g o (sigma o gentle_apply(map, z)) = map.reference().
AutomorphismWitness compose_to_reference(const GentleMap& map, const SpinSequence& z);

}  // namespace perclab
