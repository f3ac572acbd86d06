#pragma once

// Bit-packed spin vectors on the discrete cube {-1,1}^n, the half-cube
// geometry H(x) = {y : x.y >= kappa*sqrt(n)} and the two automorphism
// actions (sign switching and label exchanging).
//
// Encoding: bit i set <=> component i is +1. Unused high bits of the last
// word are always zero, so word equality is vector equality.

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace perclab {

/// Largest dimension for which full enumeration of the cube is allowed.
inline constexpr unsigned kExactCap = 30;

/// Raised when an exact (full-enumeration) routine is asked for n > kExactCap.
class ExactRegimeError : public std::runtime_error {
 public:
  explicit ExactRegimeError(const std::string& what) : std::runtime_error(what) {}
};

void require_exact_regime(unsigned n, const char* where);

/// Dimension and margin of the model. The threshold comparison
/// dot >= kappa*sqrt(n) is decided exactly once at construction and cached
/// as the smallest admissible integer dot.
class ModelParams {
 public:
  ModelParams(unsigned n, double kappa);

  [[nodiscard]] unsigned n() const noexcept { return n_; }
  [[nodiscard]] double kappa() const noexcept { return kappa_; }
  /// kappa*sqrt(n) as a real (informational; comparisons use min_dot()).
  [[nodiscard]] double threshold() const noexcept;
  /// Smallest integer d in [-n, n+1] with d >= kappa*sqrt(n). A value of n+1
  /// means every half-cube is empty.
  [[nodiscard]] int min_dot() const noexcept { return min_dot_; }
  [[nodiscard]] bool admits(int dot) const noexcept { return dot >= min_dot_; }
  /// Largest Hamming distance to the center that still lies in H(center),
  /// or -1 when H is empty.
  [[nodiscard]] int max_flips() const noexcept;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  unsigned n_;
  double kappa_;
  int min_dot_;
};

/// Exact test of the integer inequality dot >= kappa*sqrt(n).
bool dot_meets_margin(long long dot, double kappa, unsigned n);

class SpinVector {
 public:
  static constexpr std::size_t kWordBits = 64;

  SpinVector() = default;
  /// All components -1.
  explicit SpinVector(unsigned n);

  static SpinVector all_plus(unsigned n);
  /// Packed code for n <= 64 (bit i <-> component i).
  static SpinVector from_code(unsigned n, std::uint64_t code);
  static SpinVector from_spins(std::span<const int> spins);
  static SpinVector from_words(unsigned n, std::vector<std::uint64_t> words);

  [[nodiscard]] unsigned n() const noexcept { return n_; }
  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }
  [[nodiscard]] std::uint64_t code() const;

  [[nodiscard]] bool bit(unsigned i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  [[nodiscard]] int spin(unsigned i) const noexcept { return bit(i) ? 1 : -1; }
  void set_spin(unsigned i, int s);
  void flip(unsigned i) noexcept { words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits); }

  [[nodiscard]] std::vector<int> spins() const;
  [[nodiscard]] unsigned count_plus() const noexcept;

  /// "n:0x<hex>" where hex is the integer sum_i bit_i 2^i.
  [[nodiscard]] std::string to_string() const;
  static SpinVector parse(std::string_view text);

  friend bool operator==(const SpinVector&, const SpinVector&) = default;
  friend auto operator<=>(const SpinVector& a, const SpinVector& b) {
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    for (std::size_t w = a.words_.size(); w-- > 0;) {
      if (a.words_[w] != b.words_[w]) return a.words_[w] <=> b.words_[w];
    }
    return std::strong_ordering::equal;
  }

 private:
  friend class SignSwitch;
  friend class Permutation;
  void mask_tail() noexcept;

  unsigned n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct SpinVectorHash {
  std::size_t operator()(const SpinVector& v) const noexcept;
};

/// Componentwise multiplication by a fixed pattern g. An involution.
class SignSwitch {
 public:
  explicit SignSwitch(SpinVector g) : g_(std::move(g)) {}
  static SignSwitch identity(unsigned n) { return SignSwitch(SpinVector::all_plus(n)); }

  [[nodiscard]] const SpinVector& pattern() const noexcept { return g_; }
  [[nodiscard]] unsigned n() const noexcept { return g_.n(); }
  [[nodiscard]] SpinVector apply(const SpinVector& x) const;

  friend bool operator==(const SignSwitch&, const SignSwitch&) = default;

 private:
  SpinVector g_;
};

/// A bijection on {0,...,n-1} with its inverse. Acting on x, component j of
/// the result is component sigma^{-1}(j) of x, i.e. component i of x moves
/// to position sigma(i).
class Permutation {
 public:
  /// images[i] = sigma(i). Throws std::invalid_argument if not a bijection.
  explicit Permutation(std::vector<std::uint32_t> images);
  static Permutation identity(unsigned n);

  [[nodiscard]] unsigned n() const noexcept { return static_cast<unsigned>(image_.size()); }
  [[nodiscard]] std::uint32_t operator()(std::uint32_t i) const { return image_[i]; }
  [[nodiscard]] std::uint32_t preimage(std::uint32_t j) const { return inverse_[j]; }
  [[nodiscard]] std::span<const std::uint32_t> images() const noexcept { return image_; }
  [[nodiscard]] Permutation inverse() const;
  [[nodiscard]] SpinVector apply(const SpinVector& x) const;
  /// (this o other)(i) = this(other(i)).
  [[nodiscard]] Permutation compose(const Permutation& other) const;

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.image_ == b.image_; }

 private:
  std::vector<std::uint32_t> image_;
  std::vector<std::uint32_t> inverse_;
};

int dot(const SpinVector& x, const SpinVector& y);
unsigned hamming(const SpinVector& u, const SpinVector& v);
bool in_halfcube(const SpinVector& y, const SpinVector& center, const ModelParams& params);

inline SpinVector apply_sign_switch(const SignSwitch& g, const SpinVector& x) { return g.apply(x); }
inline SpinVector apply_permutation(const Permutation& sigma, const SpinVector& x) { return sigma.apply(x); }

/// Exact |H(x) \ H(y)| by a Gray-code walk over the whole cube.
std::uint64_t halfcube_diff_size(const SpinVector& x, const SpinVector& y, const ModelParams& params);

/// |H(x)| by enumeration; exact regime only.
std::uint64_t halfcube_size(const SpinVector& x, const ModelParams& params);

/// Sorted members of H(center); exact regime only.
std::vector<SpinVector> halfcube_members(const SpinVector& center, const ModelParams& params);

// Code-level kernels for n <= 64, shared by the solver backends.
namespace bits {

inline constexpr std::uint64_t low_mask(unsigned n) noexcept {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

inline int dot(std::uint64_t x, std::uint64_t y, unsigned n) noexcept {
  return static_cast<int>(n) - 2 * std::popcount((x ^ y) & low_mask(n));
}

}  // namespace bits

}  // namespace perclab
