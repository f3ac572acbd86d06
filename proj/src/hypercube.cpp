#include "perclab/hypercube.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace perclab {

namespace {

using boost::multiprecision::cpp_int;

std::size_t word_count(unsigned n) { return (n + SpinVector::kWordBits - 1) / SpinVector::kWordBits; }

void require_same_n(unsigned a, unsigned b, const char* where) {
  if (a != b) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

void require_exact_regime(unsigned n, const char* where) {
  if (n > kExactCap) {
    throw ExactRegimeError(std::string(where) + ": exact regime exceeded (n=" + std::to_string(n) +
                           " > " + std::to_string(kExactCap) + "); use a Monte Carlo workflow");
  }
}

// dot >= kappa*sqrt(n), decided on integers: kappa is a binary fraction
// m*2^e, so the comparison reduces to dot^2 versus m^2*n*2^(2e).
bool dot_meets_margin(long long dot, double kappa, unsigned n) {
  if (kappa == 0.0) return dot >= 0;
  if (kappa > 0.0 && dot <= 0) return false;
  if (kappa < 0.0 && dot >= 0) return true;

  int exp = 0;
  const double frac = std::frexp(std::fabs(kappa), &exp);
  const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  exp -= 53;

  cpp_int lhs = cpp_int(dot) * dot;
  cpp_int rhs = cpp_int(mant) * mant * n;
  if (exp >= 0) {
    rhs <<= 2 * exp;
  } else {
    lhs <<= -2 * exp;
  }
  // kappa > 0: need dot^2 >= kappa^2 n. kappa < 0 (dot < 0): need dot^2 <= kappa^2 n.
  return kappa > 0.0 ? lhs >= rhs : lhs <= rhs;
}

ModelParams::ModelParams(unsigned n, double kappa) : n_(n), kappa_(kappa), min_dot_(0) {
  if (n == 0) throw std::invalid_argument("ModelParams: n must be >= 1");
  if (!std::isfinite(kappa)) throw std::invalid_argument("ModelParams: kappa must be finite");

  const long long lo = -static_cast<long long>(n);
  const long long hi = static_cast<long long>(n) + 1;
  const long double t = static_cast<long double>(kappa) * std::sqrt(static_cast<long double>(n));
  long long guess;
  if (t > static_cast<long double>(hi)) {
    guess = hi;
  } else if (t < static_cast<long double>(lo)) {
    guess = lo;
  } else {
    guess = static_cast<long long>(std::ceil(t));
  }
  guess = std::clamp(guess, lo, hi);
  // The predicate is monotone in d; walk from the float guess to the exact boundary.
  while (guess > lo && dot_meets_margin(guess - 1, kappa, n)) --guess;
  while (guess < hi && !dot_meets_margin(guess, kappa, n)) ++guess;
  min_dot_ = static_cast<int>(guess);
}

double ModelParams::threshold() const noexcept { return kappa_ * std::sqrt(static_cast<double>(n_)); }

int ModelParams::max_flips() const noexcept {
  if (min_dot_ > static_cast<int>(n_)) return -1;
  // n - 2h >= min_dot  <=>  h <= (n - min_dot)/2
  return (static_cast<int>(n_) - min_dot_) / 2;
}

// ---------------------------------------------------------------------------

SpinVector::SpinVector(unsigned n) : n_(n), words_(word_count(n), 0) {
  if (n == 0) throw std::invalid_argument("SpinVector: n must be >= 1");
}

SpinVector SpinVector::all_plus(unsigned n) {
  SpinVector v(n);
  std::fill(v.words_.begin(), v.words_.end(), ~std::uint64_t{0});
  v.mask_tail();
  return v;
}

SpinVector SpinVector::from_code(unsigned n, std::uint64_t code) {
  if (n > 64) throw std::invalid_argument("SpinVector::from_code: n > 64");
  if ((code & ~bits::low_mask(n)) != 0) throw std::invalid_argument("SpinVector::from_code: code has bits >= n");
  SpinVector v(n);
  v.words_[0] = code;
  return v;
}

SpinVector SpinVector::from_spins(std::span<const int> spins) {
  SpinVector v(static_cast<unsigned>(spins.size()));
  for (unsigned i = 0; i < spins.size(); ++i) v.set_spin(i, spins[i]);
  return v;
}

SpinVector SpinVector::from_words(unsigned n, std::vector<std::uint64_t> words) {
  SpinVector v(n);
  if (words.size() != v.words_.size()) throw std::invalid_argument("SpinVector::from_words: wrong word count");
  v.words_ = std::move(words);
  const auto before = v.words_.back();
  v.mask_tail();
  if (before != v.words_.back()) throw std::invalid_argument("SpinVector::from_words: bits set beyond n");
  return v;
}

std::uint64_t SpinVector::code() const {
  if (n_ > 64) throw std::logic_error("SpinVector::code: n > 64");
  return words_[0];
}

void SpinVector::set_spin(unsigned i, int s) {
  if (s != 1 && s != -1) throw std::invalid_argument("SpinVector: spin must be +1 or -1");
  const std::uint64_t m = std::uint64_t{1} << (i % kWordBits);
  if (s == 1) {
    words_[i / kWordBits] |= m;
  } else {
    words_[i / kWordBits] &= ~m;
  }
}

std::vector<int> SpinVector::spins() const {
  std::vector<int> out(n_);
  for (unsigned i = 0; i < n_; ++i) out[i] = spin(i);
  return out;
}

unsigned SpinVector::count_plus() const noexcept {
  unsigned c = 0;
  for (auto w : words_) c += static_cast<unsigned>(std::popcount(w));
  return c;
}

void SpinVector::mask_tail() noexcept {
  const unsigned rem = n_ % kWordBits;
  if (rem != 0 && !words_.empty()) words_.back() &= bits::low_mask(rem);
}

std::string SpinVector::to_string() const {
  std::ostringstream out;
  out << n_ << ":0x" << std::hex << std::uppercase;
  std::size_t top = words_.size();
  while (top > 1 && words_[top - 1] == 0) --top;
  out << words_[top - 1];
  out.fill('0');
  for (std::size_t w = top - 1; w-- > 0;) {
    out.width(16);
    out << words_[w];
  }
  return out.str();
}

SpinVector SpinVector::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("SpinVector::parse: missing ':'");
  unsigned n = 0;
  const auto nstr = text.substr(0, colon);
  auto [p, ec] = std::from_chars(nstr.data(), nstr.data() + nstr.size(), n);
  if (ec != std::errc() || p != nstr.data() + nstr.size() || n == 0) {
    throw std::invalid_argument("SpinVector::parse: bad dimension in '" + std::string(text) + "'");
  }
  auto hex = text.substr(colon + 1);
  if (hex.size() < 3 || hex[0] != '0' || (hex[1] != 'x' && hex[1] != 'X')) {
    throw std::invalid_argument("SpinVector::parse: expected 0x prefix in '" + std::string(text) + "'");
  }
  hex.remove_prefix(2);
  std::vector<std::uint64_t> words(word_count(n), 0);
  std::size_t digit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, ++digit) {
    unsigned v = 0;
    const char c = *it;
    if (c >= '0' && c <= '9') {
      v = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      v = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw std::invalid_argument("SpinVector::parse: bad hex digit in '" + std::string(text) + "'");
    }
    const std::size_t w = digit / 16;
    if (w >= words.size()) {
      if (v != 0) throw std::invalid_argument("SpinVector::parse: value exceeds dimension");
      continue;
    }
    words[w] |= static_cast<std::uint64_t>(v) << (4 * (digit % 16));
  }
  return from_words(n, std::move(words));
}

std::size_t SpinVectorHash::operator()(const SpinVector& v) const noexcept {
  std::size_t h = v.n();
  for (auto w : v.words()) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
  return h;
}

// ---------------------------------------------------------------------------

SpinVector SignSwitch::apply(const SpinVector& x) const {
  require_same_n(g_.n(), x.n(), "apply_sign_switch");
  SpinVector out(x.n());
  // (+1)(+1) and (-1)(-1) give +1: XNOR of the packed bits.
  for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] = ~(g_.words_[w] ^ x.words_[w]);
  out.mask_tail();
  return out;
}

Permutation::Permutation(std::vector<std::uint32_t> images) : image_(std::move(images)), inverse_(image_.size()) {
  if (image_.empty()) throw std::invalid_argument("Permutation: empty");
  std::vector<bool> seen(image_.size(), false);
  for (std::uint32_t i = 0; i < image_.size(); ++i) {
    const auto j = image_[i];
    if (j >= image_.size() || seen[j]) throw std::invalid_argument("Permutation: not a bijection");
    seen[j] = true;
    inverse_[j] = i;
  }
}

Permutation Permutation::identity(unsigned n) {
  std::vector<std::uint32_t> img(n);
  for (std::uint32_t i = 0; i < n; ++i) img[i] = i;
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const { return Permutation(inverse_); }

SpinVector Permutation::apply(const SpinVector& x) const {
  require_same_n(n(), x.n(), "apply_permutation");
  SpinVector out(x.n());
  for (std::uint32_t i = 0; i < image_.size(); ++i) {
    if (x.bit(i)) out.words_[image_[i] / SpinVector::kWordBits] |= std::uint64_t{1} << (image_[i] % SpinVector::kWordBits);
  }
  return out;
}

Permutation Permutation::compose(const Permutation& other) const {
  require_same_n(n(), other.n(), "Permutation::compose");
  std::vector<std::uint32_t> img(image_.size());
  for (std::uint32_t i = 0; i < img.size(); ++i) img[i] = image_[other.image_[i]];
  return Permutation(std::move(img));
}

// ---------------------------------------------------------------------------

unsigned hamming(const SpinVector& u, const SpinVector& v) {
  require_same_n(u.n(), v.n(), "hamming");
  unsigned d = 0;
  const auto a = u.words();
  const auto b = v.words();
  for (std::size_t w = 0; w < a.size(); ++w) d += static_cast<unsigned>(std::popcount(a[w] ^ b[w]));
  return d;
}

int dot(const SpinVector& x, const SpinVector& y) {
  require_same_n(x.n(), y.n(), "dot");
  return static_cast<int>(x.n()) - 2 * static_cast<int>(hamming(x, y));
}

bool in_halfcube(const SpinVector& y, const SpinVector& center, const ModelParams& params) {
  require_same_n(y.n(), params.n(), "in_halfcube");
  require_same_n(center.n(), params.n(), "in_halfcube");
  return params.admits(dot(center, y));
}

std::uint64_t halfcube_diff_size(const SpinVector& x, const SpinVector& y, const ModelParams& params) {
  require_same_n(x.n(), params.n(), "halfcube_diff_size");
  require_same_n(y.n(), params.n(), "halfcube_diff_size");
  require_exact_regime(params.n(), "halfcube_diff_size");
  const unsigned n = params.n();
  const std::uint64_t xc = x.code();
  const std::uint64_t yc = y.code();
  const int t = params.min_dot();

  // Reflected Gray code from z = 0 (all -1); each step flips bit ctz(i).
  std::uint64_t z = 0;
  int dx = bits::dot(xc, z, n);
  int dy = bits::dot(yc, z, n);
  std::uint64_t count = (dx >= t && dy < t) ? 1 : 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const unsigned j = static_cast<unsigned>(std::countr_zero(i));
    const std::uint64_t m = std::uint64_t{1} << j;
    z ^= m;
    const bool zb = (z & m) != 0;
    dx += (zb == ((xc & m) != 0)) ? 2 : -2;
    dy += (zb == ((yc & m) != 0)) ? 2 : -2;
    count += static_cast<std::uint64_t>(dx >= t && dy < t);
  }
  return count;
}

std::uint64_t halfcube_size(const SpinVector& x, const ModelParams& params) {
  require_same_n(x.n(), params.n(), "halfcube_size");
  require_exact_regime(params.n(), "halfcube_size");
  const unsigned n = params.n();
  const std::uint64_t xc = x.code();
  std::uint64_t count = 0;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z) count += params.admits(bits::dot(xc, z, n));
  return count;
}

std::vector<SpinVector> halfcube_members(const SpinVector& center, const ModelParams& params) {
  require_same_n(center.n(), params.n(), "halfcube_members");
  require_exact_regime(params.n(), "halfcube_members");
  const unsigned n = params.n();
  const std::uint64_t xc = center.code();
  std::vector<SpinVector> out;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z) {
    if (params.admits(bits::dot(xc, z, n))) out.push_back(SpinVector::from_code(n, z));
  }
  return out;
}

}  // namespace perclab
