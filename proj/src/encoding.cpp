#include "perclab/encoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace perclab {

namespace {

std::uint32_t pattern_count(unsigned k) { return std::uint32_t{1} << (k - 1); }

std::uint32_t pattern_at(const SpinSequence& seq, unsigned j) {
  std::uint32_t a = 0;
  const bool b1 = seq[0].bit(j);
  for (unsigned i = 1; i < seq.k(); ++i) {
    if (seq[i].bit(j) == b1) a |= std::uint32_t{1} << (i - 1);
  }
  return a;
}

void require_shape(const SpinSequence& a, const SpinSequence& b, const char* where) {
  if (a.n() != b.n() || a.k() != b.k()) {
    throw std::invalid_argument(std::string(where) + ": sequence shape mismatch (n=" + std::to_string(a.n()) +
                                ",k=" + std::to_string(a.k()) + " vs n=" + std::to_string(b.n()) +
                                ",k=" + std::to_string(b.k()) + ")");
  }
}

}  // namespace

SpinSequence::SpinSequence(std::vector<SpinVector> vectors) : vectors_(std::move(vectors)) {
  if (vectors_.empty()) throw std::invalid_argument("SpinSequence: k must be >= 1");
  if (vectors_.size() > kMaxSequenceLength) {
    throw std::invalid_argument("SpinSequence: k exceeds " + std::to_string(kMaxSequenceLength));
  }
  for (const auto& v : vectors_) {
    if (v.n() != vectors_.front().n() || v.n() == 0) throw std::invalid_argument("SpinSequence: mixed dimensions");
  }
}

SpinSequence SpinSequence::switched(const SignSwitch& g) const {
  std::vector<SpinVector> out;
  out.reserve(vectors_.size());
  for (const auto& v : vectors_) out.push_back(g.apply(v));
  return SpinSequence(std::move(out));
}

SpinSequence SpinSequence::permuted(const Permutation& sigma) const {
  std::vector<SpinVector> out;
  out.reserve(vectors_.size());
  for (const auto& v : vectors_) out.push_back(sigma.apply(v));
  return SpinSequence(std::move(out));
}

unsigned PatternPartition::k() const {
  if (classes.empty() || !std::has_single_bit(classes.size())) {
    throw MalformedEncodingError("PatternPartition: class count must be a power of two");
  }
  return static_cast<unsigned>(std::countr_zero(classes.size())) + 1;
}

std::vector<std::uint32_t> PatternPartition::sizes() const {
  std::vector<std::uint32_t> out(classes.size());
  for (std::size_t a = 0; a < classes.size(); ++a) out[a] = static_cast<std::uint32_t>(classes[a].size());
  return out;
}

NoWitnessError::NoWitnessError(std::uint32_t pattern, std::size_t source_size, std::size_t target_size)
    : std::runtime_error("match_automorphism: no witness, class " + std::to_string(pattern) + " has size " +
                         std::to_string(source_size) + " in source but " + std::to_string(target_size) +
                         " in target"),
      pattern_(pattern) {}

PatternPartition encode(const SpinSequence& seq) {
  PatternPartition pp{seq[0], std::vector<std::vector<std::uint32_t>>(pattern_count(seq.k()))};
  for (unsigned j = 0; j < seq.n(); ++j) pp.classes[pattern_at(seq, j)].push_back(j);
  return pp;
}

SpinSequence decode(const PatternPartition& pp, unsigned k) {
  if (k == 0 || k > kMaxSequenceLength) throw MalformedEncodingError("decode: k out of range");
  if (pp.classes.size() != pattern_count(k)) {
    throw MalformedEncodingError("decode: expected " + std::to_string(pattern_count(k)) + " classes, got " +
                                 std::to_string(pp.classes.size()));
  }
  const unsigned n = pp.first.n();
  if (n == 0) throw MalformedEncodingError("decode: empty first vector");
  std::vector<bool> seen(n, false);
  std::vector<SpinVector> out(k, pp.first);
  for (std::uint32_t a = 0; a < pp.classes.size(); ++a) {
    for (const auto j : pp.classes[a]) {
      if (j >= n) throw MalformedEncodingError("decode: index " + std::to_string(j) + " out of range");
      if (seen[j]) throw MalformedEncodingError("decode: index " + std::to_string(j) + " in two classes");
      seen[j] = true;
      for (unsigned i = 1; i < k; ++i) {
        // y_i^j = y_1^j * a_(i-1): flip where the pattern says "disagree".
        if (((a >> (i - 1)) & 1U) == 0) out[i].flip(j);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw MalformedEncodingError("decode: classes do not cover every index");
  }
  return SpinSequence(std::move(out));
}

std::vector<std::uint32_t> class_sizes(const SpinSequence& seq) {
  const unsigned k = seq.k();
  const std::uint32_t patterns = pattern_count(k);
  std::vector<std::uint32_t> sizes(patterns, 0);
  if (patterns > 64) {
    for (unsigned j = 0; j < seq.n(); ++j) ++sizes[pattern_at(seq, j)];
    return sizes;
  }
  const auto words = seq[0].words().size();
  std::vector<std::uint64_t> agree(k);
  for (std::size_t w = 0; w < words; ++w) {
    const unsigned rem = (w + 1 == words) ? seq.n() % 64 : 0;
    const std::uint64_t valid = rem ? bits::low_mask(rem) : ~std::uint64_t{0};
    for (unsigned i = 1; i < k; ++i) agree[i] = ~(seq[0].words()[w] ^ seq[i].words()[w]);
    for (std::uint32_t a = 0; a < patterns; ++a) {
      std::uint64_t m = valid;
      for (unsigned i = 1; i < k; ++i) m &= ((a >> (i - 1)) & 1U) ? agree[i] : ~agree[i];
      sizes[a] += static_cast<std::uint32_t>(std::popcount(m));
    }
  }
  return sizes;
}

bool sign_switch_invariance_check(const SignSwitch& g, const SpinSequence& seq) {
  return encode(seq.switched(g)).classes == encode(seq).classes;
}

AutomorphismWitness match_automorphism(const SpinSequence& source, const SpinSequence& target) {
  require_shape(source, target, "match_automorphism");
  const auto src = encode(source);
  const auto tgt = encode(target);
  for (std::uint32_t a = 0; a < src.classes.size(); ++a) {
    if (src.classes[a].size() != tgt.classes[a].size()) {
      throw NoWitnessError(a, src.classes[a].size(), tgt.classes[a].size());
    }
  }
  std::vector<std::uint32_t> images(source.n());
  for (std::uint32_t a = 0; a < src.classes.size(); ++a) {
    for (std::size_t r = 0; r < src.classes[a].size(); ++r) images[src.classes[a][r]] = tgt.classes[a][r];
  }
  Permutation sigma(std::move(images));
  const SpinVector moved_first = sigma.apply(source[0]);
  // g = t_1 o (sigma o s_1), the componentwise product.
  SignSwitch g(SignSwitch(target[0]).apply(moved_first));
  AutomorphismWitness witness{std::move(sigma), std::move(g)};
  if (witness.apply(source) != target) {
    throw std::logic_error("match_automorphism: constructed witness failed verification");
  }
  return witness;
}

double AdmissibilityParams::slack(unsigned n) const {
  const double nn = static_cast<double>(n);
  return c2 * std::sqrt(nn * std::log(nn));
}

void validate(const AdmissibilityParams& params) {
  if (!(params.c2 > 0.0) || !std::isfinite(params.c2)) {
    throw std::invalid_argument("AdmissibilityParams: c2 must be a positive finite number");
  }
}

bool sizes_admissible(const std::vector<std::uint32_t>& sizes, unsigned n, const AdmissibilityParams& params) {
  const double expected = static_cast<double>(n) / static_cast<double>(sizes.size());
  const double slack = params.slack(n);
  return std::all_of(sizes.begin(), sizes.end(),
                     [&](std::uint32_t s) { return std::fabs(static_cast<double>(s) - expected) <= slack; });
}

bool is_admissible(const SpinSequence& seq, const AdmissibilityParams& params) {
  return sizes_admissible(class_sizes(seq), seq.n(), params);
}

double GentleMap::closeness_radius() const {
  return std::ldexp(params_.slack(reference_.n()), static_cast<int>(reference_.k()));
}

GentleMap build_gentle_map(const SpinSequence& reference, const AdmissibilityParams& params) {
  validate(params);
  auto sizes = class_sizes(reference);
  if (!sizes_admissible(sizes, reference.n(), params)) {
    throw std::invalid_argument("build_gentle_map: reference sequence is not admissible (c2=" +
                                std::to_string(params.c2) + ")");
  }
  return GentleMap(reference, params, std::move(sizes));
}

std::vector<std::vector<std::uint32_t>> rebalance(std::vector<std::vector<std::uint32_t>> classes,
                                                  const std::vector<std::uint32_t>& target) {
  if (classes.size() != target.size()) throw std::invalid_argument("rebalance: class count mismatch");
  std::vector<std::uint32_t> pool;
  for (std::size_t a = 0; a < classes.size(); ++a) {
    auto& c = classes[a];
    if (c.size() > target[a]) {
      pool.insert(pool.end(), c.begin() + target[a], c.end());
      c.resize(target[a]);
    }
  }
  std::sort(pool.begin(), pool.end());
  std::size_t next = 0;
  for (std::size_t a = 0; a < classes.size(); ++a) {
    auto& c = classes[a];
    if (c.size() < target[a]) {
      const std::size_t need = target[a] - c.size();
      if (next + need > pool.size()) throw std::invalid_argument("rebalance: target sizes exceed population");
      c.insert(c.end(), pool.begin() + static_cast<std::ptrdiff_t>(next),
               pool.begin() + static_cast<std::ptrdiff_t>(next + need));
      next += need;
      std::sort(c.begin(), c.end());
    }
  }
  if (next != pool.size()) throw std::invalid_argument("rebalance: target sizes do not sum to population");
  return classes;
}

SpinSequence gentle_apply(const GentleMap& map, const SpinSequence& z) {
  require_shape(map.reference(), z, "gentle_apply");
  auto pp = encode(z);
  if (!sizes_admissible(pp.sizes(), z.n(), map.params())) return z;
  pp.classes = rebalance(std::move(pp.classes), map.target_sizes());
  return decode(pp, z.k());
}

AutomorphismWitness compose_to_reference(const GentleMap& map, const SpinSequence& z) {
  require_shape(map.reference(), z, "compose_to_reference");
  if (!is_admissible(z, map.params())) throw std::invalid_argument("compose_to_reference: sequence not admissible");
  return match_automorphism(gentle_apply(map, z), map.reference());
}

}  // namespace perclab
