#include "perclab/random.hpp"

#include <stdexcept>

namespace perclab {

std::uint64_t sample_binomial(Rng& rng, std::uint64_t trials, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_binomial: p outside [0,1]");
  if (p == 0.0 || trials == 0) return 0;
  if (p == 1.0) return trials;
  return std::binomial_distribution<std::uint64_t>(trials, p)(rng);
}

std::uint64_t SparseShuffle::at(std::uint64_t i) const {
  const auto it = swapped_.find(i);
  return it == swapped_.end() ? i : it->second;
}

std::uint64_t SparseShuffle::next(Rng& rng) {
  if (exhausted()) throw std::logic_error("SparseShuffle: population exhausted");
  const std::uint64_t j = drawn_ + uniform_below(rng, population_ - drawn_);
  const std::uint64_t picked = at(j);
  if (j != drawn_) swapped_[j] = at(drawn_);
  swapped_.erase(drawn_);
  ++drawn_;
  return picked;
}

std::vector<std::uint64_t> sample_without_replacement(Rng& rng, std::uint64_t population, std::uint64_t k) {
  if (k > population) throw std::invalid_argument("sample_without_replacement: k > population");
  SparseShuffle shuffle(population);
  std::vector<std::uint64_t> out;
  out.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) out.push_back(shuffle.next(rng));
  return out;
}

}  // namespace perclab
