#include "perclab/sat_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace perclab {

namespace {

std::uint64_t population(unsigned n) { return std::uint64_t{1} << n; }

void require_probability(double p, const char* where) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(where) + ": p outside [0,1]");
}

// y survives iff every active center admits it. Each backend calls visit(y)
// once per survivor.
template <typename Visit>
void enumerate_naive(const Disorder& d, Visit&& visit) {
  const unsigned n = d.params().n();
  const auto active = d.active();
  for (std::uint64_t y = 0; y < population(n); ++y) {
    bool ok = true;
    for (const auto x : active) {
      int s = 0;
      for (unsigned j = 0; j < n; ++j) s += (((x >> j) & 1U) == ((y >> j) & 1U)) ? 1 : -1;
      if (!d.params().admits(s)) {
        ok = false;
        break;
      }
    }
    if (ok) visit(y);
  }
}

template <typename Visit>
void enumerate_bitparallel(const Disorder& d, Visit&& visit) {
  const unsigned n = d.params().n();
  const auto active = d.active();
  const int max_flips = d.params().max_flips();
  for (std::uint64_t y = 0; y < population(n); ++y) {
    bool ok = true;
    for (const auto x : active) {
      if (std::popcount(x ^ y) > max_flips) {
        ok = false;
        break;
      }
    }
    if (ok) visit(y);
  }
}

template <typename Visit>
void enumerate_graycode(const Disorder& d, Visit&& visit) {
  const unsigned n = d.params().n();
  const auto active = d.active();
  const std::size_t m = active.size();
  const int t = d.params().min_dot();
  // sign[j][c] = +1 if center c has a +1 at coordinate j, else -1.
  std::vector<std::int8_t> sign(static_cast<std::size_t>(n) * m);
  for (unsigned j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < m; ++c) sign[j * m + c] = ((active[c] >> j) & 1U) ? 1 : -1;
  }
  std::vector<int> dots(m);
  std::size_t violated = 0;
  std::uint64_t z = 0;
  for (std::size_t c = 0; c < m; ++c) {
    dots[c] = bits::dot(active[c], z, n);
    violated += dots[c] < t;
  }
  if (violated == 0) visit(z);
  for (std::uint64_t i = 1; i < population(n); ++i) {
    const unsigned j = static_cast<unsigned>(std::countr_zero(i));
    z ^= std::uint64_t{1} << j;
    // y_j changes to s: each dot moves by 2 * s * x_j.
    const int s = ((z >> j) & 1U) ? 2 : -2;
    const std::int8_t* row = &sign[j * m];
    for (std::size_t c = 0; c < m; ++c) {
      const bool was = dots[c] < t;
      dots[c] += s * row[c];
      const bool now = dots[c] < t;
      violated += static_cast<std::size_t>(now) - static_cast<std::size_t>(was);
    }
    if (violated == 0) visit(z);
  }
}

template <typename Visit>
void enumerate(const Disorder& d, Backend backend, Visit&& visit) {
  require_exact_regime(d.params().n(), "solve");
  switch (backend) {
    case Backend::kNaive:
      enumerate_naive(d, visit);
      return;
    case Backend::kGrayCode:
      enumerate_graycode(d, visit);
      return;
    case Backend::kBitParallel:
      enumerate_bitparallel(d, visit);
      return;
  }
  throw std::invalid_argument("solve: unknown backend");
}

}  // namespace

Disorder::Disorder(ModelParams params, std::vector<std::uint64_t> active)
    : params_(params), active_(std::move(active)) {
  if (params_.n() > 63) throw std::invalid_argument("Disorder: n must be <= 63 to address centers by code");
  std::sort(active_.begin(), active_.end());
  active_.erase(std::unique(active_.begin(), active_.end()), active_.end());
  if (!active_.empty() && active_.back() >= population(params_.n())) {
    throw std::invalid_argument("Disorder: center code " + std::to_string(active_.back()) + " >= 2^n");
  }
}

bool Disorder::contains(std::uint64_t code) const { return std::binary_search(active_.begin(), active_.end(), code); }

Disorder Disorder::switched(const SignSwitch& g) const {
  const std::uint64_t gc = g.pattern().code();
  const std::uint64_t mask = bits::low_mask(params_.n());
  std::vector<std::uint64_t> out;
  out.reserve(active_.size());
  for (const auto x : active_) out.push_back(~(gc ^ x) & mask);
  return Disorder(params_, std::move(out));
}

Disorder Disorder::with_center(std::uint64_t code) const {
  auto out = active_;
  out.push_back(code);
  return Disorder(params_, std::move(out));
}

const char* to_string(Backend backend) {
  switch (backend) {
    case Backend::kNaive:
      return "naive";
    case Backend::kGrayCode:
      return "graycode";
    case Backend::kBitParallel:
      return "bitparallel";
  }
  return "unknown";
}

Backend parse_backend(const std::string& name) {
  if (name == "naive") return Backend::kNaive;
  if (name == "graycode") return Backend::kGrayCode;
  if (name == "bitparallel") return Backend::kBitParallel;
  throw std::invalid_argument("unknown backend '" + name + "' (expected naive, graycode or bitparallel)");
}

SolveResult solve(const Disorder& d, Backend backend) {
  SolveResult r;
  r.backend = backend;
  std::uint64_t smallest = std::numeric_limits<std::uint64_t>::max();
  enumerate(d, backend, [&](std::uint64_t y) {
    ++r.count;
    smallest = std::min(smallest, y);
  });
  r.empty = r.count == 0;
  if (!r.empty) r.witness = SpinVector::from_code(d.params().n(), smallest);
  return r;
}

std::vector<std::uint64_t> solution_set(const Disorder& d, Backend backend) {
  std::vector<std::uint64_t> out;
  enumerate(d, backend, [&](std::uint64_t y) { out.push_back(y); });
  std::sort(out.begin(), out.end());
  return out;
}

bool is_empty(const Disorder& d) {
  require_exact_regime(d.params().n(), "is_empty");
  const int max_flips = d.params().max_flips();
  const auto active = d.active();
  for (std::uint64_t y = 0; y < population(d.params().n()); ++y) {
    bool ok = true;
    for (const auto x : active) {
      if (std::popcount(x ^ y) > max_flips) {
        ok = false;
        break;
      }
    }
    if (ok) return false;
  }
  return true;
}

Disorder sample_disorder(const ModelParams& params, double p, Rng& rng) {
  require_probability(p, "sample_disorder");
  require_exact_regime(params.n(), "sample_disorder");
  const std::uint64_t total = population(params.n());
  const std::uint64_t k = sample_binomial(rng, total, p);
  return Disorder(params, sample_without_replacement(rng, total, k));
}

CouplingSample sample_coupled(const ModelParams& params, double p, double p_hi, Rng& rng) {
  require_probability(p, "sample_coupled");
  require_probability(p_hi, "sample_coupled");
  if (p > p_hi) throw std::invalid_argument("sample_coupled: requires p <= p_hi");
  Disorder low = sample_disorder(params, p, rng);
  const std::uint64_t total = population(params.n());
  const std::uint64_t inactive = total - low.size();
  const double thin = p < 1.0 ? std::min(1.0, (p_hi - p) / (1.0 - p)) : 0.0;
  const std::uint64_t extra = sample_binomial(rng, inactive, thin);
  const auto low_codes = low.active();
  // r-th inactive code (0-based): smallest c with c + 1 - #{low <= c} = r + 1.
  auto inactive_code = [&](std::uint64_t r) {
    std::uint64_t lo = r;
    std::uint64_t hi = std::min(total - 1, r + low_codes.size());
    while (lo < hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      const auto below = static_cast<std::uint64_t>(std::upper_bound(low_codes.begin(), low_codes.end(), mid) -
                                                    low_codes.begin());
      if (mid + 1 - below >= r + 1) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  };
  std::vector<std::uint64_t> high(low_codes.begin(), low_codes.end());
  for (const auto r : sample_without_replacement(rng, inactive, extra)) high.push_back(inactive_code(r));
  return CouplingSample{std::move(low), Disorder(params, std::move(high))};
}

ArrivalStream::ArrivalStream(unsigned n, Rng rng) : rng_(std::move(rng)), shuffle_(population(n)) {
  require_exact_regime(n, "ArrivalStream");
}

ArrivalStream::Arrival ArrivalStream::next() {
  const std::uint64_t remaining = shuffle_.population() - shuffle_.drawn();
  const double e = -std::log1p(-uniform01(rng_));
  level_ += e / static_cast<double>(remaining);
  return Arrival{level_, shuffle_.next(rng_)};
}

double arrival_level(double p) {
  require_probability(p, "arrival_level");
  return p == 1.0 ? std::numeric_limits<double>::infinity() : -std::log1p(-p);
}

Disorder coupled_disorder(const ModelParams& params, ArrivalStream& stream, double p) {
  const double cut = arrival_level(p);
  std::vector<std::uint64_t> codes;
  while (!stream.exhausted()) {
    const auto a = stream.next();
    if (a.level > cut) break;
    codes.push_back(a.code);
  }
  return Disorder(params, std::move(codes));
}

double critical_level(const ModelParams& params, ArrivalStream& stream, double max_level) {
  constexpr double kNever = std::numeric_limits<double>::infinity();
  const unsigned n = params.n();
  require_exact_regime(n, "critical_level");
  if (params.min_dot() <= -static_cast<int>(n)) return kNever;  // every H(x) is the whole cube
  const int max_flips = params.max_flips();

  thread_local std::vector<std::uint32_t> survivors;
  survivors.clear();
  bool first = true;
  while (!stream.exhausted()) {
    const auto a = stream.next();
    if (a.level > max_level) return kNever;
    const auto x = a.code;
    if (first) {
      first = false;
      if (max_flips >= 0) {
        for (std::uint64_t y = 0; y < population(n); ++y) {
          if (std::popcount(x ^ y) <= max_flips) survivors.push_back(static_cast<std::uint32_t>(y));
        }
      }
    } else {
      std::erase_if(survivors, [&](std::uint32_t y) { return std::popcount(x ^ y) > max_flips; });
    }
    if (survivors.empty()) return a.level;
  }
  return kNever;
}

}  // namespace perclab
