#include "perclab/lemma_suite.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "perclab/encoding.hpp"
#include "perclab/estimators.hpp"
#include "perclab/hypercube.hpp"
#include "perclab/random.hpp"
#include "perclab/sat_engine.hpp"

namespace perclab {
namespace {

struct Case {
  Rng rng;
  Mutation mutation;

  unsigned below(unsigned bound) { return static_cast<unsigned>(uniform_below(rng, bound)); }
  unsigned between(unsigned lo, unsigned hi) { return lo + below(hi - lo + 1); }

  double kappa() {
    static constexpr double kFixed[] = {0.0, 0.5, 1.0, -0.5};
    const unsigned pick = below(5);
    return pick < 4 ? kFixed[pick] : -1.5 + 3.0 * uniform01(rng);
  }
  SpinVector vector(unsigned n) { return random_sequence(n, 1, rng)[0]; }
  SignSwitch sign_switch(unsigned n) { return SignSwitch(vector(n)); }
  Permutation permutation(unsigned n) {
    std::vector<std::uint32_t> images(n);
    for (std::uint32_t i = 0; i < n; ++i) images[i] = i;
    std::shuffle(images.begin(), images.end(), rng);
    return Permutation(std::move(images));
  }
};

using Check = std::function<bool(Case&, const LemmaSuiteConfig&)>;

// g o H(x) = H(g o x): z lies in g o H(x) iff g o z lies in H(x).
bool halfcube_sign_switch(Case& c, const LemmaSuiteConfig& cfg) {
  const unsigned n = c.between(1, cfg.n_enum_max);
  const ModelParams params(n, c.kappa());
  const auto x = c.vector(n);
  const auto g = c.sign_switch(n);
  auto gx = g.apply(x);
  if (c.mutation == Mutation::kSignSwitch) gx.flip(n - 1);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    const auto z = SpinVector::from_code(n, code);
    if (in_halfcube(g.apply(z), x, params) != in_halfcube(z, gx, params)) return false;
  }
  return true;
}

// sigma o H(x) = H(sigma o x).
bool halfcube_permutation(Case& c, const LemmaSuiteConfig& cfg) {
  const unsigned n = c.between(1, cfg.n_enum_max);
  const ModelParams params(n, c.kappa());
  const auto x = c.vector(n);
  const auto sigma = c.permutation(n);
  const auto inverse = sigma.inverse();
  const auto sx = sigma.apply(x);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    const auto z = SpinVector::from_code(n, code);
    if (in_halfcube(inverse.apply(z), x, params) != in_halfcube(z, sx, params)) return false;
  }
  return true;
}

bool encode_decode(Case& c, const LemmaSuiteConfig& cfg) {
  const unsigned n = c.between(1, cfg.n_max);
  const unsigned k = c.between(1, cfg.k_max);
  const auto seq = random_sequence(n, k, c.rng);
  const auto pp = encode(seq);
  auto back = decode(pp, k).vectors();
  if (c.mutation == Mutation::kDecode) back.back().flip(c.below(n));
  return SpinSequence(back) == seq && encode(SpinSequence(back)) == pp;
}

bool pattern_sign_invariance(Case& c, const LemmaSuiteConfig& cfg) {
  const unsigned n = c.between(1, cfg.n_max);
  const auto seq = random_sequence(n, c.between(1, cfg.k_max), c.rng);
  return sign_switch_invariance_check(c.sign_switch(n), seq);
}

bool witness_exact(Case& c, const LemmaSuiteConfig& cfg) {
  const unsigned n = c.between(1, cfg.n_max);
  const auto seq = random_sequence(n, c.between(1, cfg.k_max), c.rng);
  const auto target = seq.permuted(c.permutation(n)).switched(c.sign_switch(n));
  auto w = match_automorphism(seq, target);
  if (c.mutation == Mutation::kWitness) {
    auto pattern = w.g.pattern();
    pattern.flip(c.below(n));
    w.g = SignSwitch(pattern);
  }
  return w.apply(seq) == target;
}

struct GentleCase {
  GentleMap map;
  SpinSequence z;
  SpinSequence fz;
};

GentleCase gentle_case(Case& c, const LemmaSuiteConfig& cfg) {
  const unsigned n = c.between(2, cfg.n_max);
  const unsigned k = c.between(1, cfg.k_max);
  const AdmissibilityParams params{cfg.c2};
  // Reference: a uniform sequence redrawn until admissible.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    auto reference = random_sequence(n, k, c.rng);
    if (!is_admissible(reference, params)) continue;
    auto map = build_gentle_map(reference, params);
    auto z = random_sequence(n, k, c.rng);
    auto fz = gentle_apply(map, z);
    if (c.mutation == Mutation::kGentle) {
      auto v = fz.vectors();
      v.front().flip(0);
      fz = SpinSequence(std::move(v));
    }
    return {std::move(map), std::move(z), std::move(fz)};
  }
  throw std::runtime_error("lemma suite: no admissible reference sequence found");
}

bool gentle_symmetric(Case& c, const LemmaSuiteConfig& cfg) {
  auto gc = gentle_case(c, cfg);
  const auto g = c.sign_switch(gc.z.n());
  return gentle_apply(gc.map, gc.z.switched(g)) == gc.fz.switched(g);
}

bool gentle_close(Case& c, const LemmaSuiteConfig& cfg) {
  auto gc = gentle_case(c, cfg);
  for (unsigned i = 0; i < gc.z.k(); ++i) {
    if (static_cast<double>(hamming(gc.z[i], gc.fz[i])) > gc.map.closeness_radius()) return false;
  }
  if (!is_admissible(gc.z, gc.map.params())) return gc.fz == gc.z;
  return class_sizes(gc.fz) == gc.map.target_sizes();
}

bool gentle_witness(Case& c, const LemmaSuiteConfig& cfg) {
  auto gc = gentle_case(c, cfg);
  if (!is_admissible(gc.z, gc.map.params())) return gc.fz == gc.z;
  return compose_to_reference(gc.map, gc.z).apply(gc.fz) == gc.map.reference();
}

bool backend_agreement(Case& c, const LemmaSuiteConfig& cfg) {
  const unsigned n = c.between(1, cfg.n_enum_max);
  std::vector<std::uint64_t> codes(c.below(2 * n + 2));
  for (auto& code : codes) code = uniform_below(c.rng, std::uint64_t{1} << n);
  const Disorder d(ModelParams(n, c.kappa()), codes);
  const auto naive = solve(d, Backend::kNaive);
  for (auto b : {Backend::kGrayCode, Backend::kBitParallel}) {
    const auto r = solve(d, b);
    if (r.empty != naive.empty || r.count != naive.count || r.witness != naive.witness) return false;
  }
  return true;
}

struct NamedCheck {
  const char* name;
  Check run;
};

const std::vector<NamedCheck>& checks() {
  static const std::vector<NamedCheck> all = {
      {"halfcube_sign_switch", halfcube_sign_switch},
      {"halfcube_permutation", halfcube_permutation},
      {"encode_decode", encode_decode},
      {"pattern_sign_invariance", pattern_sign_invariance},
      {"witness_exact", witness_exact},
      {"gentle_symmetric", gentle_symmetric},
      {"gentle_close", gentle_close},
      {"gentle_witness", gentle_witness},
      {"backend_agreement", backend_agreement},
  };
  return all;
}

}  // namespace

const char* to_string(Mutation m) {
  switch (m) {
    case Mutation::kNone: return "none";
    case Mutation::kSignSwitch: return "sign-switch";
    case Mutation::kDecode: return "decode";
    case Mutation::kWitness: return "witness";
    case Mutation::kGentle: return "gentle";
  }
  return "none";
}

Mutation parse_mutation(const std::string& name) {
  for (auto m : {Mutation::kNone, Mutation::kSignSwitch, Mutation::kDecode, Mutation::kWitness, Mutation::kGentle}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown mutation '" + name + "' (none, sign-switch, decode, witness, gentle)");
}

bool LemmaSuiteReport::all_passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const LemmaCheckRow& r) { return r.failures == 0; });
}

void validate(const LemmaSuiteConfig& config) {
  if (config.cases == 0) throw std::invalid_argument("lemma-suite: cases must be >= 1");
  if (config.n_max < 2 || config.n_max > 4096) throw std::invalid_argument("lemma-suite: n-max must lie in [2, 4096]");
  if (config.n_enum_max < 1 || config.n_enum_max > 16) {
    throw std::invalid_argument("lemma-suite: n-enum-max must lie in [1, 16]");
  }
  if (config.k_max < 1 || config.k_max > 8) throw std::invalid_argument("lemma-suite: k-max must lie in [1, 8]");
  validate(AdmissibilityParams{config.c2});
}

LemmaSuiteReport run_lemma_suite(const LemmaSuiteConfig& config) {
  validate(config);
  LemmaSuiteReport report;
  const auto& all = checks();
  for (std::size_t id = 0; id < all.size(); ++id) {
    std::vector<std::uint8_t> failed(config.cases, 0);
    parallel_for(config.cases, config.threads, [&](std::size_t i) {
      Case c{stream_rng(config.seed, Stream::kSuite, (static_cast<std::uint64_t>(id) << 32) | i), config.mutation};
      try {
        failed[i] = !all[id].run(c, config);
      } catch (const std::exception&) {
        failed[i] = 1;
      }
    });
    report.rows.push_back({all[id].name, config.cases,
                           static_cast<std::uint64_t>(std::count(failed.begin(), failed.end(), std::uint8_t{1}))});
  }
  return report;
}

}  // namespace perclab
