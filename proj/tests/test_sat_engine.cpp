#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "perclab/json_io.hpp"
#include "perclab/sat_engine.hpp"
#include "oracles.hpp"

namespace perclab {
namespace {

constexpr Backend kBackends[] = {Backend::kNaive, Backend::kGrayCode, Backend::kBitParallel};

std::uint64_t code_of(std::initializer_list<int> s) { return SpinVector::from_spins(std::vector<int>(s)).code(); }

// Solutions by direct componentwise dot products on decoded spins.
std::vector<std::uint64_t> brute_solutions(const Disorder& d) {
  const unsigned n = d.params().n();
  std::vector<std::uint64_t> out;
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
    const auto ys = oracle::decode_spins(y, n);
    bool ok = true;
    for (auto x : d.active()) ok = ok && d.params().admits(oracle::component_dot(oracle::decode_spins(x, n), ys));
    if (ok) out.push_back(y);
  }
  return out;
}

Disorder random_disorder(std::mt19937_64& rng, unsigned n, double kappa, std::size_t max_centers) {
  std::vector<std::uint64_t> codes(rng() % (max_centers + 1));
  for (auto& c : codes) c = rng() & ((std::uint64_t{1} << n) - 1);
  return Disorder(ModelParams(n, kappa), codes);
}

TEST(Disorder, SortsAndDeduplicates) {
  const Disorder d(ModelParams(3, 0.0), {5, 1, 5, 7});
  EXPECT_EQ(std::vector<std::uint64_t>(d.active().begin(), d.active().end()), (std::vector<std::uint64_t>{1, 5, 7}));
  EXPECT_TRUE(d.contains(5));
  EXPECT_FALSE(d.contains(4));
  EXPECT_THROW(Disorder(ModelParams(3, 0.0), {8}), std::invalid_argument);
}

TEST(Solve, SpecExamples) {
  for (auto b : kBackends) {
    const auto none = solve(Disorder(ModelParams(5, 0.3), {}), b);
    EXPECT_FALSE(none.empty);
    EXPECT_EQ(none.count, 32u);

    const auto both = solve(Disorder(ModelParams(1, 0.0), {code_of({1}), code_of({-1})}), b);
    EXPECT_TRUE(both.empty);
    EXPECT_EQ(both.count, 0u);
    EXPECT_FALSE(both.witness.has_value());

    const auto one = solve(Disorder(ModelParams(2, 0.0), {code_of({1, 1})}), b);
    EXPECT_FALSE(one.empty);
    EXPECT_EQ(one.count, 3u);
    ASSERT_TRUE(one.witness.has_value());
    EXPECT_TRUE(in_halfcube(*one.witness, SpinVector::all_plus(2), ModelParams(2, 0.0)));
    EXPECT_EQ(one.backend, b);
  }
}

TEST(SolutionSet, SpecExamples) {
  const ModelParams p(2, 0.0);
  EXPECT_EQ(solution_set(Disorder(p, {})), (std::vector<std::uint64_t>{0, 1, 2, 3}));
  const std::vector<std::uint64_t> three{code_of({1, -1}), code_of({-1, 1}), code_of({1, 1})};
  auto sorted = three;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(solution_set(Disorder(p, {code_of({1, 1})})), sorted);
  std::vector<std::uint64_t> two{code_of({1, -1}), code_of({-1, 1})};
  std::sort(two.begin(), two.end());
  EXPECT_EQ(solution_set(Disorder(p, {code_of({1, 1}), code_of({-1, -1})})), two);
}

TEST(Solve, RefusesAboveExactCap) {
  const Disorder d(ModelParams(31, 0.0), {});
  for (auto b : kBackends) EXPECT_THROW(solve(d, b), ExactRegimeError);
  EXPECT_THROW(solution_set(d), ExactRegimeError);
}

TEST(Solve, InfeasibleMarginEmptiesEveryHalfcube) {
  const Disorder d(ModelParams(1, 2.0), {0});
  for (auto b : kBackends) EXPECT_TRUE(solve(d, b).empty);
  EXPECT_FALSE(solve(Disorder(ModelParams(1, 2.0), {})).empty);
}

TEST(Solve, BackendsAgreeWithEachOtherAndBruteForce) {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 1000; ++rep) {
    const unsigned n = 1 + rng() % 12;
    const double kappa = std::vector<double>{0.0, 0.5, 1.0, -0.5}[rep % 4];
    const auto d = random_disorder(rng, n, kappa, 3 * n);
    const auto expected = brute_solutions(d);
    for (auto b : kBackends) {
      const auto r = solve(d, b);
      EXPECT_EQ(r.count, expected.size());
      EXPECT_EQ(r.empty, expected.empty());
      EXPECT_EQ(r.witness.has_value(), !expected.empty());
      if (r.witness) EXPECT_EQ(r.witness->code(), expected.front());
      EXPECT_EQ(solution_set(d, b), expected);
    }
    EXPECT_EQ(is_empty(d), expected.empty());
  }
}

TEST(Solve, BackendsAgreeAtLargerN) {
  std::mt19937_64 rng(102);
  for (int rep = 0; rep < 60; ++rep) {
    const unsigned n = 13 + rng() % 8;
    const auto d = random_disorder(rng, n, std::vector<double>{0.0, 0.5, 1.0}[rep % 3], 2 * n);
    const auto ref = solve(d, Backend::kNaive);
    for (auto b : {Backend::kGrayCode, Backend::kBitParallel}) {
      const auto r = solve(d, b);
      EXPECT_EQ(r.count, ref.count);
      EXPECT_EQ(r.empty, ref.empty);
      EXPECT_EQ(r.witness, ref.witness);
    }
  }
}

TEST(Solve, SignSwitchEquivariance) {
  std::mt19937_64 rng(103);
  for (int rep = 0; rep < 200; ++rep) {
    const unsigned n = 1 + rng() % 12;
    const auto d = random_disorder(rng, n, 0.4, 2 * n);
    const SignSwitch g(SpinVector::from_code(n, rng() & ((std::uint64_t{1} << n) - 1)));
    const auto gd = d.switched(g);
    EXPECT_EQ(solve(gd).count, solve(d).count);
    std::vector<std::uint64_t> image;
    for (auto y : solution_set(d)) image.push_back(g.apply(SpinVector::from_code(n, y)).code());
    std::sort(image.begin(), image.end());
    EXPECT_EQ(solution_set(gd), image);
  }
}

TEST(Solve, AddingCenterRemovesExactlyTheOutsiders) {
  std::mt19937_64 rng(104);
  for (int rep = 0; rep < 200; ++rep) {
    const unsigned n = 1 + rng() % 12;
    const auto d = random_disorder(rng, n, 0.3, n);
    const std::uint64_t x = rng() & ((std::uint64_t{1} << n) - 1);
    const auto a = solution_set(d);
    const auto xs = SpinVector::from_code(n, x);
    const auto outside = std::count_if(a.begin(), a.end(), [&](std::uint64_t y) {
      return !in_halfcube(SpinVector::from_code(n, y), xs, d.params());
    });
    EXPECT_EQ(solve(d.with_center(x)).count, a.size() - static_cast<std::size_t>(outside));
  }
}

TEST(SampleDisorder, DegenerateProbabilities) {
  Rng rng(5);
  const ModelParams p(6, 0.0);
  EXPECT_EQ(sample_disorder(p, 0.0, rng).size(), 0u);
  EXPECT_EQ(sample_disorder(p, 1.0, rng).size(), 64u);
  EXPECT_THROW(sample_disorder(p, -0.1, rng), std::invalid_argument);
  EXPECT_THROW(sample_disorder(p, 1.5, rng), std::invalid_argument);
}

TEST(SampleDisorder, MeanSizeWithinThreeSigma) {
  const unsigned n = 10;
  const double p = 10.0 / 1024.0;
  const ModelParams params(n, 0.0);
  double sum = 0.0;
  const int draws = 10000;
  for (int t = 0; t < draws; ++t) {
    auto rng = stream_rng(99, Stream::kDisorder, t);
    sum += static_cast<double>(sample_disorder(params, p, rng).size());
  }
  const double sigma = std::sqrt(1024.0 * p * (1 - p) / draws);
  EXPECT_NEAR(sum / draws, 10.0, 3 * sigma);
}

TEST(SampleDisorder, EachCenterMarginallyBernoulli) {
  const ModelParams params(3, 0.0);
  const double p = 0.3;
  const int draws = 40000;
  std::vector<int> hits(8, 0);
  for (int t = 0; t < draws; ++t) {
    auto rng = stream_rng(3, Stream::kDisorder, t);
    const auto d = sample_disorder(params, p, rng);
    for (auto c : d.active()) ++hits[c];
  }
  const double sigma = std::sqrt(p * (1 - p) / draws);
  for (int h : hits) EXPECT_NEAR(static_cast<double>(h) / draws, p, 4 * sigma);
}

TEST(SampleDisorder, DeterministicGivenSeed) {
  const ModelParams params(12, 0.0);
  auto a = stream_rng(1, Stream::kDisorder, 17);
  auto b = stream_rng(1, Stream::kDisorder, 17);
  EXPECT_EQ(sample_disorder(params, 0.01, a), sample_disorder(params, 0.01, b));
}

TEST(SampleCoupled, SpecExamples) {
  const ModelParams params(8, 0.0);
  Rng rng(11);
  const auto same = sample_coupled(params, 0.05, 0.05, rng);
  EXPECT_EQ(same.low, same.high);
  const auto zero = sample_coupled(params, 0.0, 0.05, rng);
  EXPECT_EQ(zero.low.size(), 0u);
  EXPECT_THROW(sample_coupled(params, 0.2, 0.1, rng), std::invalid_argument);
}

TEST(SampleCoupled, MonotoneAndCorrectMarginals) {
  const ModelParams params(10, 0.0);
  const double p = 0.01, p_hi = 0.03;
  double low_sum = 0, high_sum = 0;
  const int draws = 3000;
  for (int t = 0; t < draws; ++t) {
    auto rng = stream_rng(21, Stream::kDisorder, t);
    const auto s = sample_coupled(params, p, p_hi, rng);
    EXPECT_TRUE(std::includes(s.high.active().begin(), s.high.active().end(), s.low.active().begin(),
                              s.low.active().end()));
    EXPECT_LE(is_empty(s.low), is_empty(s.high));
    const auto a_low = solution_set(s.low);
    const auto a_high = solution_set(s.high);
    EXPECT_TRUE(std::includes(a_low.begin(), a_low.end(), a_high.begin(), a_high.end()));
    low_sum += static_cast<double>(s.low.size());
    high_sum += static_cast<double>(s.high.size());
  }
  EXPECT_NEAR(low_sum / draws, 1024 * p, 3 * std::sqrt(1024 * p * (1 - p) / draws));
  EXPECT_NEAR(high_sum / draws, 1024 * p_hi, 3 * std::sqrt(1024 * p_hi * (1 - p_hi) / draws));
}

TEST(ArrivalStream, LevelsIncreaseAndCodesAreAPermutation) {
  ArrivalStream s(5, Rng(4));
  std::vector<std::uint64_t> seen;
  double last = 0.0;
  while (!s.exhausted()) {
    const auto a = s.next();
    EXPECT_GT(a.level, last);
    last = a.level;
    seen.push_back(a.code);
  }
  std::sort(seen.begin(), seen.end());
  for (std::uint64_t i = 0; i < 32; ++i) EXPECT_EQ(seen[i], i);
}

TEST(ArrivalStream, CoupledDisorderHasBernoulliSize) {
  const ModelParams params(8, 0.0);
  const double p = 0.05;
  const int draws = 5000;
  double sum = 0.0;
  for (int t = 0; t < draws; ++t) {
    ArrivalStream s(8, stream_rng(8, Stream::kArrivals, t));
    sum += static_cast<double>(coupled_disorder(params, s, p).size());
  }
  EXPECT_NEAR(sum / draws, 256 * p, 3 * std::sqrt(256 * p * (1 - p) / draws));
}

TEST(CriticalLevel, MatchesSolveOnCoupledDisorders) {
  for (unsigned n : {1u, 4u, 8u, 11u}) {
    const ModelParams params(n, n == 4 ? 0.5 : 0.0);
    for (int t = 0; t < 40; ++t) {
      ArrivalStream a(n, stream_rng(t, Stream::kArrivals, n));
      const double level = critical_level(params, a);
      for (double p : {0.001, 0.01, 0.05, 0.2, 0.5, 0.9}) {
        ArrivalStream b(n, stream_rng(t, Stream::kArrivals, n));
        const auto d = coupled_disorder(params, b, p);
        EXPECT_EQ(solve(d).empty, level <= arrival_level(p)) << "n=" << n << " p=" << p;
      }
    }
  }
}

TEST(CriticalLevel, NeverEmptyWhenEveryHalfcubeIsTheCube) {
  ArrivalStream a(3, Rng(1));
  EXPECT_TRUE(std::isinf(critical_level(ModelParams(3, -5.0), a)));
}

TEST(InstanceJson, RoundTripAndResultFormat) {
  const Disorder d(ModelParams(4, 0.5), {3, 9, 12});
  const auto path = std::filesystem::temp_directory_path() / "perclab_instance_test.json";
  write_instance(path, d);
  EXPECT_EQ(read_instance(path), d);
  std::filesystem::remove(path);

  const auto j = to_json(solve(Disorder(ModelParams(2, 0.0), {code_of({1, 1})}), Backend::kGrayCode));
  EXPECT_EQ(j.at("count"), 3);
  EXPECT_EQ(j.at("empty"), false);
  EXPECT_EQ(j.at("backend"), "graycode");
  EXPECT_TRUE(j.at("witness").is_string());
  EXPECT_TRUE(to_json(solve(Disorder(ModelParams(1, 0.0), {0, 1}))).at("witness").is_null());
}

TEST(Backend, NamesRoundTrip) {
  for (auto b : kBackends) EXPECT_EQ(parse_backend(to_string(b)), b);
  EXPECT_THROW(parse_backend("fast"), std::invalid_argument);
}

}  // namespace
}  // namespace perclab
