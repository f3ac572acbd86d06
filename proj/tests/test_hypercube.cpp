#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "perclab/hypercube.hpp"
#include "oracles.hpp"

namespace perclab {
namespace {

SpinVector spins(std::initializer_list<int> s) { return SpinVector::from_spins(std::vector<int>(s)); }

SpinVector random_vector(std::mt19937_64& rng, unsigned n) {
  std::vector<int> s(n);
  for (auto& v : s) v = (rng() & 1U) ? 1 : -1;
  return SpinVector::from_spins(s);
}

Permutation random_permutation(std::mt19937_64& rng, unsigned n) {
  std::vector<std::uint32_t> img(n);
  for (std::uint32_t i = 0; i < n; ++i) img[i] = i;
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation(img);
}

TEST(Dot, SpecExamples) {
  EXPECT_EQ(dot(spins({1, 1, 1, 1}), spins({1, -1, 1, -1})), 0);
  EXPECT_EQ(dot(spins({1, 1, 1}), spins({-1, 1, 1})), 1);
  const auto x = spins({1, -1, -1, 1, 1});
  EXPECT_EQ(dot(x, x), 5);
}

TEST(Dot, DimensionMismatchThrows) {
  EXPECT_THROW(dot(SpinVector(3), SpinVector(4)), std::invalid_argument);
  EXPECT_THROW(hamming(SpinVector(3), SpinVector(4)), std::invalid_argument);
}

TEST(Hamming, SpecExamples) {
  EXPECT_EQ(hamming(spins({1, 1}), spins({1, 1})), 0u);
  EXPECT_EQ(hamming(spins({1, 1}), spins({-1, -1})), 2u);
  EXPECT_EQ(hamming(spins({1, 1, 1, 1, 1}), spins({1, -1, 1, -1, 1})), 2u);
}

TEST(Dot, MatchesComponentSumAcrossWordBoundaries) {
  std::mt19937_64 rng(11);
  for (unsigned n : {1u, 7u, 63u, 64u, 65u, 130u, 4096u}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto x = random_vector(rng, n);
      const auto y = random_vector(rng, n);
      EXPECT_EQ(dot(x, y), oracle::component_dot(x.spins(), y.spins()));
      EXPECT_EQ(dot(x, y), static_cast<int>(n) - 2 * static_cast<int>(hamming(x, y)));
    }
  }
}

TEST(ModelParams, InclusiveThresholdAtExactInteger) {
  // kappa*sqrt(4) = 2 exactly: dot 2 is inside.
  const ModelParams p(4, 1.0);
  EXPECT_EQ(p.min_dot(), 2);
  const auto center = spins({1, 1, 1, 1});
  EXPECT_TRUE(in_halfcube(spins({1, 1, 1, -1}), center, p));
  EXPECT_FALSE(in_halfcube(spins({1, 1, -1, -1}), center, p));
}

TEST(ModelParams, ExactComparisonNearIrrationalThreshold) {
  // 0.5*sqrt(2) = 0.7071...: smallest admissible dot is 1.
  EXPECT_EQ(ModelParams(2, 0.5).min_dot(), 1);
  // sqrt(2)*sqrt(2) rounds to 2.0000000000000004 in double; the exact test
  // must still treat the stored kappa (slightly above sqrt 2) correctly.
  const double k = std::sqrt(2.0);
  const ModelParams p(2, k);
  EXPECT_EQ(p.min_dot(), dot_meets_margin(2, k, 2) ? 2 : 3);
  EXPECT_EQ(ModelParams(9, -1.0).min_dot(), -3);
  EXPECT_EQ(ModelParams(1, 2.0).min_dot(), 2);  // H empty: n + 1
  EXPECT_EQ(ModelParams(5, -100.0).min_dot(), -5);
  EXPECT_EQ(ModelParams(5, 1e300).min_dot(), 6);
}

TEST(ModelParams, MinDotAgreesWithLongDoubleAwayFromTies) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> kd(-3.0, 3.0);
  for (int rep = 0; rep < 2000; ++rep) {
    const unsigned n = 1 + rng() % 100;
    const double kappa = kd(rng);
    const ModelParams p(n, kappa);
    const long double t = static_cast<long double>(kappa) * std::sqrt(static_cast<long double>(n));
    for (int d = -static_cast<int>(n); d <= static_cast<int>(n); ++d) {
      if (std::fabs(static_cast<long double>(d) - t) < 1e-9L) continue;
      EXPECT_EQ(p.admits(d), static_cast<long double>(d) >= t) << "n=" << n << " kappa=" << kappa << " d=" << d;
    }
  }
}

TEST(ModelParams, RejectsBadInput) {
  EXPECT_THROW(ModelParams(0, 0.0), std::invalid_argument);
  EXPECT_THROW(ModelParams(3, std::nan("")), std::invalid_argument);
}

TEST(InHalfcube, SpecExamples) {
  const ModelParams k0n1(1, 0.0);
  EXPECT_FALSE(in_halfcube(spins({-1}), spins({1}), k0n1));
  const ModelParams k0(6, 0.0);
  const auto x = spins({1, -1, 1, 1, -1, -1});
  EXPECT_TRUE(in_halfcube(x, x, k0));
}

TEST(SignSwitch, SpecExamples) {
  const auto x = spins({1, -1, 1});
  EXPECT_EQ(SignSwitch::identity(3).apply(x), x);
  EXPECT_EQ(apply_sign_switch(SignSwitch(spins({-1, 1})), spins({1, 1})), spins({-1, 1}));

  // Image of H((1,1)) under g = (-1,-1) is H((-1,-1)) at kappa = 0.
  const ModelParams p(2, 0.0);
  const SignSwitch g(spins({-1, -1}));
  std::set<SpinVector> image;
  for (const auto& y : halfcube_members(spins({1, 1}), p)) image.insert(g.apply(y));
  const auto target = halfcube_members(spins({-1, -1}), p);
  EXPECT_EQ(image, std::set<SpinVector>(target.begin(), target.end()));
}

TEST(Permutation, SpecExamples) {
  const auto x = spins({1, -1, -1});
  EXPECT_EQ(Permutation::identity(3).apply(x), x);
  // Cycle 1->2->3->1 (0-based 0->1->2->0).
  const Permutation cycle({1, 2, 0});
  EXPECT_EQ(apply_permutation(cycle, x), spins({-1, 1, -1}));
  EXPECT_EQ(cycle.apply(SpinVector::all_plus(3)), SpinVector::all_plus(3));
  EXPECT_EQ(cycle.apply(SpinVector(3)), SpinVector(3));
}

TEST(Permutation, RejectsNonBijection) {
  EXPECT_THROW(Permutation({0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation({0, 3, 1}), std::invalid_argument);
}

TEST(Automorphisms, InvolutionAndIsometryProperties) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 500; ++rep) {
    const unsigned n = 1 + rng() % 150;
    const auto x = random_vector(rng, n);
    const auto y = random_vector(rng, n);
    const SignSwitch g(random_vector(rng, n));
    const auto sigma = random_permutation(rng, n);
    EXPECT_EQ(g.apply(g.apply(x)), x);
    EXPECT_EQ(sigma.apply(sigma.inverse().apply(x)), x);
    EXPECT_EQ(sigma.compose(sigma.inverse()), Permutation::identity(n));
    EXPECT_EQ(dot(g.apply(x), g.apply(y)), dot(x, y));
    EXPECT_EQ(dot(sigma.apply(x), sigma.apply(y)), dot(x, y));
  }
}

TEST(Automorphisms, HalfcubesMapElementwise) {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const unsigned n = 1 + rng() % 12;
    const ModelParams p(n, std::vector<double>{0.0, 0.5, 1.0, -0.7}[rep % 4]);
    const auto x = random_vector(rng, n);
    const SignSwitch g(random_vector(rng, n));
    const auto sigma = random_permutation(rng, n);

    std::set<SpinVector> gh, sh;
    for (const auto& y : halfcube_members(x, p)) {
      gh.insert(g.apply(y));
      sh.insert(sigma.apply(y));
    }
    const auto hg = halfcube_members(g.apply(x), p);
    const auto hs = halfcube_members(sigma.apply(x), p);
    EXPECT_EQ(gh, std::set<SpinVector>(hg.begin(), hg.end()));
    EXPECT_EQ(sh, std::set<SpinVector>(hs.begin(), hs.end()));
  }
}

TEST(HalfcubeDiff, SpecExamples) {
  const ModelParams p2(2, 0.0);
  EXPECT_EQ(halfcube_diff_size(spins({1, 1}), spins({1, 1}), p2), 0u);
  EXPECT_EQ(halfcube_diff_size(spins({1, 1}), spins({-1, -1}), p2), 1u);
  const ModelParams p1(1, 0.0);
  EXPECT_EQ(halfcube_diff_size(spins({1}), spins({-1}), p1), 1u);
}

TEST(HalfcubeDiff, MatchesBinomialClosedFormAndSetAccounting) {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 150; ++rep) {
    const unsigned n = 1 + rng() % 14;
    const ModelParams p(n, std::vector<double>{0.0, 0.5, 1.0, -0.5, 1.7}[rep % 5]);
    const auto x = random_vector(rng, n);
    const auto y = random_vector(rng, n);
    const auto diff = halfcube_diff_size(x, y, p);
    EXPECT_EQ(diff, oracle::halfcube_diff_closed_form(n, hamming(x, y), p.min_dot()));

    std::uint64_t both = 0;
    for (const auto& z : halfcube_members(x, p)) both += in_halfcube(z, y, p);
    EXPECT_EQ(diff + both, halfcube_size(x, p));
  }
}

TEST(HalfcubeDiff, RefusesAboveExactCap) {
  const ModelParams p(31, 0.0);
  EXPECT_THROW(halfcube_diff_size(SpinVector(31), SpinVector(31), p), ExactRegimeError);
}

TEST(SpinVectorText, FormatAndParse) {
  EXPECT_EQ(spins({1, 1, -1, 1}).to_string(), "4:0xB");
  EXPECT_EQ(SpinVector(5).to_string(), "5:0x0");
  EXPECT_EQ(SpinVector::parse("4:0xB"), spins({1, 1, -1, 1}));
  EXPECT_THROW(SpinVector::parse("4:0x1F"), std::invalid_argument);
  EXPECT_THROW(SpinVector::parse("4:B"), std::invalid_argument);

  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const auto v = random_vector(rng, 1 + rng() % 300);
    EXPECT_EQ(SpinVector::parse(v.to_string()), v);
  }
  auto wide = SpinVector(70);
  wide.set_spin(64, 1);
  wide.set_spin(0, 1);
  EXPECT_EQ(wide.to_string(), "70:0x10000000000000001");
}

}  // namespace
}  // namespace perclab
