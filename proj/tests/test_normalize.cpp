#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "edgeseg/normalize.hpp"
#include "oracles.hpp"

using namespace edgeseg;

namespace {

// Independent two-pass moments over nonzero voxels.
std::pair<double, double> oracle_moments(const Volume& v, const Volume& support) {
  std::vector<double> vals;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (support[i] != 0.0f) vals.push_back(v[i]);
  const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
  double ss = 0.0;
  for (double x : vals) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / vals.size())};
}

}  // namespace

TEST(BrainMask, NonzeroRule) {
  Volume v({3, 3, 3});
  EXPECT_EQ(brain_mask(v).data.cast<int>().sum(), 0);
  v[4] = 7.0f;
  EXPECT_EQ(brain_mask(v).data.cast<int>().sum(), 1);
  v[5] = -1.5f;
  EXPECT_EQ(brain_mask(v)[5], 1);
}

TEST(Zscore, SymmetricTwoPoint) {
  Volume v({2, 2, 1});
  v[0] = 2.0f;
  v[3] = 4.0f;
  const Volume z = zscore_normalize(v);
  EXPECT_FLOAT_EQ(z[0], -1.0f);
  EXPECT_FLOAT_EQ(z[3], 1.0f);
  EXPECT_EQ(z[1], 0.0f);
  EXPECT_EQ(z[2], 0.0f);
}

TEST(Zscore, ErrorCases) {
  Volume v({3, 3, 3});
  EXPECT_THROW(zscore_normalize(v), DomainError);
  v[0] = 1.0f;
  EXPECT_THROW(zscore_normalize(v), DomainError);
  v.data.setConstant(3.0f);
  try {
    zscore_normalize(v);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_STREQ(e.what(), "degenerate intensity distribution");
  }
}

TEST(Zscore, GaussianSampleMoments) {
  std::mt19937_64 gen(42);
  std::normal_distribution<double> dist(5.0, 3.0);
  Volume v({20, 10, 10});
  for (int i = 0; i < 1000; ++i) {
    float x;
    do x = static_cast<float>(dist(gen));
    while (x == 0.0f);
    v[2 * i] = x;
  }
  const Volume z = zscore_normalize(v);
  const auto [mean, sd] = oracle_moments(z, v);
  EXPECT_LT(std::abs(mean), 1e-5);
  EXPECT_LT(std::abs(sd - 1.0), 1e-5);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == 0.0f) EXPECT_EQ(z[i], 0.0f);
}

TEST(Zscore, PreservesRankOrder) {
  SplitMix64 rng(9);
  Volume v({8, 8, 8});
  for (std::size_t i = 0; i < v.size(); ++i)
    if (rng.uniform() < 0.6) v[i] = static_cast<float>(rng.uniform(1.0, 50.0));
  const Volume z = zscore_normalize(v);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0f) idx.push_back(i);
  for (std::size_t a = 0; a + 1 < idx.size(); ++a) {
    const auto i = idx[a], j = idx[a + 1];
    if (v[i] < v[j]) EXPECT_LE(z[i], z[j]);
    if (v[i] > v[j]) EXPECT_GE(z[i], z[j]);
  }
}

TEST(Zscore, IdempotentWithinTolerance) {
  SplitMix64 rng(21);
  Volume v({10, 10, 10});
  for (std::size_t i = 0; i < v.size(); ++i)
    if (rng.uniform() < 0.5) v[i] = static_cast<float>(rng.uniform(10.0, 20.0));
  const Volume once = zscore_normalize(v);
  ASSERT_EQ(brain_mask(once).data.cast<int>().sum(), brain_mask(v).data.cast<int>().sum());
  const Volume twice = zscore_normalize(once);
  EXPECT_LT((twice.data - once.data).abs().maxCoeff(), 1e-5f);
}
