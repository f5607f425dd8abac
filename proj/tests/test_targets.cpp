#include <gtest/gtest.h>

#include "edgeseg/edges.hpp"
#include "edgeseg/targets.hpp"
#include "oracles.hpp"

using namespace edgeseg;

TEST(OneHotRegions, ChannelMap) {
  LabelVolume l({4, 1, 1});
  l[0] = 4;
  l[2] = 1;
  l[3] = 2;
  const auto s = onehot_regions(l);
  EXPECT_EQ(s.channels(), 4);
  EXPECT_EQ(s.data.col(0).cast<int>(), (Eigen::Vector4i(0, 0, 0, 1)));
  EXPECT_EQ(s.data.col(1).cast<int>(), (Eigen::Vector4i(1, 0, 0, 0)));
  EXPECT_EQ(s.data.col(2).cast<int>(), (Eigen::Vector4i(0, 1, 0, 0)));
  EXPECT_EQ(s.data.col(3).cast<int>(), (Eigen::Vector4i(0, 0, 1, 0)));
  EXPECT_EQ(s.channel_names, region_channel_names());
}

TEST(OneHotRegionsEdges, PrecedenceAndInterior) {
  LabelVolume l({2, 1, 1});
  l[0] = 4;
  l[1] = 2;
  EdgeVolume e({2, 1, 1});
  e[0] = 4;
  const auto s = onehot_regions_edges(l, e);
  EXPECT_EQ(s.data(3, 0), 1);  // ET edge
  EXPECT_EQ(s.data(6, 0), 0);  // ET interior
  EXPECT_EQ(s.data(5, 1), 1);  // ED interior
}

TEST(OneHotRegionsEdges, SingleVoxelIsAllEdge) {
  LabelVolume l({3, 3, 3});
  l(1, 1, 1) = 1;
  const auto e = extract_edges(l);
  ASSERT_EQ(e, oracle_boundary(l));
  const auto s = onehot_regions_edges(l, e);
  EXPECT_EQ(s.data.row(4).cast<int>().sum(), 0);
  EXPECT_EQ(s.data(1, static_cast<Eigen::Index>(flat_index({1, 1, 1}, l.dims))), 1);
}

TEST(OneHotRegionsEdges, InconsistentEdgesRejected) {
  LabelVolume l({2, 1, 1});
  l[0] = 1;
  EdgeVolume e({2, 1, 1});
  e[0] = 2;
  EXPECT_THROW(onehot_regions_edges(l, e), UsageError);
  e[0] = 0;
  e[1] = 4;
  EXPECT_THROW(onehot_regions_edges(l, e), UsageError);
  EXPECT_THROW(onehot_regions_edges(l, EdgeVolume({3, 1, 1})), UsageError);
}

TEST(Argmax, TiesAndBasics) {
  Eigen::MatrixXd p(4, 3);
  p.col(0) << 0.1, 0.7, 0.1, 0.1;
  p.col(1) << 0.5, 0.5, 0.0, 0.0;
  p.col(2) << 0.0, 0.0, 0.0, 1.0;
  const auto c = argmax_labels(ProbabilityStack{{3, 1, 1}, {}, p});
  EXPECT_EQ(c[0], 1);
  EXPECT_EQ(c[1], 0);
  EXPECT_EQ(c[2], 3);
}

TEST(Fuse, Map) {
  ClassVolume c({7, 1, 1});
  for (int i = 0; i < 7; ++i) c[i] = static_cast<std::uint8_t>(i);
  const auto l = fuse_prediction(c);
  const std::uint8_t expect[7] = {0, 1, 2, 4, 1, 2, 4};
  for (int i = 0; i < 7; ++i) EXPECT_EQ(l[i], expect[i]);
  c[0] = 7;
  EXPECT_THROW(fuse_prediction(c), UsageError);
}

TEST(Targets, RoundTripAndPartitionProperties) {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const Dims d{1 + int(rng.below(10)), 1 + int(rng.below(10)), 1 + int(rng.below(10))};
    const LabelVolume l = trial % 2 ? oracle::random_labels(d, rng) : oracle::blocky_labels(d, rng);
    const auto s7 = onehot_regions_edges(l, extract_edges(l));
    const auto s4 = onehot_regions(l);
    EXPECT_TRUE((s7.data.cast<int>().colwise().sum().array() == 1).all());
    EXPECT_TRUE((s4.data.cast<int>().colwise().sum().array() == 1).all());
    EXPECT_EQ(static_cast<std::size_t>(s7.data.cast<long>().sum()), d.count());
    EXPECT_EQ(fuse_prediction(argmax_labels(s7)), static_cast<const Grid<std::uint8_t>&>(l));
    EXPECT_EQ(region_classes_to_labels(argmax_labels(s4)), static_cast<const Grid<std::uint8_t>&>(l));
  }
}
