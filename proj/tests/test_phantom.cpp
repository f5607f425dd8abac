#include <gtest/gtest.h>

#include <map>

#include "edgeseg/fileio.hpp"
#include "edgeseg/metrics.hpp"
#include "edgeseg/nifti.hpp"
#include "edgeseg/phantom.hpp"
#include "oracles.hpp"

using namespace edgeseg;

TEST(Phantom, Deterministic) {
  PhantomSpec spec;
  spec.seed = 99;
  spec.size = 24;
  const Phantom a = generate_phantom(spec), b = generate_phantom(spec);
  EXPECT_EQ(a.flair, b.flair);
  EXPECT_EQ(a.t1ce, b.t1ce);
  EXPECT_EQ(a.t2, b.t2);
  EXPECT_EQ(a.labels, b.labels);
  spec.seed = 100;
  EXPECT_FALSE(generate_phantom(spec).flair == a.flair);
}

TEST(Phantom, NestedCensus) {
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    for (int size : {16, 32, 64}) {
      PhantomSpec spec;
      spec.seed = seed;
      spec.size = size;
      const Phantom ph = generate_phantom(spec);
      validate_labels(ph.labels);
      const auto m = region_masks(ph.labels);
      const int wt = m.wt.data.cast<int>().sum(), tc = m.tc.data.cast<int>().sum(), et = m.et.data.cast<int>().sum();
      EXPECT_GT(et, 0) << "seed " << seed << " size " << size;
      EXPECT_LT(et, tc);
      EXPECT_LT(tc, wt);
      EXPECT_TRUE(((m.tc.data <= m.wt.data) && (m.et.data <= m.tc.data)).all());
    }
}

TEST(Phantom, NoiseFreeLevelsFollowModalityContrast) {
  PhantomSpec spec;
  spec.seed = 5;
  spec.size = 32;
  spec.noise_sigma = 0.0;
  const Phantom ph = generate_phantom(spec);
  const Ellipsoid brain = brain_ball(spec.size);

  // Census: region -> set of observed intensities per modality.
  std::map<int, std::map<int, std::vector<float>>> seen;
  for (std::size_t i = 0; i < ph.labels.size(); ++i) {
    const auto c = coord_of(i, ph.labels.dims);
    const int region = brain.contains(c.x, c.y, c.z) ? ph.labels[i] : -1;
    seen[region][0].push_back(ph.flair[i]);
    seen[region][1].push_back(ph.t1ce[i]);
    seen[region][2].push_back(ph.t2[i]);
  }
  auto level = [&](int region, int modality) {
    const auto& v = seen.at(region).at(modality);
    for (float x : v) EXPECT_EQ(x, v.front());
    return v.front();
  };
  for (int m = 0; m < 3; ++m) EXPECT_EQ(level(-1, m), 0.0f);
  const IntensityLevels lv;
  EXPECT_EQ(level(0, 0), static_cast<float>(lv.flair[0]));
  EXPECT_EQ(level(2, 0), static_cast<float>(lv.flair[2]));
  EXPECT_EQ(level(4, 1), static_cast<float>(lv.t1ce[3]));
  EXPECT_EQ(level(1, 2), static_cast<float>(lv.t2[1]));
  // ED brightest in FLAIR, ET in T1CE, NCR/NET in T2.
  for (int r : {0, 1, 4}) EXPECT_GT(level(2, 0), level(r, 0));
  for (int r : {0, 1, 2}) EXPECT_GT(level(4, 1), level(r, 1));
  for (int r : {0, 2, 4}) EXPECT_GT(level(1, 2), level(r, 2));
}

TEST(Phantom, EmptyEnhancingKeepsMimic) {
  PhantomSpec spec;
  spec.seed = 3;
  spec.size = 32;
  spec.noise_sigma = 0.0;
  spec.empty_enhancing = true;
  const Phantom ph = generate_phantom(spec);
  EXPECT_EQ(region_masks(ph.labels).et.data.cast<int>().sum(), 0);
  EXPECT_EQ(ph.t1ce.data.maxCoeff(), static_cast<float>(IntensityLevels{}.t1ce[3]));
}

TEST(Phantom, GeometryValidation) {
  PhantomGeometry g;
  g.whole = {{15.5, 15.5, 15.5}, {8, 8, 8}};
  g.core = {{15.5, 15.5, 15.5}, {5, 5, 5}};
  g.enhancing = {{15.5, 15.5, 15.5}, {2, 2, 2}};
  EXPECT_NO_THROW(validate_geometry(g, 32));
  g.core.radii[1] = 2.5;
  EXPECT_THROW(validate_geometry(g, 32), UsageError);
  g.core.radii[1] = 5;
  g.whole.center[0] = 25;
  g.core.center[0] = g.enhancing.center[0] = 25;
  EXPECT_THROW(validate_geometry(g, 32), UsageError);
  PhantomSpec spec;
  spec.size = 32;
  spec.geometry = g;
  EXPECT_THROW(generate_phantom(spec), UsageError);
  spec.geometry.reset();
  spec.size = 8;
  EXPECT_THROW(generate_phantom(spec), UsageError);
}

TEST(Cohort, LayoutStrideAndDeterminism) {
  const auto a = oracle::scratch_dir("cohort_a");
  const auto b = oracle::scratch_dir("cohort_b");
  const auto cases = generate_cohort(5, 7, 16, 0.05, a);
  generate_cohort(5, 7, 16, 0.05, b);
  ASSERT_EQ(cases.size(), 5u);
  int empty_et = 0;
  for (int i = 0; i < 5; ++i) {
    const auto name = phantom_case_name(i);
    for (const char* f : {"flair.nii", "t1ce.nii", "t2.nii", "seg.nii"}) {
      ASSERT_TRUE(std::filesystem::exists(a / name / f));
      EXPECT_EQ(read_file(a / name / f), read_file(b / name / f));
    }
    const auto m = region_masks(read_labels(a / name / "seg.nii"));
    if (m.et.data.cast<int>().sum() == 0) {
      ++empty_et;
      EXPECT_EQ(i, 0);
    }
  }
  EXPECT_EQ(empty_et, 1);

  const auto one = oracle::scratch_dir("cohort_one");
  generate_cohort(1, 0, 16, 0.05, one);
  int files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(one)) files += e.is_regular_file();
  EXPECT_EQ(files, 4);
  EXPECT_THROW(generate_cohort(0, 0, 16, 0.05, one), UsageError);
}
