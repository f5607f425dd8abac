#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgeseg/grid.hpp"

namespace edgeseg {

enum class Region { WT, TC, ET };

inline constexpr std::array<Region, 3> kRegions = {Region::WT, Region::TC, Region::ET};

std::string_view region_name(Region r);
/// Inverse of region_name; throws UsageError.
Region parse_region(std::string_view name);

/// Whole tumour {1,2,4}, tumour core {1,4}, enhancing tumour {4}.
struct RegionMasks {
  Mask wt;
  Mask tc;
  Mask et;

  const Mask& operator[](Region r) const;
};

RegionMasks region_masks(const LabelVolume& labels);

/// 2TP / ((TP+FP) + (TP+FN)). Both masks empty is a DomainError; the caller owns that convention.
double dice(const Mask& pred, const Mask& gt);

/// Squared distance in mm^2 from every voxel to the nearest nonzero voxel of
/// `features` (exact Euclidean, separable lower-envelope transform). Infinite
/// everywhere if `features` is empty.
Grid<double> squared_distance_transform(const Mask& features);

/// For each x in X, Euclidean distance to the nearest y in Y (voxel centres
/// scaled by spacing). Ascending. Throws DomainError if either set is empty.
std::vector<double> directed_distances(std::span<const VoxelCoord> from, std::span<const VoxelCoord> to,
                                       const Spacing& spacing);
/// Same, over the nonzero voxels of two masks on one grid.
std::vector<double> directed_distances(const Mask& from, const Mask& to);

/// Linear interpolation at fractional index p*(N-1) of an ascending list.
double percentile(std::span<const double> sorted, double p);

/// max of the 95th percentiles of both directed distance lists.
double hd95(std::span<const VoxelCoord> x, std::span<const VoxelCoord> y, const Spacing& spacing);
double hd95(const Mask& a, const Mask& b);

/// Score assigned when exactly one of prediction / ground truth is empty.
inline constexpr double kPenaltyDice = 0.0;
inline constexpr double kPenaltyHd95 = 373.12866;

struct MetricsRecord {
  std::string subject;
  Region region = Region::WT;
  double dice = 0.0;
  double hd95 = 0.0;
  bool penalized = false;
};

/// One record per region. Both empty: dice 1, hd95 0. Exactly one empty: penalty.
std::array<MetricsRecord, 3> evaluate_patient(const LabelVolume& pred, const LabelVolume& gt, const std::string& subject);

/// CSV row format shared by the evaluate command and the report reader.
inline constexpr std::string_view kMetricsCsvHeader = "subject,region,dice,hd95,penalized";
std::string format_metrics_row(const MetricsRecord& r);
std::vector<MetricsRecord> parse_metrics_csv(std::string_view text);

}  // namespace edgeseg
