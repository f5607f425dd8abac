#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edgeseg/grid.hpp"

namespace edgeseg {

/// Axis-aligned ellipsoid in voxel coordinates.
struct Ellipsoid {
  std::array<double, 3> center{};
  std::array<double, 3> radii{};

  bool contains(double x, double y, double z) const;
};

/// Three concentric tumour ellipsoids: outer extent (whole tumour), middle
/// (tumour core) and inner (enhancing).
struct PhantomGeometry {
  Ellipsoid whole;
  Ellipsoid core;
  Ellipsoid enhancing;
};

/// Base intensities per modality, ordered [healthy brain, NCR/NET, ED, ET].
/// Outside the brain ball every modality is exactly 0.
struct IntensityLevels {
  std::array<double, 4> flair{1.0, 1.3, 2.2, 1.6};
  std::array<double, 4> t1ce{1.0, 0.5, 0.9, 2.6};
  std::array<double, 4> t2{1.0, 2.4, 1.5, 1.2};
};

struct PhantomSpec {
  std::uint64_t seed = 0;
  int size = 64;
  double noise_sigma = 0.05;
  /// Drawn from the seed when unset.
  std::optional<PhantomGeometry> geometry;
  /// Label the inner ellipsoid NCR/NET instead of ET while keeping its
  /// enhancing appearance (a patient without an ET region).
  bool empty_enhancing = false;
  IntensityLevels levels;
};

struct Phantom {
  Volume flair;
  Volume t1ce;
  Volume t2;
  LabelVolume labels;
  PhantomGeometry geometry;
};

inline constexpr double kPhantomMargin = 2.0;

/// Brain ball: centred, radius 0.47 * size.
Ellipsoid brain_ball(int size);

/// Throws UsageError unless the ellipsoids are concentric, nested with at
/// least kPhantomMargin voxels per axis, and inside the brain ball with that margin.
void validate_geometry(const PhantomGeometry& g, int size);

Phantom generate_phantom(const PhantomSpec& spec);

/// Every case whose index is a multiple of this stride has no ET label.
inline constexpr int kEmptyEnhancingStride = 5;

std::string phantom_case_name(int index);

/// Writes cases phantom_000 .. phantom_{n-1} (flair.nii, t1ce.nii, t2.nii,
/// seg.nii) with per-case seed `seed + index`. Returns the case directories.
std::vector<std::filesystem::path> generate_cohort(int count, std::uint64_t seed, int size, double noise_sigma,
                                                   const std::filesystem::path& out_dir);

}  // namespace edgeseg
