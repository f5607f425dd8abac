#pragma once

#include "edgeseg/grid.hpp"

namespace edgeseg {

/// Brain support: true wherever the voxel is nonzero (BraTS volumes are
/// skull-stripped with an exact-zero background).
Mask brain_mask(const Volume& vol);

/// Mean and population standard deviation over the masked voxels, two-pass in double.
struct MaskedMoments {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};
MaskedMoments masked_moments(const Volume& vol, const Mask& mask);

/// Z-scores the brain voxels; background stays exactly 0.
/// Throws DomainError("no brain region") for fewer than 2 brain voxels and
/// DomainError("degenerate intensity distribution") for zero variance.
Volume zscore_normalize(const Volume& vol);

}  // namespace edgeseg
