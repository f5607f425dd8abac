#include "edgeseg/grid.hpp"

#include <string>

namespace edgeseg {

std::vector<VoxelCoord> neighbors26(const VoxelCoord& c, const Dims& dims) {
  std::vector<VoxelCoord> out;
  out.reserve(26);
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        VoxelCoord n{c.x + dx, c.y + dy, c.z + dz};
        if (in_bounds(n, dims)) out.push_back(n);
      }
  return out;
}

void validate_labels(const LabelVolume& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!is_brats_label(labels[i])) {
      const auto c = coord_of(i, labels.dims);
      throw FormatError("label " + std::to_string(labels[i]) + " outside {0,1,2,4} at voxel (" +
                        std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")");
    }
  }
}

}  // namespace edgeseg
