#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "edgeseg/grid.hpp"

namespace edgeseg {

/// Per-voxel exclusive channel encoding. `data` is channels x voxels with one
/// column per voxel, so storage is channel-fastest.
struct OneHotStack {
  using Matrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

  Dims dims;
  Spacing spacing;
  Matrix data;
  std::vector<std::string> channel_names;

  int channels() const { return static_cast<int>(data.rows()); }
};

/// SoftMax output: channels x voxels, one column per voxel.
struct ProbabilityStack {
  Dims dims;
  Spacing spacing;
  Eigen::MatrixXd data;

  int channels() const { return static_cast<int>(data.rows()); }
};

/// Per-voxel class index (0..C-1).
using ClassVolume = Grid<std::uint8_t>;

inline constexpr int kRegionChannels = 4;
inline constexpr int kEdgeChannels = 7;

/// [background, NCR/NET, ED, ET]
const std::vector<std::string>& region_channel_names();
/// [background, NCR/NET-edge, ED-edge, ET-edge, NCR/NET-interior, ED-interior, ET-interior]
const std::vector<std::string>& edge_channel_names();

/// BraTS label -> region channel {0->0, 1->1, 2->2, 4->3}.
int region_channel_of(std::uint8_t label);

OneHotStack onehot_regions(const LabelVolume& labels);

/// Edge voxels go to their edge channel, other labelled voxels to their
/// interior channel. Throws UsageError if a nonzero edge voxel disagrees
/// with the label volume.
OneHotStack onehot_regions_edges(const LabelVolume& labels, const EdgeVolume& edges);

/// Index of the maximal entry of each column; ties go to the lowest index.
template <typename Derived>
ClassVolume argmax_columns(const Eigen::MatrixBase<Derived>& stack, const Dims& dims, const Spacing& spacing = {}) {
  if (static_cast<std::size_t>(stack.cols()) != dims.count()) throw UsageError("argmax: stack size does not match dims");
  ClassVolume out(dims, spacing);
  for (Eigen::Index v = 0; v < stack.cols(); ++v) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < stack.rows(); ++c)
      if (stack(c, v) > stack(best, v)) best = c;
    out.data[v] = static_cast<std::uint8_t>(best);
  }
  return out;
}

inline ClassVolume argmax_labels(const ProbabilityStack& probs) {
  return argmax_columns(probs.data, probs.dims, probs.spacing);
}
inline ClassVolume argmax_labels(const OneHotStack& stack) {
  return argmax_columns(stack.data, stack.dims, stack.spacing);
}

/// Maps 7-channel class indices back to BraTS labels
/// {0->0, 1->1, 2->2, 3->4, 4->1, 5->2, 6->4}.
LabelVolume fuse_prediction(const ClassVolume& classes, int channels = kEdgeChannels);

/// 4-channel class indices back to BraTS labels {0->0, 1->1, 2->2, 3->4}.
inline LabelVolume region_classes_to_labels(const ClassVolume& classes) {
  return fuse_prediction(classes, kRegionChannels);
}

/// Edge voxels implied by a 7-channel class volume: edge classes keep their label.
EdgeVolume edges_from_classes(const ClassVolume& classes);

}  // namespace edgeseg
