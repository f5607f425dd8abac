#include "edgeseg/targets.hpp"

#include <array>

namespace edgeseg {

namespace {

constexpr std::array<std::uint8_t, 7> kFuse7 = {0, 1, 2, 4, 1, 2, 4};
constexpr std::array<std::uint8_t, 4> kFuse4 = {0, 1, 2, 4};

}  // namespace

const std::vector<std::string>& region_channel_names() {
  static const std::vector<std::string> names = {"background", "ncr_net", "edema", "enhancing"};
  return names;
}

const std::vector<std::string>& edge_channel_names() {
  static const std::vector<std::string> names = {"background",        "ncr_net_edge",     "edema_edge",
                                                 "enhancing_edge",    "ncr_net_interior", "edema_interior",
                                                 "enhancing_interior"};
  return names;
}

int region_channel_of(std::uint8_t label) {
  switch (label) {
    case 0: return 0;
    case 1: return 1;
    case 2: return 2;
    case 4: return 3;
    default: throw UsageError("label " + std::to_string(label) + " outside {0,1,2,4}");
  }
}

OneHotStack onehot_regions(const LabelVolume& labels) {
  OneHotStack stack{labels.dims, labels.spacing,
                    OneHotStack::Matrix::Zero(kRegionChannels, static_cast<Eigen::Index>(labels.size())),
                    region_channel_names()};
  for (std::size_t v = 0; v < labels.size(); ++v)
    stack.data(region_channel_of(labels[v]), static_cast<Eigen::Index>(v)) = 1;
  return stack;
}

OneHotStack onehot_regions_edges(const LabelVolume& labels, const EdgeVolume& edges) {
  require_same_dims(labels, edges, "onehot_regions_edges");
  OneHotStack stack{labels.dims, labels.spacing,
                    OneHotStack::Matrix::Zero(kEdgeChannels, static_cast<Eigen::Index>(labels.size())),
                    edge_channel_names()};
  for (std::size_t v = 0; v < labels.size(); ++v) {
    const std::uint8_t label = labels[v];
    const std::uint8_t edge = edges[v];
    if (edge != 0 && edge != label) {
      const auto c = coord_of(v, labels.dims);
      throw UsageError("edge volume disagrees with labels at (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                       "," + std::to_string(c.z) + ")");
    }
    const int region = region_channel_of(label);
    int channel = 0;
    if (region != 0) channel = edge != 0 ? region : region + 3;
    stack.data(channel, static_cast<Eigen::Index>(v)) = 1;
  }
  return stack;
}

LabelVolume fuse_prediction(const ClassVolume& classes, int channels) {
  if (channels != kRegionChannels && channels != kEdgeChannels) throw UsageError("fuse_prediction: channels must be 4 or 7");
  LabelVolume out(classes.dims, classes.spacing);
  for (std::size_t v = 0; v < classes.size(); ++v) {
    const unsigned c = classes[v];
    if (c >= static_cast<unsigned>(channels)) throw UsageError("class index " + std::to_string(c) + " out of range");
    out[v] = channels == kEdgeChannels ? kFuse7[c] : kFuse4[c];
  }
  return out;
}

EdgeVolume edges_from_classes(const ClassVolume& classes) {
  EdgeVolume out(classes.dims, classes.spacing);
  for (std::size_t v = 0; v < classes.size(); ++v) {
    const unsigned c = classes[v];
    if (c >= 1 && c <= 3) out[v] = kFuse7[c];
  }
  return out;
}

}  // namespace edgeseg
