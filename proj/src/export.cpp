#include "edgeseg/export.hpp"

#include <algorithm>
#include <cmath>

#include "edgeseg/fileio.hpp"

namespace edgeseg {

namespace {

void check_slice(const Dims& d, int z) {
  if (z < 0 || z >= d.nz) throw UsageError("slice " + std::to_string(z) + " out of range [0, " + std::to_string(d.nz) + ")");
}

std::string image_header(const char* magic, const Dims& d) {
  return std::string(magic) + "\n" + std::to_string(d.nx) + " " + std::to_string(d.ny) + "\n255\n";
}

}  // namespace

std::string encode_activation_slice(const ProbabilityStack& probs, int channel, int z) {
  check_slice(probs.dims, z);
  if (channel < 0 || channel >= probs.channels())
    throw UsageError("channel " + std::to_string(channel) + " out of range for a " + std::to_string(probs.channels()) + "-channel stack");
  std::string out = image_header("P5", probs.dims);
  for (int y = 0; y < probs.dims.ny; ++y)
    for (int x = 0; x < probs.dims.nx; ++x) {
      const double p = probs.data(channel, static_cast<Eigen::Index>(flat_index({x, y, z}, probs.dims)));
      const long px = std::clamp(std::lround(255.0 * p), 0L, 255L);
      out.push_back(static_cast<char>(px));
    }
  return out;
}

void export_activation_slice(const ProbabilityStack& probs, int channel, int z, const std::filesystem::path& path) {
  write_file_atomic(path, encode_activation_slice(probs, channel, z));
}

unsigned char label_grey(std::uint8_t label) {
  switch (label) {
    case kNcrNet: return 85;
    case kEdema: return 170;
    case kEnhancing: return 255;
    default: return 0;
  }
}

std::string encode_edge_overlay(const LabelVolume& labels, const EdgeVolume& edges, int z) {
  require_same_dims(labels, edges, "export_edge_overlay");
  check_slice(labels.dims, z);
  std::string out = image_header("P6", labels.dims);
  for (int y = 0; y < labels.dims.ny; ++y)
    for (int x = 0; x < labels.dims.nx; ++x) {
      if (edges(x, y, z) != 0) {
        out += {static_cast<char>(255), 0, 0};
      } else {
        const auto g = static_cast<char>(label_grey(labels(x, y, z)));
        out += {g, g, g};
      }
    }
  return out;
}

void export_edge_overlay(const LabelVolume& labels, const EdgeVolume& edges, int z, const std::filesystem::path& path) {
  write_file_atomic(path, encode_edge_overlay(labels, edges, z));
}

}  // namespace edgeseg
