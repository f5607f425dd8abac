#pragma once

#include <filesystem>
#include <string>

#include "edgeseg/grid.hpp"
#include "edgeseg/targets.hpp"

namespace edgeseg {

/// Binary PGM (P5) of one channel at slice z: pixel = round(255 p), rows y
/// ascending, columns x ascending.
std::string encode_activation_slice(const ProbabilityStack& probs, int channel, int z);
void export_activation_slice(const ProbabilityStack& probs, int channel, int z, const std::filesystem::path& path);

/// Grey level used for each label in overlays: NCR/NET 85, ED 170, ET 255.
unsigned char label_grey(std::uint8_t label);

/// Binary PPM (P6) of slice z: labels in grey on black, edge voxels pure red.
std::string encode_edge_overlay(const LabelVolume& labels, const EdgeVolume& edges, int z);
void export_edge_overlay(const LabelVolume& labels, const EdgeVolume& edges, int z, const std::filesystem::path& path);

}  // namespace edgeseg
