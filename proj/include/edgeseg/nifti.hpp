#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edgeseg/grid.hpp"
#include "edgeseg/targets.hpp"

namespace edgeseg {

/// Payload types we read and write. Anything else is a FormatError.
enum class NiftiType : std::int16_t { UInt8 = 2, Int16 = 4, Float32 = 16 };

/// Decoded single-file NIfTI-1 image. `values` holds the payload in file
/// order (x fastest, then y, z, t) after scl_slope/scl_inter are applied.
struct NiftiImage {
  std::array<int, 4> dim{1, 1, 1, 1};
  Spacing spacing;
  NiftiType datatype = NiftiType::Float32;
  std::vector<double> values;

  Dims dims3() const { return {dim[0], dim[1], dim[2]}; }
};

inline constexpr int kNiftiHeaderSize = 348;
inline constexpr int kNiftiVoxOffset = 352;

NiftiImage decode_nifti(std::string_view bytes);
/// Encodes little-endian, vox_offset 352, no scaling. Values are cast to the
/// image datatype; callers are expected to pass representable values.
std::string encode_nifti(const NiftiImage& image);

NiftiImage read_nifti(const std::filesystem::path& path);
void write_nifti(const NiftiImage& image, const std::filesystem::path& path);

/// Reads a 3D (or 3D x 1) image of any supported type as a float volume.
Volume read_volume(const std::filesystem::path& path);
/// Reads a 3D label image and validates the {0,1,2,4} alphabet.
LabelVolume read_labels(const std::filesystem::path& path);
/// Reads a 4D uint8 stack written by write_nifti(OneHotStack).
OneHotStack read_onehot(const std::filesystem::path& path);

/// Volume as float32.
void write_nifti(const Volume& vol, const std::filesystem::path& path);
/// Labels (and class/edge volumes) as uint8.
void write_nifti(const Grid<std::uint8_t>& labels, const std::filesystem::path& path);
/// Stack as 4D uint8, dim[4] = channels, channel slowest in the file.
void write_nifti(const OneHotStack& stack, const std::filesystem::path& path);

}  // namespace edgeseg
