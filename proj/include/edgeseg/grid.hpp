#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "edgeseg/errors.hpp"

namespace edgeseg {

/// Voxel counts along x, y, z.
struct Dims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  std::size_t count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
  }
  bool operator==(const Dims&) const = default;
};

/// Millimetres per voxel along x, y, z.
struct Spacing {
  double sx = 1.0;
  double sy = 1.0;
  double sz = 1.0;
  bool operator==(const Spacing&) const = default;
};

struct VoxelCoord {
  int x = 0;
  int y = 0;
  int z = 0;
  bool operator==(const VoxelCoord&) const = default;
};

inline bool in_bounds(const VoxelCoord& c, const Dims& d) {
  return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < d.nx && c.y < d.ny && c.z < d.nz;
}

/// x-fastest flat index: x + nx * (y + ny * z).
inline std::size_t flat_index(const VoxelCoord& c, const Dims& d) {
  return static_cast<std::size_t>(c.x) +
         static_cast<std::size_t>(d.nx) * (static_cast<std::size_t>(c.y) + static_cast<std::size_t>(d.ny) * c.z);
}

inline VoxelCoord coord_of(std::size_t index, const Dims& d) {
  const auto nx = static_cast<std::size_t>(d.nx);
  const auto ny = static_cast<std::size_t>(d.ny);
  return {static_cast<int>(index % nx), static_cast<int>((index / nx) % ny), static_cast<int>(index / (nx * ny))};
}

/// In-bounds coordinates at Chebyshev distance 1 from `c`, in z-major, x-fastest order.
std::vector<VoxelCoord> neighbors26(const VoxelCoord& c, const Dims& dims);

/// Dense 3D grid templated on its scalar type. Data is a flat Eigen array in
/// x-fastest order, matching the NIfTI payload layout.
template <typename Scalar>
struct Grid {
  using ScalarType = Scalar;
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Dims dims;
  Spacing spacing;
  Storage data;

  Grid() = default;
  explicit Grid(const Dims& d, const Spacing& s = {}, Scalar fill = Scalar(0))
      : dims(d), spacing(s), data(Storage::Constant(static_cast<Eigen::Index>(d.count()), fill)) {
    if (d.nx <= 0 || d.ny <= 0 || d.nz <= 0) throw UsageError("grid dimensions must be positive");
  }

  std::size_t size() const { return dims.count(); }

  Scalar& operator()(int x, int y, int z) { return data[static_cast<Eigen::Index>(flat_index({x, y, z}, dims))]; }
  Scalar operator()(int x, int y, int z) const {
    return data[static_cast<Eigen::Index>(flat_index({x, y, z}, dims))];
  }
  Scalar& operator[](std::size_t i) { return data[static_cast<Eigen::Index>(i)]; }
  Scalar operator[](std::size_t i) const { return data[static_cast<Eigen::Index>(i)]; }

  /// Value at (x, y, z), or zero outside the grid.
  Scalar at_or_zero(int x, int y, int z) const {
    if (x < 0 || y < 0 || z < 0 || x >= dims.nx || y >= dims.ny || z >= dims.nz) return Scalar(0);
    return (*this)(x, y, z);
  }

  bool operator==(const Grid& o) const {
    return dims == o.dims && spacing == o.spacing && data.size() == o.data.size() && (data == o.data).all();
  }

  template <typename Other>
  bool same_shape(const Grid<Other>& o) const {
    return dims == o.dims;
  }
};

/// Single MR-like modality.
using Volume = Grid<float>;
/// Boolean support set stored as 0/1 bytes.
using Mask = Grid<std::uint8_t>;
/// Signed convolution response.
using ResponseVolume = Grid<std::int32_t>;

/// Ground-truth / predicted labels over the BraTS alphabet {0, 1, 2, 4}.
struct LabelVolume : Grid<std::uint8_t> {
  using Grid<std::uint8_t>::Grid;
};

/// Edge voxels carry the label of the region they bound; everything else is 0.
using EdgeVolume = LabelVolume;

inline constexpr std::uint8_t kBackground = 0;
inline constexpr std::uint8_t kNcrNet = 1;
inline constexpr std::uint8_t kEdema = 2;
inline constexpr std::uint8_t kEnhancing = 4;

inline bool is_brats_label(unsigned v) { return v == 0 || v == 1 || v == 2 || v == 4; }

/// Throws FormatError naming the first offending voxel if any label is outside {0,1,2,4}.
void validate_labels(const LabelVolume& labels);

/// Throws UsageError unless the two grids have the same dimensions.
template <typename A, typename B>
void require_same_dims(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!(a.dims == b.dims)) throw UsageError(std::string(what) + ": dimension mismatch");
}

}  // namespace edgeseg
