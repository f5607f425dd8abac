#include "edgeseg/edges.hpp"

namespace edgeseg {

ResponseVolume laplacian26_response(const LabelVolume& labels) {
  const Dims d = labels.dims;
  ResponseVolume t(d, labels.spacing);

  // Separable box sum over the zero-padded 3x3x3 window, then T = 27 v - box.
  Grid<std::int32_t> sx(d), sxy(d);
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x)
        sx(x, y, z) = labels.at_or_zero(x - 1, y, z) + labels(x, y, z) + labels.at_or_zero(x + 1, y, z);
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x)
        sxy(x, y, z) = sx.at_or_zero(x, y - 1, z) + sx(x, y, z) + sx.at_or_zero(x, y + 1, z);
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        const std::int32_t box = sxy.at_or_zero(x, y, z - 1) + sxy(x, y, z) + sxy.at_or_zero(x, y, z + 1);
        t(x, y, z) = 27 * static_cast<std::int32_t>(labels(x, y, z)) - box;
      }
  return t;
}

EdgeVolume reconstruct_edges(const LabelVolume& labels, const ResponseVolume& response) {
  require_same_dims(labels, response, "reconstruct_edges");
  EdgeVolume out(labels.dims, labels.spacing);
  out.data = (response.data != 0).select(labels.data, std::uint8_t{0});
  return out;
}

EdgeVolume extract_edges(const LabelVolume& labels) {
  return reconstruct_edges(labels, laplacian26_response(labels));
}

EdgeVolume oracle_boundary(const LabelVolume& labels) {
  const Dims d = labels.dims;
  EdgeVolume out(d, labels.spacing);
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        const std::uint8_t v = labels(x, y, z);
        if (v == 0) continue;
        bool differs = false;
        for (int dz = -1; dz <= 1 && !differs; ++dz)
          for (int dy = -1; dy <= 1 && !differs; ++dy)
            for (int dx = -1; dx <= 1 && !differs; ++dx)
              differs = labels.at_or_zero(x + dx, y + dy, z + dz) != v;
        if (differs) out(x, y, z) = v;
      }
  return out;
}

}  // namespace edgeseg
