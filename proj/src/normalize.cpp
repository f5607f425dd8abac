#include "edgeseg/normalize.hpp"

#include <cmath>

namespace edgeseg {

Mask brain_mask(const Volume& vol) {
  Mask mask(vol.dims, vol.spacing);
  mask.data = (vol.data != 0.0f).cast<std::uint8_t>();
  return mask;
}

MaskedMoments masked_moments(const Volume& vol, const Mask& mask) {
  require_same_dims(vol, mask, "masked_moments");
  MaskedMoments m;
  double sum = 0.0;
  for (std::size_t i = 0; i < vol.size(); ++i) {
    if (!mask[i]) continue;
    sum += vol[i];
    ++m.count;
  }
  if (m.count == 0) return m;
  m.mean = sum / static_cast<double>(m.count);
  double ss = 0.0;
  for (std::size_t i = 0; i < vol.size(); ++i) {
    if (!mask[i]) continue;
    const double d = vol[i] - m.mean;
    ss += d * d;
  }
  m.stddev = std::sqrt(ss / static_cast<double>(m.count));
  return m;
}

Volume zscore_normalize(const Volume& vol) {
  const Mask mask = brain_mask(vol);
  const MaskedMoments m = masked_moments(vol, mask);
  if (m.count < 2) throw DomainError("no brain region");
  if (!(m.stddev > 0.0)) throw DomainError("degenerate intensity distribution");

  Volume out(vol.dims, vol.spacing);
  for (std::size_t i = 0; i < vol.size(); ++i)
    if (mask[i]) out[i] = static_cast<float>((vol[i] - m.mean) / m.stddev);
  return out;
}

}  // namespace edgeseg
