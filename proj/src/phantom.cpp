#include "edgeseg/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "edgeseg/nifti.hpp"
#include "edgeseg/random.hpp"

namespace edgeseg {

bool Ellipsoid::contains(double x, double y, double z) const {
  const double dx = (x - center[0]) / radii[0];
  const double dy = (y - center[1]) / radii[1];
  const double dz = (z - center[2]) / radii[2];
  return dx * dx + dy * dy + dz * dz <= 1.0;
}

Ellipsoid brain_ball(int size) {
  const double c = 0.5 * (size - 1);
  const double r = 0.47 * size;
  return {{c, c, c}, {r, r, r}};
}

void validate_geometry(const PhantomGeometry& g, int size) {
  if (size < 16) throw UsageError("phantom size must be at least 16");
  if (g.core.center != g.whole.center || g.enhancing.center != g.whole.center)
    throw UsageError("tumour ellipsoids must be concentric");
  constexpr double tol = 1e-9;
  for (int a = 0; a < 3; ++a) {
    if (!(g.enhancing.radii[a] > 0.0)) throw UsageError("enhancing radii must be positive");
    if (g.core.radii[a] - g.enhancing.radii[a] < kPhantomMargin - tol)
      throw UsageError("core must enclose the enhancing region with a 2-voxel margin");
    if (g.whole.radii[a] - g.core.radii[a] < kPhantomMargin - tol)
      throw UsageError("whole tumour must enclose the core with a 2-voxel margin");
  }
  const Ellipsoid brain = brain_ball(size);
  double offset = 0.0;
  for (int a = 0; a < 3; ++a) offset += std::pow(g.whole.center[a] - brain.center[a], 2);
  offset = std::sqrt(offset);
  const double reach = *std::max_element(g.whole.radii.begin(), g.whole.radii.end());
  if (offset + reach + kPhantomMargin > brain.radii[0] + tol) throw UsageError("tumour must lie inside the brain with a 2-voxel margin");
}

namespace {

PhantomGeometry draw_geometry(int size, SplitMix64& rng) {
  const double s = size;
  PhantomGeometry g;
  for (int a = 0; a < 3; ++a) {
    const double et = rng.uniform(std::max(1.5, 0.06 * s), std::max(1.5, 0.09 * s));
    const double core_gap = rng.uniform(std::max(kPhantomMargin, 0.05 * s), std::max(kPhantomMargin, 0.08 * s));
    const double whole_gap = rng.uniform(std::max(kPhantomMargin, 0.05 * s), std::max(kPhantomMargin, 0.08 * s));
    g.enhancing.radii[a] = et;
    g.core.radii[a] = et + core_gap;
    g.whole.radii[a] = et + core_gap + whole_gap;
  }
  const Ellipsoid brain = brain_ball(size);
  const double reach = *std::max_element(g.whole.radii.begin(), g.whole.radii.end());
  const double room = std::max(0.0, 0.5 * (brain.radii[0] - kPhantomMargin - reach));
  // Per-axis offsets bounded by room / sqrt(3) keep the Euclidean offset within room.
  for (int a = 0; a < 3; ++a) g.whole.center[a] = brain.center[a] + rng.uniform(-1.0, 1.0) * room / std::sqrt(3.0);
  g.core.center = g.whole.center;
  g.enhancing.center = g.whole.center;
  return g;
}

}  // namespace

Phantom generate_phantom(const PhantomSpec& spec) {
  if (spec.size < 16) throw UsageError("phantom size must be at least 16");
  if (!(spec.noise_sigma >= 0.0)) throw UsageError("noise sigma must be non-negative");

  SplitMix64 rng(spec.seed);
  const PhantomGeometry geom = spec.geometry ? *spec.geometry : draw_geometry(spec.size, rng);
  validate_geometry(geom, spec.size);

  const Dims dims{spec.size, spec.size, spec.size};
  Phantom ph{Volume(dims), Volume(dims), Volume(dims), LabelVolume(dims), geom};
  const Ellipsoid brain = brain_ball(spec.size);

  // Tissue class per voxel: -1 outside brain, else index into IntensityLevels.
  std::vector<int> tissue(dims.count(), -1);
  for (int z = 0; z < dims.nz; ++z)
    for (int y = 0; y < dims.ny; ++y)
      for (int x = 0; x < dims.nx; ++x) {
        const std::size_t i = flat_index({x, y, z}, dims);
        if (!brain.contains(x, y, z)) continue;
        int t = 0;
        std::uint8_t label = kBackground;
        if (geom.enhancing.contains(x, y, z)) {
          t = 3;
          label = spec.empty_enhancing ? kNcrNet : kEnhancing;
        } else if (geom.core.contains(x, y, z)) {
          t = 1;
          label = kNcrNet;
        } else if (geom.whole.contains(x, y, z)) {
          t = 2;
          label = kEdema;
        }
        tissue[i] = t;
        ph.labels[i] = label;
      }

  GaussianStream noise(rng);
  auto render = [&](Volume& vol, const std::array<double, 4>& level) {
    for (std::size_t i = 0; i < dims.count(); ++i) {
      if (tissue[i] < 0) continue;
      const double n = spec.noise_sigma > 0.0 ? spec.noise_sigma * noise.next() : 0.0;
      vol[i] = static_cast<float>(level[tissue[i]] + n);
    }
  };
  render(ph.flair, spec.levels.flair);
  render(ph.t1ce, spec.levels.t1ce);
  render(ph.t2, spec.levels.t2);
  return ph;
}

std::string phantom_case_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "phantom_%03d", index);
  return buf;
}

std::vector<std::filesystem::path> generate_cohort(int count, std::uint64_t seed, int size, double noise_sigma,
                                                   const std::filesystem::path& out_dir) {
  if (count < 1) throw UsageError("cohort size must be at least 1");
  std::vector<std::filesystem::path> cases;
  for (int i = 0; i < count; ++i) {
    PhantomSpec spec;
    spec.seed = seed + static_cast<std::uint64_t>(i);
    spec.size = size;
    spec.noise_sigma = noise_sigma;
    spec.empty_enhancing = i % kEmptyEnhancingStride == 0;
    const Phantom ph = generate_phantom(spec);

    const auto dir = out_dir / phantom_case_name(i);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string());
    write_nifti(ph.flair, dir / "flair.nii");
    write_nifti(ph.t1ce, dir / "t1ce.nii");
    write_nifti(ph.t2, dir / "t2.nii");
    write_nifti(ph.labels, dir / "seg.nii");
    cases.push_back(dir);
  }
  return cases;
}

}  // namespace edgeseg
