#include "edgeseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace edgeseg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas (q*w - s)^2 + f[q] over finite sites only.
// Operates on a strided line of the grid in place.
class LineTransform {
 public:
  void run(double* data, std::ptrdiff_t stride, int n, double w) {
    f_.resize(n);
    site_.resize(n);
    bound_.resize(n + 1);
    for (int i = 0; i < n; ++i) f_[i] = data[i * stride];

    int k = -1;
    for (int q = 0; q < n; ++q) {
      if (f_[q] == kInf) continue;
      if (k < 0) {
        k = 0;
        site_[0] = q;
        bound_[0] = -kInf;
        bound_[1] = kInf;
        continue;
      }
      // bound_[0] is -inf, so the loop stops at k == 0 at the latest.
      double s = intersect(site_[k], q, w);
      while (s <= bound_[k]) s = intersect(site_[--k], q, w);
      ++k;
      site_[k] = q;
      bound_[k] = s;
      bound_[k + 1] = kInf;
    }
    if (k < 0) return;  // no finite site: line stays infinite

    int j = 0;
    for (int q = 0; q < n; ++q) {
      const double pq = q * w;
      while (bound_[j + 1] < pq) ++j;
      const double d = pq - site_[j] * w;
      data[q * stride] = d * d + f_[site_[j]];
    }
  }

 private:
  double intersect(int v, int q, double w) const {
    const double pq = q * w;
    const double pv = v * w;
    return ((f_[q] + pq * pq) - (f_[v] + pv * pv)) / (2.0 * (pq - pv));
  }

  std::vector<double> f_;
  std::vector<int> site_;
  std::vector<double> bound_;
};


std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

std::string_view region_name(Region r) {
  switch (r) {
    case Region::WT: return "WT";
    case Region::TC: return "TC";
    case Region::ET: return "ET";
  }
  return "?";
}

Region parse_region(std::string_view name) {
  for (Region r : kRegions)
    if (region_name(r) == name) return r;
  throw UsageError("unknown region '" + std::string(name) + "'");
}

const Mask& RegionMasks::operator[](Region r) const {
  switch (r) {
    case Region::WT: return wt;
    case Region::TC: return tc;
    case Region::ET: return et;
  }
  return wt;
}

RegionMasks region_masks(const LabelVolume& labels) {
  RegionMasks m{Mask(labels.dims, labels.spacing), Mask(labels.dims, labels.spacing), Mask(labels.dims, labels.spacing)};
  const auto& l = labels.data;
  m.wt.data = (l == 1 || l == 2 || l == 4).cast<std::uint8_t>();
  m.tc.data = (l == 1 || l == 4).cast<std::uint8_t>();
  m.et.data = (l == 4).cast<std::uint8_t>();
  return m;
}

double dice(const Mask& pred, const Mask& gt) {
  require_same_dims(pred, gt, "dice");
  const auto p = pred.data != 0;
  const auto g = gt.data != 0;
  const double tp = static_cast<double>((p && g).count());
  const double fp = static_cast<double>((p && !g).count());
  const double fn = static_cast<double>((!p && g).count());
  const double denom = (tp + fp) + (tp + fn);
  if (denom == 0.0) throw DomainError("dice undefined for two empty masks");
  return 2.0 * tp / denom;
}

Grid<double> squared_distance_transform(const Mask& features) {
  const Dims d = features.dims;
  Grid<double> dist(d, features.spacing);
  dist.data = (features.data != 0).select(Eigen::ArrayXd::Zero(dist.data.size()), kInf);

  LineTransform line;
  const std::ptrdiff_t sy = d.nx;
  const std::ptrdiff_t sz = static_cast<std::ptrdiff_t>(d.nx) * d.ny;
  double* base = dist.data.data();
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y) line.run(base + z * sz + y * sy, 1, d.nx, features.spacing.sx);
  for (int z = 0; z < d.nz; ++z)
    for (int x = 0; x < d.nx; ++x) line.run(base + z * sz + x, sy, d.ny, features.spacing.sy);
  for (int y = 0; y < d.ny; ++y)
    for (int x = 0; x < d.nx; ++x) line.run(base + y * sy + x, sz, d.nz, features.spacing.sz);
  return dist;
}

std::vector<double> directed_distances(const Mask& from, const Mask& to) {
  require_same_dims(from, to, "directed_distances");
  if ((from.data != 0).count() == 0 || (to.data != 0).count() == 0) throw DomainError("directed distance of an empty set");
  const Grid<double> dt = squared_distance_transform(to);
  std::vector<double> out;
  for (std::size_t i = 0; i < from.size(); ++i)
    if (from[i]) out.push_back(std::sqrt(dt[i]));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> directed_distances(std::span<const VoxelCoord> from, std::span<const VoxelCoord> to,
                                       const Spacing& spacing) {
  if (from.empty() || to.empty()) throw DomainError("directed distance of an empty set");
  VoxelCoord lo = from.front(), hi = from.front();
  auto grow = [&](const VoxelCoord& c) {
    lo = {std::min(lo.x, c.x), std::min(lo.y, c.y), std::min(lo.z, c.z)};
    hi = {std::max(hi.x, c.x), std::max(hi.y, c.y), std::max(hi.z, c.z)};
  };
  for (const auto& c : from) grow(c);
  for (const auto& c : to) grow(c);

  // Rasterise the target set into its bounding box and read the transform at the sources.
  const Dims box{hi.x - lo.x + 1, hi.y - lo.y + 1, hi.z - lo.z + 1};
  Mask target(box, spacing);
  for (const auto& c : to) target(c.x - lo.x, c.y - lo.y, c.z - lo.z) = 1;
  const Grid<double> dt = squared_distance_transform(target);
  std::vector<double> out;
  out.reserve(from.size());
  for (const auto& c : from) out.push_back(std::sqrt(dt(c.x - lo.x, c.y - lo.y, c.z - lo.z)));
  std::sort(out.begin(), out.end());
  return out;
}

double percentile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("percentile of an empty list");
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("percentile rank must lie in [0, 1]");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double hd95(std::span<const VoxelCoord> x, std::span<const VoxelCoord> y, const Spacing& spacing) {
  const auto xy = directed_distances(x, y, spacing);
  const auto yx = directed_distances(y, x, spacing);
  return std::max(percentile(xy, 0.95), percentile(yx, 0.95));
}

double hd95(const Mask& a, const Mask& b) {
  const auto ab = directed_distances(a, b);
  const auto ba = directed_distances(b, a);
  return std::max(percentile(ab, 0.95), percentile(ba, 0.95));
}

std::array<MetricsRecord, 3> evaluate_patient(const LabelVolume& pred, const LabelVolume& gt, const std::string& subject) {
  require_same_dims(pred, gt, "evaluate_patient");
  if (!(pred.spacing == gt.spacing)) throw UsageError("evaluate_patient: spacing mismatch");
  const RegionMasks pm = region_masks(pred);
  const RegionMasks gm = region_masks(gt);

  std::array<MetricsRecord, 3> out;
  for (std::size_t i = 0; i < kRegions.size(); ++i) {
    const Region r = kRegions[i];
    MetricsRecord& rec = out[i];
    rec.subject = subject;
    rec.region = r;
    const bool pred_empty = (pm[r].data != 0).count() == 0;
    const bool gt_empty = (gm[r].data != 0).count() == 0;
    if (pred_empty && gt_empty) {
      rec.dice = 1.0;
      rec.hd95 = 0.0;
    } else if (pred_empty || gt_empty) {
      rec.dice = kPenaltyDice;
      rec.hd95 = kPenaltyHd95;
      rec.penalized = true;
    } else {
      rec.dice = dice(pm[r], gm[r]);
      rec.hd95 = hd95(pm[r], gm[r]);
    }
  }
  return out;
}

std::string format_metrics_row(const MetricsRecord& r) {
  if (r.subject.find_first_of(",\n\r") != std::string::npos) throw UsageError("subject id may not contain ',' or newlines");
  return r.subject + "," + std::string(region_name(r.region)) + "," + format_double(r.dice, "%.6f") + "," +
         format_double(r.hd95, "%.6f") + "," + (r.penalized ? "1" : "0");
}

std::vector<MetricsRecord> parse_metrics_csv(std::string_view text) {
  std::vector<MetricsRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == kMetricsCsvHeader) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (fields.size() != 5) throw FormatError("metrics CSV line " + std::to_string(lineno) + ": expected 5 fields");
    MetricsRecord r;
    r.subject = fields[0];
    try {
      r.region = parse_region(fields[1]);
      r.dice = std::stod(fields[2]);
      r.hd95 = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw FormatError("metrics CSV line " + std::to_string(lineno) + ": malformed value");
    }
    if (fields[4] != "0" && fields[4] != "1") throw FormatError("metrics CSV line " + std::to_string(lineno) + ": penalized must be 0 or 1");
    r.penalized = fields[4] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace edgeseg
