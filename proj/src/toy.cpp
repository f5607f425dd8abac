#include "edgeseg/toy.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "edgeseg/fileio.hpp"
#include "edgeseg/random.hpp"

namespace edgeseg {

Volume local_mean(const Volume& vol) {
  const Dims d = vol.dims;
  Volume out(d, vol.spacing);
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        double sum = 0.0;
        for (int dz = -1; dz <= 1; ++dz)
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) sum += vol.at_or_zero(x + dx, y + dy, z + dz);
        out(x, y, z) = static_cast<float>(sum / 27.0);
      }
  return out;
}

Volume gradient_magnitude(const Volume& vol) {
  const Dims d = vol.dims;
  Volume out(d, vol.spacing);
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        const double gx = 0.5 * (double(vol.at_or_zero(x + 1, y, z)) - vol.at_or_zero(x - 1, y, z));
        const double gy = 0.5 * (double(vol.at_or_zero(x, y + 1, z)) - vol.at_or_zero(x, y - 1, z));
        const double gz = 0.5 * (double(vol.at_or_zero(x, y, z + 1)) - vol.at_or_zero(x, y, z - 1));
        out(x, y, z) = static_cast<float>(std::sqrt(gx * gx + gy * gy + gz * gz));
      }
  return out;
}

FeatureVolume extract_features(const Volume& flair, const Volume& t1ce, const Volume& t2) {
  require_same_dims(flair, t1ce, "extract_features");
  require_same_dims(flair, t2, "extract_features");
  const auto n = static_cast<Eigen::Index>(flair.size());
  FeatureVolume fv{flair.dims, flair.spacing, Eigen::MatrixXf(kFeatureCount, n)};
  const Volume* mods[3] = {&flair, &t1ce, &t2};
  for (int m = 0; m < 3; ++m) {
    fv.data.row(m) = mods[m]->data.matrix().transpose();
    fv.data.row(3 + m) = local_mean(*mods[m]).data.matrix().transpose();
    fv.data.row(6 + m) = gradient_magnitude(*mods[m]).data.matrix().transpose();
  }
  return fv;
}

FeatureStats compute_feature_stats(std::span<const FeatureVolume> volumes) {
  if (volumes.empty()) throw UsageError("no feature volumes");
  const int f = volumes.front().features();
  FeatureStats s{Eigen::VectorXd::Zero(f), Eigen::VectorXd::Zero(f)};
  double count = 0.0;
  for (const auto& v : volumes) {
    if (v.features() != f) throw UsageError("inconsistent feature counts");
    s.mean += v.data.cast<double>().rowwise().sum();
    count += static_cast<double>(v.data.cols());
  }
  s.mean /= count;
  for (const auto& v : volumes) s.stddev += (v.data.cast<double>().colwise() - s.mean).array().square().rowwise().sum().matrix();
  s.stddev = (s.stddev / count).cwiseSqrt();
  for (int i = 0; i < f; ++i)
    if (!(s.stddev[i] > 0.0)) s.stddev[i] = 1.0;
  return s;
}

Eigen::MatrixXf standardize(const FeatureVolume& features, const FeatureStats& stats) {
  if (features.features() != stats.mean.size()) throw UsageError("feature count does not match statistics");
  const Eigen::ArrayXd inv = stats.stddev.array().inverse();
  return ((features.data.cast<double>().colwise() - stats.mean).array().colwise() * inv).cast<float>().matrix();
}

ToyModel ToyModel::zeros(int classes, int features) {
  return {Eigen::MatrixXd::Zero(classes, features), Eigen::VectorXd::Zero(classes),
          {Eigen::VectorXd::Zero(features), Eigen::VectorXd::Ones(features)}};
}

bool ToyModel::operator==(const ToyModel& o) const {
  return weights.rows() == o.weights.rows() && weights.cols() == o.weights.cols() && weights == o.weights &&
         bias == o.bias && stats.mean == o.stats.mean && stats.stddev == o.stats.stddev;
}

double dataset_loss(const ToyModel& model, const Eigen::MatrixXf& standardized, std::span<const std::uint8_t> targets,
                    const ClassWeights& w) {
  constexpr Eigen::Index kChunk = 1 << 15;
  const Eigen::Index n = standardized.cols();
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index start = 0; start < n; start += kChunk) {
    const Eigen::Index len = std::min(kChunk, n - start);
    Eigen::MatrixXd probs = (model.weights * standardized.middleCols(start, len).cast<double>()).colwise() + model.bias;
    softmax_columns(probs);
    for (Eigen::Index v = 0; v < len; ++v) sum += focal_row(targets[start + v], probs.col(v), w);
  }
  return sum / static_cast<double>(n);
}

TrainResult train(std::span<const TrainingCase> cases, const TrainConfig& cfg) {
  if (cases.empty()) throw UsageError("no training cases");
  if (!(cfg.learning_rate > 0.0)) throw UsageError("learning rate must be positive");
  if (cfg.epochs < 0) throw UsageError("epochs must be non-negative");
  if (cfg.batch_size < 1) throw UsageError("batch size must be positive");

  const int classes = cases.front().targets.channels();
  const int features = cases.front().features.features();
  std::vector<FeatureVolume> fvs;
  std::size_t total = 0;
  for (const auto& c : cases) {
    if (c.targets.channels() != classes) throw UsageError("training cases disagree on the class count");
    if (c.features.features() != features) throw UsageError("training cases disagree on the feature count");
    if (!(c.features.dims == c.targets.dims)) throw UsageError("features and targets differ in shape");
    fvs.push_back(c.features);
    total += c.features.dims.count();
  }
  if (total > 0xFFFFFFFFu) throw UsageError("training set too large");
  const ClassWeights weights = cfg.weights ? *cfg.weights : ClassWeights::defaults_for(classes);
  weights.validate();
  if (weights.channels() != classes) throw UsageError("class weight count does not match the target channels");

  TrainResult result{ToyModel::zeros(classes, features), {}, 0};
  ToyModel& model = result.model;
  model.stats = compute_feature_stats(fvs);
  fvs.clear();

  Eigen::MatrixXf x(features, static_cast<Eigen::Index>(total));
  std::vector<std::uint8_t> y(total);
  {
    Eigen::Index at = 0;
    for (const auto& c : cases) {
      const Eigen::Index n = c.features.data.cols();
      x.middleCols(at, n) = standardize(c.features, model.stats);
      const ClassVolume cls = argmax_labels(c.targets);
      for (Eigen::Index v = 0; v < n; ++v) y[at + v] = cls[v];
      at += n;
    }
  }

  SplitMix64 rng(cfg.seed);
  Eigen::MatrixXd xb(features, cfg.batch_size);
  Eigen::VectorXi yb(cfg.batch_size);
  Eigen::MatrixXd grad;
  bool stop = false;
  for (int epoch = 0; epoch < cfg.epochs && !stop; ++epoch) {
    const auto order = random_permutation(static_cast<std::uint32_t>(total), rng);
    for (std::size_t start = 0; start < total; start += cfg.batch_size) {
      if (cfg.max_steps && result.steps >= *cfg.max_steps) {
        stop = true;
        break;
      }
      const auto len = static_cast<Eigen::Index>(std::min<std::size_t>(cfg.batch_size, total - start));
      for (Eigen::Index j = 0; j < len; ++j) {
        const auto idx = order[start + j];
        xb.col(j) = x.col(idx).cast<double>();
        yb[j] = y[idx];
      }
      const auto xs = xb.leftCols(len);
      const Eigen::MatrixXd logits = (model.weights * xs).colwise() + model.bias;
      focal_loss_and_grad(yb.head(len), logits, weights, grad);
      model.weights.noalias() -= cfg.learning_rate * grad * xs.transpose();
      model.bias.noalias() -= cfg.learning_rate * grad.rowwise().sum();
      ++result.steps;
    }
    result.loss_trace.push_back(dataset_loss(model, x, y, weights));
  }
  return result;
}

ProbabilityStack predict(const ToyModel& model, const FeatureVolume& features) {
  if (features.features() != model.features()) throw UsageError("model expects " + std::to_string(model.features()) + " features");
  ProbabilityStack out{features.dims, features.spacing, {}};
  out.data = (model.weights * standardize(features, model.stats).cast<double>()).colwise() + model.bias;
  softmax_columns(out.data);
  return out;
}

std::string format_model(const ToyModel& model) {
  std::string out;
  char buf[64];
  auto num = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g%c", v, sep);
    out += buf;
  };
  out += std::to_string(model.classes()) + " " + std::to_string(model.features()) + "\n";
  for (int c = 0; c < model.classes(); ++c) {
    for (int f = 0; f < model.features(); ++f) num(model.weights(c, f), ' ');
    num(model.bias[c], '\n');
  }
  for (int f = 0; f < model.features(); ++f) {
    num(model.stats.mean[f], ' ');
    num(model.stats.stddev[f], '\n');
  }
  return out;
}

ToyModel parse_model(const std::string& text) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  int classes = 0, features = 0;
  if (!(in >> classes >> features) || (classes != kRegionChannels && classes != kEdgeChannels) || features < 1)
    throw FormatError("model header must be 'C F' with C in {4, 7}");
  ToyModel m = ToyModel::zeros(classes, features);
  auto read = [&](double& v) {
    std::string tok;
    if (!(in >> tok)) throw FormatError("model file truncated");
    char* end = nullptr;
    v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(v)) throw FormatError("bad number '" + tok + "' in model file");
  };
  for (int c = 0; c < classes; ++c) {
    for (int f = 0; f < features; ++f) read(m.weights(c, f));
    read(m.bias[c]);
  }
  for (int f = 0; f < features; ++f) {
    read(m.stats.mean[f]);
    read(m.stats.stddev[f]);
    if (!(m.stats.stddev[f] > 0.0)) throw FormatError("feature std must be positive");
  }
  std::string extra;
  if (in >> extra) throw FormatError("trailing data in model file");
  return m;
}

void save_model(const ToyModel& model, const std::filesystem::path& path) { write_file_atomic(path, format_model(model)); }

ToyModel load_model(const std::filesystem::path& path) {
  try {
    return parse_model(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace edgeseg
