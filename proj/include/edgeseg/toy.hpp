#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "edgeseg/focal.hpp"
#include "edgeseg/grid.hpp"
#include "edgeseg/targets.hpp"

namespace edgeseg {

/// Features per voxel: raw value of (flair, t1ce, t2), then their zero-padded
/// 3x3x3 means, then their central-difference gradient magnitudes.
inline constexpr int kFeatureCount = 9;

/// features x voxels, one column per voxel (feature-fastest storage).
struct FeatureVolume {
  Dims dims;
  Spacing spacing;
  Eigen::MatrixXf data;

  int features() const { return static_cast<int>(data.rows()); }
};

/// Raw (unstandardised) features; standardisation uses the model's training
/// statistics and happens inside train / predict.
FeatureVolume extract_features(const Volume& flair, const Volume& t1ce, const Volume& t2);

/// Zero-padded 3x3x3 mean (always divided by 27).
Volume local_mean(const Volume& vol);
/// |grad| with central differences and a zero halo, voxel units.
Volume gradient_magnitude(const Volume& vol);

struct FeatureStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
};

/// Per-feature mean and population std over every voxel of every volume.
/// A zero std is reported as 1 so standardisation stays finite.
FeatureStats compute_feature_stats(std::span<const FeatureVolume> volumes);

/// Linear softmax voxel classifier: logits = weights * standardised(x) + bias.
struct ToyModel {
  Eigen::MatrixXd weights;  // classes x features
  Eigen::VectorXd bias;     // classes
  FeatureStats stats;

  int classes() const { return static_cast<int>(weights.rows()); }
  int features() const { return static_cast<int>(weights.cols()); }

  static ToyModel zeros(int classes, int features);
  bool operator==(const ToyModel& o) const;
};

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 50;
  int batch_size = 4096;
  std::uint64_t seed = 0;
  /// Defaults for the stack's channel count when unset.
  std::optional<ClassWeights> weights;
  /// Stop after this many gradient steps (inside an epoch if necessary).
  std::optional<long> max_steps;
};

struct TrainingCase {
  FeatureVolume features;
  OneHotStack targets;
};

struct TrainResult {
  ToyModel model;
  /// Mean focal loss over all training voxels after each epoch.
  std::vector<double> loss_trace;
  long steps = 0;
};

/// Mini-batch gradient descent on the focal loss from a zero model.
TrainResult train(std::span<const TrainingCase> cases, const TrainConfig& cfg);

/// Mean focal loss of `model` on one set of standardised columns.
double dataset_loss(const ToyModel& model, const Eigen::MatrixXf& standardized, std::span<const std::uint8_t> targets,
                    const ClassWeights& w);

Eigen::MatrixXf standardize(const FeatureVolume& features, const FeatureStats& stats);

/// Per-voxel softmax of the model logits.
ProbabilityStack predict(const ToyModel& model, const FeatureVolume& features);

/// Plain text: `C F`, C lines of F weights + bias, F lines of `mean std`,
/// all at 17 significant digits.
std::string format_model(const ToyModel& model);
ToyModel parse_model(const std::string& text);
void save_model(const ToyModel& model, const std::filesystem::path& path);
ToyModel load_model(const std::filesystem::path& path);

}  // namespace edgeseg
