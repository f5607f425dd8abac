#pragma once

#include <Eigen/Core>

#include "edgeseg/targets.hpp"

namespace edgeseg {

/// Probabilities are clamped to [kProbEpsilon, 1 - kProbEpsilon] before any log.
inline constexpr double kProbEpsilon = 1e-7;

/// Per-channel alpha (applied to the y=1 term of its own channel) and the
/// focusing exponent gamma.
struct ClassWeights {
  Eigen::VectorXd alpha;
  double gamma = 2.0;

  int channels() const { return static_cast<int>(alpha.size()); }

  /// Background 0.2, regions 0.8, gamma 2.
  static ClassWeights regions();
  /// Background 0.2, edges 0.9, interiors 0.8, gamma 2.
  static ClassWeights regions_and_edges();
  /// Defaults for a 4- or 7-channel stack.
  static ClassWeights defaults_for(int channels);

  void validate() const;
};

/// -alpha*y*(1-p)^gamma*log(p) - (1-y)*p^gamma*log(1-p), natural log, p clamped.
double focal_term(int y, double p, double alpha, double gamma);

/// Derivative of focal_term with respect to p. Zero where the clamp is active.
double focal_term_dp(int y, double p, double alpha, double gamma);

/// Numerically stable softmax of one logit vector.
Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits);

/// Column-wise softmax of a channels x voxels logit matrix, in place.
void softmax_columns(Eigen::Ref<Eigen::MatrixXd> logits);

/// Sum over channels of focal_term for one voxel given its target class.
double focal_row(int target_class, const Eigen::Ref<const Eigen::VectorXd>& probs, const ClassWeights& w);

/// Mean over voxels of the per-voxel channel sum.
double focal_total(const OneHotStack& target, const ProbabilityStack& probs, const ClassWeights& w);

/// d(sum_c focal_term_c) / d(logits) through the softmax Jacobian, for one voxel.
Eigen::VectorXd focal_grad_logits(int target_class, const Eigen::Ref<const Eigen::VectorXd>& logits,
                                  const ClassWeights& w);

/// Batched form: `logits` is channels x B, `targets` holds class indices.
/// Returns the mean loss over the batch and writes d(mean loss)/d(logits) into `grad`.
double focal_loss_and_grad(const Eigen::Ref<const Eigen::VectorXi>& targets, const Eigen::Ref<const Eigen::MatrixXd>& logits,
                           const ClassWeights& w, Eigen::MatrixXd& grad);

}  // namespace edgeseg
