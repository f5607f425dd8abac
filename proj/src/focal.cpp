#include "edgeseg/focal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace edgeseg {

ClassWeights ClassWeights::regions() {
  ClassWeights w;
  w.alpha.resize(4);
  w.alpha << 0.2, 0.8, 0.8, 0.8;
  return w;
}

ClassWeights ClassWeights::regions_and_edges() {
  ClassWeights w;
  w.alpha.resize(7);
  w.alpha << 0.2, 0.9, 0.9, 0.9, 0.8, 0.8, 0.8;
  return w;
}

ClassWeights ClassWeights::defaults_for(int channels) {
  if (channels == kRegionChannels) return regions();
  if (channels == kEdgeChannels) return regions_and_edges();
  throw UsageError("no default class weights for " + std::to_string(channels) + " channels");
}

void ClassWeights::validate() const {
  for (Eigen::Index c = 0; c < alpha.size(); ++c)
    if (!(alpha[c] > 0.0 && alpha[c] <= 1.0)) throw UsageError("alpha must lie in (0, 1]");
  if (!(gamma >= 0.0)) throw UsageError("gamma must be non-negative");
}

namespace {

bool clamped(double p) { return p < kProbEpsilon || p > 1.0 - kProbEpsilon; }
double clamp_prob(double p) { return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon); }

// pow for the common small integer exponents
double powg(double x, double g) {
  if (g == 2.0) return x * x;
  if (g == 1.0) return x;
  if (g == 0.0) return 1.0;
  if (g == 3.0) return x * x * x;
  return std::pow(x, g);
}

// Loss term and its derivative in p, sharing the log.
double term_and_dp(int y, double p, double alpha, double gamma, double& dp) {
  const bool flat = clamped(p);
  p = clamp_prob(p);
  if (y == 1) {
    const double q = 1.0 - p;
    const double lp = std::log(p);
    const double qg1 = gamma == 0.0 ? 0.0 : powg(q, gamma - 1.0);
    const double qg = gamma == 0.0 ? 1.0 : qg1 * q;
    dp = flat ? 0.0 : alpha * (gamma * qg1 * lp - qg / p);
    return -alpha * qg * lp;
  }
  const double lq = std::log1p(-p);
  const double pg1 = gamma == 0.0 ? 0.0 : powg(p, gamma - 1.0);
  const double pg = gamma == 0.0 ? 1.0 : pg1 * p;
  dp = flat ? 0.0 : -gamma * pg1 * lq + pg / (1.0 - p);
  return -pg * lq;
}

}  // namespace

double focal_term(int y, double p, double alpha, double gamma) {
  p = clamp_prob(p);
  if (y == 1) return -alpha * powg(1.0 - p, gamma) * std::log(p);
  return -powg(p, gamma) * std::log1p(-p);
}

double focal_term_dp(int y, double p, double alpha, double gamma) {
  if (clamped(p)) return 0.0;
  if (y == 1) {
    const double q = 1.0 - p;
    const double lead = gamma == 0.0 ? 0.0 : gamma * std::pow(q, gamma - 1.0) * std::log(p);
    return alpha * (lead - std::pow(q, gamma) / p);
  }
  const double lead = gamma == 0.0 ? 0.0 : gamma * std::pow(p, gamma - 1.0) * std::log1p(-p);
  return -lead + std::pow(p, gamma) / (1.0 - p);
}

Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits) {
  Eigen::VectorXd p = (logits.array() - logits.maxCoeff()).exp().matrix();
  return p / p.sum();
}

void softmax_columns(Eigen::Ref<Eigen::MatrixXd> logits) {
  for (Eigen::Index v = 0; v < logits.cols(); ++v) {
    auto col = logits.col(v);
    col.array() = (col.array() - col.maxCoeff()).exp();
    col /= col.sum();
  }
}

double focal_row(int target_class, const Eigen::Ref<const Eigen::VectorXd>& probs, const ClassWeights& w) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < probs.size(); ++c)
    sum += focal_term(c == target_class ? 1 : 0, probs[c], w.alpha[c], w.gamma);
  return sum;
}

double focal_total(const OneHotStack& target, const ProbabilityStack& probs, const ClassWeights& w) {
  if (!(target.dims == probs.dims)) throw UsageError("focal_total: dimension mismatch");
  if (target.channels() != probs.channels() || target.channels() != w.channels())
    throw UsageError("focal_total: channel count mismatch");
  const Eigen::Index n = probs.data.cols();
  if (n == 0) throw UsageError("focal_total: empty stack");
  const int channels = target.channels();

  // Pairwise reduction over voxels keeps the sum order fixed and the rounding error small.
  std::vector<double> partial(static_cast<std::size_t>(n));
  for (Eigen::Index v = 0; v < n; ++v) {
    double s = 0.0;
    for (int c = 0; c < channels; ++c) s += focal_term(target.data(c, v) != 0 ? 1 : 0, probs.data(c, v), w.alpha[c], w.gamma);
    partial[static_cast<std::size_t>(v)] = s;
  }
  for (std::size_t width = 1; width < partial.size(); width *= 2)
    for (std::size_t i = 0; i + width < partial.size(); i += 2 * width) partial[i] += partial[i + width];
  return partial[0] / static_cast<double>(n);
}

Eigen::VectorXd focal_grad_logits(int target_class, const Eigen::Ref<const Eigen::VectorXd>& logits,
                                  const ClassWeights& w) {
  const Eigen::VectorXd p = softmax(logits);
  Eigen::VectorXd g(p.size());
  for (Eigen::Index c = 0; c < p.size(); ++c) g[c] = focal_term_dp(c == target_class ? 1 : 0, p[c], w.alpha[c], w.gamma);
  // dp_c/dz_k = p_c (delta_ck - p_k)  =>  grad_k = p_k (g_k - <g, p>)
  return (p.array() * (g.array() - g.dot(p))).matrix();
}

double focal_loss_and_grad(const Eigen::Ref<const Eigen::VectorXi>& targets, const Eigen::Ref<const Eigen::MatrixXd>& logits,
                           const ClassWeights& w, Eigen::MatrixXd& grad) {
  const Eigen::Index channels = logits.rows();
  const Eigen::Index batch = logits.cols();
  if (targets.size() != batch) throw UsageError("focal_loss_and_grad: target count mismatch");
  if (channels != w.channels()) throw UsageError("focal_loss_and_grad: channel count mismatch");
  grad.resize(channels, batch);
  if (batch == 0) return 0.0;

  Eigen::MatrixXd probs = logits;
  softmax_columns(probs);
  const double inv_batch = 1.0 / static_cast<double>(batch);
  double loss = 0.0;
  Eigen::VectorXd g(channels);
  for (Eigen::Index v = 0; v < batch; ++v) {
    const auto p = probs.col(v);
    for (Eigen::Index c = 0; c < channels; ++c) {
      const int y = c == targets[v] ? 1 : 0;
      loss += term_and_dp(y, p[c], w.alpha[c], w.gamma, g[c]);
    }
    grad.col(v) = (p.array() * (g.array() - g.dot(p)) * inv_batch).matrix();
  }
  return loss * inv_batch;
}

}  // namespace edgeseg
