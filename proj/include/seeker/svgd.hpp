#pragma once

#include <Eigen/Core>

#include <vector>

namespace seeker::svgd {

// RBF bandwidth: a fixed positive value, or the per-step median heuristic.
struct KernelConfig {
  bool use_median = true;
  double bandwidth = 1.0;  // used when use_median is false

  static KernelConfig median() { return {true, 1.0}; }
  static KernelConfig fixed(double h);
};

using Particles = std::vector<Eigen::MatrixXd>;

// k(a, b) = exp(-||a - b||_F^2 / h).
double rbf_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double bandwidth);

// Median heuristic: h = med^2 / log(n + 1) over pairwise Frobenius distances.
// Degenerate clouds (n < 2 or med = 0) fall back to h = 1.
double median_bandwidth(const Particles& particles);

// Gradient of rbf_kernel with respect to its first argument.
Eigen::MatrixXd kernel_grad_wrt_first(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                      double bandwidth);

// Empirical Stein direction for every particle: the kernel-weighted average of
// the posterior score plus the kernel-gradient repulsion term.
Particles svgd_directions(const Particles& particles, const Particles& posterior_grads,
                          const KernelConfig& kernel);

// theta_i += step * direction_i. Rejects non-finite directions.
void svgd_step(Particles& particles, const Particles& directions, double step);

}  // namespace seeker::svgd
