#include "seeker/svgd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seeker::svgd {

KernelConfig KernelConfig::fixed(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("kernel bandwidth must be positive");
  return {false, h};
}

double rbf_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double bandwidth) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("kernel arguments must have the same shape");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("kernel bandwidth must be positive");
  return std::exp(-(a - b).squaredNorm() / bandwidth);
}

double median_bandwidth(const Particles& particles) {
  const std::size_t n = particles.size();
  if (n < 2) return 1.0;
  std::vector<double> dists;
  dists.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dists.push_back((particles[i] - particles[j]).norm());
  std::sort(dists.begin(), dists.end());
  const std::size_t m = dists.size();
  const double med = (m % 2 == 1) ? dists[m / 2] : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
  if (med == 0.0) return 1.0;
  return med * med / std::log(static_cast<double>(n) + 1.0);
}

Eigen::MatrixXd kernel_grad_wrt_first(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                      double bandwidth) {
  const double k = rbf_kernel(a, b, bandwidth);
  return (2.0 / bandwidth) * k * (b - a);
}

Particles svgd_directions(const Particles& particles, const Particles& posterior_grads,
                          const KernelConfig& kernel) {
  const std::size_t n = particles.size();
  if (posterior_grads.size() != n)
    throw std::invalid_argument("one posterior gradient required per particle");
  for (std::size_t i = 0; i < n; ++i)
    if (posterior_grads[i].rows() != particles[i].rows() ||
        posterior_grads[i].cols() != particles[i].cols())
      throw std::invalid_argument("posterior gradient shape mismatch");

  const double h = kernel.use_median ? median_bandwidth(particles) : kernel.bandwidth;
  Particles directions;
  directions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(particles[i].rows(), particles[i].cols());
    for (std::size_t j = 0; j < n; ++j) {
      const double k = rbf_kernel(particles[j], particles[i], h);
      sum += posterior_grads[j] * k;
      // d/dtheta_j k(theta_j, theta_i): pushes particle i away from j.
      sum += (2.0 / h) * k * (particles[i] - particles[j]);
    }
    directions.push_back(sum / static_cast<double>(n));
  }
  return directions;
}

void svgd_step(Particles& particles, const Particles& directions, double step) {
  if (directions.size() != particles.size())
    throw std::invalid_argument("one direction required per particle");
  for (const Eigen::MatrixXd& d : directions)
    if (!d.allFinite()) throw std::runtime_error("svgd step rejected: non-finite direction");
  for (std::size_t i = 0; i < particles.size(); ++i) particles[i] += step * directions[i];
}

}  // namespace seeker::svgd
