#include "seeker/policy.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace seeker {

PolicyParticle PolicyParticle::zeros(const AttributeSchema& schema) {
  return PolicyParticle{Eigen::MatrixXd::Zero(schema.vocab_size(), feature_dim(schema))};
}

PolicyParticle PolicyParticle::random_init(const AttributeSchema& schema, double scale,
                                           rng::Engine& g) {
  Eigen::MatrixXd w(schema.vocab_size(), feature_dim(schema));
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = scale * rng::normal(g);
  return PolicyParticle{std::move(w)};
}

ParticleEnsemble ParticleEnsemble::random_init(const AttributeSchema& schema, int n, double scale,
                                               rng::Engine& g) {
  ParticleEnsemble ensemble;
  ensemble.particles.reserve(n);
  for (int i = 0; i < n; ++i)
    ensemble.particles.push_back(PolicyParticle::random_init(schema, scale, g));
  return ensemble;
}

Eigen::VectorXd action_probs(const PolicyParticle& particle, const DialogState& state) {
  if (particle.weights.cols() != state.feature_vector.size())
    throw std::invalid_argument("particle/state feature dimension mismatch");
  Eigen::VectorXd logits = particle.weights * state.feature_vector;
  logits.array() -= logits.maxCoeff();
  Eigen::VectorXd probs = logits.array().exp();
  probs /= probs.sum();
  return probs;
}

Query sample_query(const PolicyParticle& particle, const DialogState& state,
                   const AttributeSchema& schema, rng::Engine& g) {
  const Eigen::VectorXd probs = action_probs(particle, state);
  const std::size_t token = rng::categorical(g, {probs.data(), static_cast<std::size_t>(probs.size())});
  return query_of_token(static_cast<int>(token), schema);
}

Eigen::MatrixXd log_prob_grad(const PolicyParticle& particle, const DialogState& state,
                              const Query& query, const AttributeSchema& schema) {
  const int token = token_id(query, schema);
  Eigen::VectorXd coeff = -action_probs(particle, state);
  coeff[token] += 1.0;
  return coeff * state.feature_vector.transpose();
}

void save_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << m.rows() << " " << m.cols() << "\n";
  char buf[40];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      out << buf << (c + 1 < m.cols() ? " " : "");
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Eigen::MatrixXd load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw std::runtime_error("malformed matrix header in " + path);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      if (!(in >> m(r, c))) throw std::runtime_error("truncated matrix data in " + path);
  return m;
}

}  // namespace seeker
