#pragma once

#include "seeker/core.hpp"
#include "seeker/rng.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace seeker {

// One posterior sample of the questioning policy: a logit row per query token.
struct PolicyParticle {
  Eigen::MatrixXd weights;  // vocab_size x feature_dim

  static PolicyParticle zeros(const AttributeSchema& schema);
  static PolicyParticle random_init(const AttributeSchema& schema, double scale, rng::Engine& g);
};

struct ParticleEnsemble {
  std::vector<PolicyParticle> particles;

  int size() const { return static_cast<int>(particles.size()); }

  static ParticleEnsemble random_init(const AttributeSchema& schema, int n, double scale,
                                      rng::Engine& g);
};

// pi(q | s; theta): max-subtracted softmax of weights * feature_vector.
Eigen::VectorXd action_probs(const PolicyParticle& particle, const DialogState& state);

Query sample_query(const PolicyParticle& particle, const DialogState& state,
                   const AttributeSchema& schema, rng::Engine& g);

// d/dtheta log pi(q|s;theta) = (one_hot(q) - probs) * phi(s)^T.
Eigen::MatrixXd log_prob_grad(const PolicyParticle& particle, const DialogState& state,
                              const Query& query, const AttributeSchema& schema);

// Checkpoint format shared with the answerer: "rows cols" header line, then
// one row of full-precision values per line.
void save_matrix(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd load_matrix(const std::string& path);

}  // namespace seeker
