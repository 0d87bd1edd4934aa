#pragma once

#include "seeker/core.hpp"
#include "seeker/policy.hpp"
#include "seeker/rng.hpp"

#include <Eigen/Core>

#include <vector>

namespace seeker {

inline constexpr int kNumAnswers = 3;  // Yes, No, NA

// The seeker's internal imitation of the oracle: logits over answers from the
// state features concatenated with a one-hot query token.
struct AnswererModel {
  Eigen::MatrixXd weights;  // kNumAnswers x (feature_dim + vocab_size)

  static AnswererModel zeros(const AttributeSchema& schema);
};

struct AnswerObservation {
  DialogState state;
  Query query;
  Answer answer = Answer::NA;
};

Eigen::VectorXd answerer_input(const DialogState& state, const Query& query,
                               const AttributeSchema& schema);

// p(a | q, s; omega): softmax over {Yes, No, NA}.
Eigen::VectorXd predict_answer_dist(const AnswererModel& model, const DialogState& state,
                                    const Query& query, const AttributeSchema& schema);

// Monte Carlo estimate of the answer marginal: average the predictive
// distribution over M (particle, sampled query) draws.
Eigen::VectorXd marginal_answer_dist(const ParticleEnsemble& ensemble, const AnswererModel& model,
                                     const DialogState& state, const AttributeSchema& schema,
                                     rng::Engine& g, int num_samples);

// Exact mixture over particles and the full query vocabulary; the Monte Carlo
// estimate above converges to this.
Eigen::VectorXd marginal_answer_dist_exact(const ParticleEnsemble& ensemble,
                                           const AnswererModel& model, const DialogState& state,
                                           const AttributeSchema& schema);

// Gradient of the summed observation log-likelihood with respect to omega.
Eigen::MatrixXd answerer_log_likelihood_grad(const AnswererModel& model,
                                             const std::vector<AnswerObservation>& batch,
                                             const AttributeSchema& schema);

// One cross-entropy ascent step on observed answers:
// omega += step * sum of d/domega log p(answer | q, s; omega).
void update_answerer(AnswererModel& model, const std::vector<AnswerObservation>& batch,
                     double step, const AttributeSchema& schema);

}  // namespace seeker
