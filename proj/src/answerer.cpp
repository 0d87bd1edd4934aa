#include "seeker/answerer.hpp"

#include <stdexcept>

namespace seeker {

AnswererModel AnswererModel::zeros(const AttributeSchema& schema) {
  return AnswererModel{
      Eigen::MatrixXd::Zero(kNumAnswers, feature_dim(schema) + schema.vocab_size())};
}

Eigen::VectorXd answerer_input(const DialogState& state, const Query& query,
                               const AttributeSchema& schema) {
  const int token = token_id(query, schema);
  Eigen::VectorXd input = Eigen::VectorXd::Zero(state.feature_vector.size() + schema.vocab_size());
  input.head(state.feature_vector.size()) = state.feature_vector;
  input[state.feature_vector.size() + token] = 1.0;
  return input;
}

Eigen::VectorXd predict_answer_dist(const AnswererModel& model, const DialogState& state,
                                    const Query& query, const AttributeSchema& schema) {
  const Eigen::VectorXd input = answerer_input(state, query, schema);
  if (model.weights.cols() != input.size())
    throw std::invalid_argument("answerer/input dimension mismatch");
  Eigen::VectorXd logits = model.weights * input;
  logits.array() -= logits.maxCoeff();
  Eigen::VectorXd probs = logits.array().exp();
  probs /= probs.sum();
  return probs;
}

Eigen::VectorXd marginal_answer_dist(const ParticleEnsemble& ensemble, const AnswererModel& model,
                                     const DialogState& state, const AttributeSchema& schema,
                                     rng::Engine& g, int num_samples) {
  if (ensemble.particles.empty()) throw std::invalid_argument("empty particle ensemble");
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  Eigen::VectorXd total = Eigen::VectorXd::Zero(kNumAnswers);
  for (int m = 0; m < num_samples; ++m) {
    const std::size_t pick = rng::uniform_below(g, ensemble.particles.size());
    const Query query = sample_query(ensemble.particles[pick], state, schema, g);
    total += predict_answer_dist(model, state, query, schema);
  }
  return total / static_cast<double>(num_samples);
}

Eigen::VectorXd marginal_answer_dist_exact(const ParticleEnsemble& ensemble,
                                           const AnswererModel& model, const DialogState& state,
                                           const AttributeSchema& schema) {
  if (ensemble.particles.empty()) throw std::invalid_argument("empty particle ensemble");
  Eigen::VectorXd total = Eigen::VectorXd::Zero(kNumAnswers);
  for (const PolicyParticle& particle : ensemble.particles) {
    const Eigen::VectorXd probs = action_probs(particle, state);
    for (int token = 0; token < schema.vocab_size(); ++token)
      total += probs[token] *
               predict_answer_dist(model, state, query_of_token(token, schema), schema);
  }
  return total / static_cast<double>(ensemble.particles.size());
}

Eigen::MatrixXd answerer_log_likelihood_grad(const AnswererModel& model,
                                             const std::vector<AnswerObservation>& batch,
                                             const AttributeSchema& schema) {
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(model.weights.rows(), model.weights.cols());
  for (const AnswerObservation& obs : batch) {
    const Eigen::VectorXd input = answerer_input(obs.state, obs.query, schema);
    Eigen::VectorXd coeff = -predict_answer_dist(model, obs.state, obs.query, schema);
    coeff[static_cast<int>(obs.answer)] += 1.0;
    grad += coeff * input.transpose();
  }
  return grad;
}

void update_answerer(AnswererModel& model, const std::vector<AnswerObservation>& batch,
                     double step, const AttributeSchema& schema) {
  if (batch.empty()) throw std::invalid_argument("answerer update needs a non-empty batch");
  if (!(step > 0.0)) throw std::invalid_argument("answerer step must be positive");
  const Eigen::MatrixXd grad = answerer_log_likelihood_grad(model, batch, schema);
  if (!grad.allFinite()) throw std::runtime_error("answerer update rejected: non-finite gradient");
  model.weights += step * grad;
}

}  // namespace seeker
