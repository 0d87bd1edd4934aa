#include "seeker/gain.hpp"

#include "seeker/executor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace seeker::gain {

double utility(UtilityKind kind, double score) {
  switch (kind) {
    case UtilityKind::Entropy:
      if (!(score > 0.0)) throw std::domain_error("entropy utility needs a positive score");
      return -std::log(score);
    case UtilityKind::Exp:
      return 1.0 / (1.0 + std::exp(score));
  }
  throw std::invalid_argument("unknown utility kind");
}

namespace {

// Utility of the posterior score at eval_object for each possible answer.
std::array<double, kNumAnswers> per_answer_utilities(const Scene& scene, const DialogState& state,
                                                     const Query& query, UtilityKind kind,
                                                     int eval_object) {
  std::array<double, kNumAnswers> utilities{};
  for (int a = 0; a < kNumAnswers; ++a) {
    const double score =
        executor_score(scene, state.history, {query, static_cast<Answer>(a)}, eval_object);
    utilities[a] = utility(kind, score);
  }
  return utilities;
}

}  // namespace

GainEstimate gain_statistics(const Scene& scene, const DialogState& state, const Query& query,
                             const AnswererModel& answerer, int num_samples, UtilityKind kind,
                             Answer reference_answer, int eval_object, double beta,
                             rng::Engine& g) {
  if (num_samples < 2)
    throw std::invalid_argument("gain statistics need at least two answer samples");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");

  const Eigen::VectorXd answer_probs = predict_answer_dist(answerer, state, query, scene.schema);
  const auto utilities = per_answer_utilities(scene, state, query, kind, eval_object);
  const double reference_utility = utilities[static_cast<int>(reference_answer)];

  double sum = 0.0, sum_sq = 0.0;
  for (int m = 0; m < num_samples; ++m) {
    const std::size_t a =
        rng::categorical(g, {answer_probs.data(), static_cast<std::size_t>(answer_probs.size())});
    const double diff = reference_utility - utilities[a];
    sum += diff;
    sum_sq += diff * diff;
  }
  const double mean = sum / num_samples;
  const double var = std::max(0.0, (sum_sq - num_samples * mean * mean) / (num_samples - 1));
  const double sigma = std::sqrt(var);
  return GainEstimate{mean, sigma, mean + beta * beta * sigma, beta, num_samples};
}

GainEstimate gain_statistics_exact(const Scene& scene, const DialogState& state,
                                   const Query& query, const AnswererModel& answerer,
                                   UtilityKind kind, Answer reference_answer, int eval_object,
                                   double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const Eigen::VectorXd answer_probs = predict_answer_dist(answerer, state, query, scene.schema);
  const auto utilities = per_answer_utilities(scene, state, query, kind, eval_object);
  const double reference_utility = utilities[static_cast<int>(reference_answer)];

  double mean = 0.0;
  for (int a = 0; a < kNumAnswers; ++a) mean += answer_probs[a] * (reference_utility - utilities[a]);
  double var = 0.0;
  for (int a = 0; a < kNumAnswers; ++a) {
    const double diff = reference_utility - utilities[a] - mean;
    var += answer_probs[a] * diff * diff;
  }
  const double sigma = std::sqrt(var);
  return GainEstimate{mean, sigma, mean + beta * beta * sigma, beta, 0};
}

double shaped_reward(double reward, double g_hat, double eta) {
  if (eta < 0.0) throw std::invalid_argument("eta must be non-negative");
  return reward + eta * g_hat;
}

double eta_schedule(int epoch, int epoch_max, double eta0) {
  if (epoch < 0 || epoch_max < 0) throw std::invalid_argument("epochs must be non-negative");
  if (epoch >= epoch_max) return 0.0;  // includes the epoch_max = 0 edge
  return eta0 * static_cast<double>(epoch_max - epoch) / static_cast<double>(epoch_max);
}

Query select_query(const ParticleEnsemble& ensemble, const AnswererModel& answerer,
                   const Scene& scene, const DialogState& state, const SelectionConfig& config,
                   rng::Engine& g) {
  if (ensemble.particles.empty()) throw std::invalid_argument("empty particle ensemble");
  if (config.candidates_per_particle < 1)
    throw std::invalid_argument("need at least one candidate per particle");

  std::set<int> candidate_tokens;
  for (const PolicyParticle& particle : ensemble.particles)
    for (int c = 0; c < config.candidates_per_particle; ++c)
      candidate_tokens.insert(
          token_id(sample_query(particle, state, scene.schema, g), scene.schema));

  // The oracle's answer is unobserved before asking, so the hypothetical top
  // candidate and the model's modal answer stand in for it.
  const int top_candidate = guess_target(scene, state.history);

  Query best{};
  double best_gain = -std::numeric_limits<double>::infinity();
  bool first = true;
  for (const int token : candidate_tokens) {  // ascending: ties keep the lowest token
    const Query query = query_of_token(token, scene.schema);
    const Eigen::VectorXd answer_probs = predict_answer_dist(answerer, state, query, scene.schema);
    Eigen::Index modal = 0;
    answer_probs.maxCoeff(&modal);
    const GainEstimate estimate =
        gain_statistics(scene, state, query, answerer, config.answer_samples, config.utility_kind,
                        static_cast<Answer>(modal), top_candidate, config.beta, g);
    if (first || estimate.g_hat > best_gain) {
      best = query;
      best_gain = estimate.g_hat;
      first = false;
    }
  }
  return best;
}

}  // namespace seeker::gain
