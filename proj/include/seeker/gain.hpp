#pragma once

#include "seeker/answerer.hpp"
#include "seeker/core.hpp"
#include "seeker/policy.hpp"
#include "seeker/rng.hpp"

namespace seeker::gain {

// Chebyshev-optimistic bound on the utility improvement from asking a query:
// g_hat = mu_hat + beta^2 * sigma_hat.
struct GainEstimate {
  double mu_hat = 0.0;
  double sigma_hat = 0.0;
  double g_hat = 0.0;
  double beta = 1.0;
  int n_samples = 0;
};

// u_entropy(x) = -log(x) on (0, 1]; u_exp(x) = 1 / (1 + e^x).
double utility(UtilityKind kind, double score);

// Empirical gain statistics for asking `query` in `state`. Draws num_samples
// answers from the imitation model; each sample contributes the utility at
// the reference answer minus the utility at the sampled answer, with both
// executor scores taken at eval_object. Training passes the realized oracle
// answer and the true target; selection passes the model's modal answer and
// the executor's current top candidate.
GainEstimate gain_statistics(const Scene& scene, const DialogState& state, const Query& query,
                             const AnswererModel& answerer, int num_samples, UtilityKind kind,
                             Answer reference_answer, int eval_object, double beta,
                             rng::Engine& g);

// Exact counterpart of gain_statistics with the expectation and standard
// deviation enumerated over the three answers.
GainEstimate gain_statistics_exact(const Scene& scene, const DialogState& state,
                                   const Query& query, const AnswererModel& answerer,
                                   UtilityKind kind, Answer reference_answer, int eval_object,
                                   double beta);

// r_new = r + eta * g_hat.
double shaped_reward(double reward, double g_hat, double eta);

// Linear decay eta0 * (epoch_max - epoch) / epoch_max, clamped at 0.
double eta_schedule(int epoch, int epoch_max, double eta0);

struct SelectionConfig {
  int candidates_per_particle = 2;
  int answer_samples = 16;
  UtilityKind utility_kind = UtilityKind::Entropy;
  double beta = 1.0;
};

// Sample candidate queries from each particle, price every distinct candidate
// by its optimistic gain (modal predicted answer standing in for the unseen
// oracle answer), and return the highest-gain query. Ties break to the lowest
// token id.
Query select_query(const ParticleEnsemble& ensemble, const AnswererModel& answerer,
                   const Scene& scene, const DialogState& state, const SelectionConfig& config,
                   rng::Engine& g);

}  // namespace seeker::gain
