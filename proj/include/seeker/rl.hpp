#pragma once

#include "seeker/answerer.hpp"
#include "seeker/core.hpp"
#include "seeker/env.hpp"
#include "seeker/gain.hpp"
#include "seeker/policy.hpp"
#include "seeker/svgd.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace seeker::rl {

// Per-round exponential moving average of shaped returns.
class Baseline {
 public:
  explicit Baseline(int t_max, double decay = 0.9);

  double value(int round) const;  // 0 until a return has been observed
  void update(int round, double shaped_return);
  int rounds() const { return static_cast<int>(values_.size()); }

 private:
  double decay_;
  std::vector<double> values_;
  std::vector<bool> seen_;
};

// Isotropic Gaussian prior over policy weights. An infinite sigma drops the
// prior term entirely (flat prior).
struct PriorSpec {
  double sigma = 10.0;

  static PriorSpec flat();
  bool is_flat() const;
};

enum class QuerySelection : std::uint8_t { Sample, Gain };

// Everything a rollout needs besides the particle and the scene.
struct RolloutContext {
  env::GameConfig game;
  const AnswererModel* answerer = nullptr;
  UtilityKind utility_kind = UtilityKind::Entropy;
  double beta = 1.0;
  int answer_samples = 16;
  QuerySelection selection = QuerySelection::Sample;
  int candidates_per_particle = 2;
};

struct RolloutEngines {
  rng::Engine policy;
  rng::Engine oracle;
  rng::Engine gain;
};

// Independent per-episode streams so scenes, policy sampling, oracle noise
// and gain sampling never interleave.
rng::Engine scene_engine(std::uint64_t seed, int epoch, int particle, int episode);
RolloutEngines rollout_engines(std::uint64_t seed, int epoch, int particle, int episode);

// One full episode under a single particle: query per round, oracle answer,
// optimistic gain of the realized answer evaluated at the true target.
Trajectory rollout(const PolicyParticle& particle, const RolloutContext& context,
                   const Scene& scene, RolloutEngines& engines);

// Discounted suffix sums by backward recursion.
std::vector<double> returns(std::span<const double> rewards, double gamma);

std::vector<double> shaped_rewards(const Trajectory& trajectory, double eta);
std::vector<double> shaped_returns(const Trajectory& trajectory, double gamma, double eta);

// Likelihood-ratio gradient averaged over on-policy trajectories, with the
// per-round baseline subtracted from the shaped returns.
Eigen::MatrixXd reinforce_grad(const PolicyParticle& particle,
                               std::span<const Trajectory> trajectories, const Baseline& baseline,
                               double gamma, double eta, const AttributeSchema& schema);

// Score of the policy posterior: likelihood term scaled by 1/alpha plus the
// Gaussian prior score.
Eigen::MatrixXd posterior_grad(const PolicyParticle& particle,
                               const Eigen::MatrixXd& reinforce_gradient, double alpha,
                               const PriorSpec& prior);

struct TrainOptions {
  RunConfig run;
  env::GameConfig game;
  PriorSpec prior;
  svgd::KernelConfig kernel = svgd::KernelConfig::median();
  QuerySelection rollout_selection = QuerySelection::Sample;
  int candidates_per_particle = 2;
  double baseline_decay = 0.9;
  double init_scale = 0.1;
  bool adaptive_step = false;   // per-entry RMS scaling of the SVGD direction
  std::string diagnostics_dir;  // checkpoint destination if training diverges

  void validate() const;
};

struct EpochMetrics {
  int epoch = 0;
  double mean_extrinsic_reward = 0.0;
  double success_rate = 0.0;
  double mean_intrinsic_gain = 0.0;
  double avg_pairwise_distance = 0.0;
  double answerer_accuracy = 0.0;
  double eta = 0.0;
  double wall_clock_seconds = 0.0;  // reported on the console, not persisted
};

struct TrainResult {
  ParticleEnsemble ensemble;
  AnswererModel answerer;
  std::vector<EpochMetrics> metrics;
};

TrainResult train(const TrainOptions& options);

// Resume form: continue from an existing ensemble/answerer at start_epoch.
TrainResult train(const TrainOptions& options, ParticleEnsemble ensemble, AnswererModel answerer,
                  int start_epoch);

// Checkpoint directory: particle_###.txt per particle plus answerer.txt.
void save_checkpoint(const std::string& dir, const ParticleEnsemble& ensemble,
                     const AnswererModel& answerer);
std::pair<ParticleEnsemble, AnswererModel> load_checkpoint(const std::string& dir);

struct EvalOptions {
  int episodes = 400;
  QuerySelection selection = QuerySelection::Gain;
  int candidates_per_particle = 2;
  int answer_samples = 16;
  UtilityKind utility_kind = UtilityKind::Entropy;
  double beta = 1.0;
};

// Success rate over fresh seeded episodes. Gain selection prices candidates
// across the whole ensemble; Sample selection draws a particle per episode
// and samples its policy.
double evaluate_success(const ParticleEnsemble& ensemble, const AnswererModel& answerer,
                        const env::GameConfig& game, const EvalOptions& options,
                        std::uint64_t seed, std::vector<env::Episode>* record = nullptr);

}  // namespace seeker::rl
