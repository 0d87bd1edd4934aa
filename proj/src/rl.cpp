#include "seeker/rl.hpp"

#include "seeker/executor.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <stdexcept>

namespace seeker::rl {

Baseline::Baseline(int t_max, double decay) : decay_(decay) {
  if (t_max < 1) throw std::invalid_argument("baseline needs t_max >= 1");
  if (decay < 0.0 || decay >= 1.0) throw std::invalid_argument("baseline decay must be in [0,1)");
  values_.assign(t_max, 0.0);
  seen_.assign(t_max, false);
}

double Baseline::value(int round) const {
  if (round < 0 || round >= rounds()) throw std::invalid_argument("baseline round out of range");
  return values_[round];
}

void Baseline::update(int round, double shaped_return) {
  if (round < 0 || round >= rounds()) throw std::invalid_argument("baseline round out of range");
  if (!seen_[round]) {
    values_[round] = shaped_return;
    seen_[round] = true;
  } else {
    values_[round] = decay_ * values_[round] + (1.0 - decay_) * shaped_return;
  }
}

PriorSpec PriorSpec::flat() { return PriorSpec{std::numeric_limits<double>::infinity()}; }

bool PriorSpec::is_flat() const { return std::isinf(sigma); }

namespace {

constexpr std::uint64_t kSceneStream = 0;
constexpr std::uint64_t kPolicyStream = 1;
constexpr std::uint64_t kOracleStream = 2;
constexpr std::uint64_t kGainStream = 3;

std::uint64_t episode_stream(int epoch, int particle, int episode, std::uint64_t kind) {
  std::uint64_t id = static_cast<std::uint64_t>(epoch);
  id = id * 1024 + static_cast<std::uint64_t>(particle);
  id = id * 65536 + static_cast<std::uint64_t>(episode);
  return id * 4 + kind;
}

}  // namespace

rng::Engine scene_engine(std::uint64_t seed, int epoch, int particle, int episode) {
  return rng::make_engine(seed, episode_stream(epoch, particle, episode, kSceneStream));
}

RolloutEngines rollout_engines(std::uint64_t seed, int epoch, int particle, int episode) {
  return RolloutEngines{
      rng::make_engine(seed, episode_stream(epoch, particle, episode, kPolicyStream)),
      rng::make_engine(seed, episode_stream(epoch, particle, episode, kOracleStream)),
      rng::make_engine(seed, episode_stream(epoch, particle, episode, kGainStream))};
}

Trajectory rollout(const PolicyParticle& particle, const RolloutContext& context,
                   const Scene& scene, RolloutEngines& engines) {
  if (context.answerer == nullptr) throw std::invalid_argument("rollout needs an answerer model");
  env::Episode episode = env::Episode::with_scene(scene, context.game);

  ParticleEnsemble self;
  if (context.selection == QuerySelection::Gain) self.particles.push_back(particle);

  Trajectory trajectory;
  while (!episode.done) {
    DialogState state = featurize(scene, episode.history);
    Query query;
    if (context.selection == QuerySelection::Gain) {
      const gain::SelectionConfig selection{context.candidates_per_particle,
                                            context.answer_samples, context.utility_kind,
                                            context.beta};
      query = gain::select_query(self, *context.answerer, scene, state, selection, engines.policy);
    } else {
      query = sample_query(particle, state, scene.schema, engines.policy);
    }
    const env::StepResult result = env::step(episode, query, engines.oracle);
    // Realized answer plays a*; the gain is scored at the true target.
    const gain::GainEstimate estimate = gain::gain_statistics(
        scene, state, query, *context.answerer, context.answer_samples, context.utility_kind,
        result.answer, scene.target_index, context.beta, engines.gain);
    trajectory.steps.push_back(TrajectoryStep{std::move(state), query, result.answer,
                                              result.extrinsic_reward, estimate.g_hat});
  }
  trajectory.guess = episode.guess;
  trajectory.success = episode.guess == scene.target_index;
  return trajectory;
}

std::vector<double> returns(std::span<const double> rewards, double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must be in [0,1]");
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    acc = rewards[i] + gamma * acc;
    out[i] = acc;
  }
  return out;
}

std::vector<double> shaped_rewards(const Trajectory& trajectory, double eta) {
  std::vector<double> out;
  out.reserve(trajectory.steps.size());
  for (const TrajectoryStep& step : trajectory.steps)
    out.push_back(gain::shaped_reward(step.extrinsic_reward, step.intrinsic_gain, eta));
  return out;
}

std::vector<double> shaped_returns(const Trajectory& trajectory, double gamma, double eta) {
  const std::vector<double> rewards = shaped_rewards(trajectory, eta);
  return returns(rewards, gamma);
}

Eigen::MatrixXd reinforce_grad(const PolicyParticle& particle,
                               std::span<const Trajectory> trajectories, const Baseline& baseline,
                               double gamma, double eta, const AttributeSchema& schema) {
  if (trajectories.empty()) throw std::invalid_argument("reinforce_grad needs trajectories");
  Eigen::MatrixXd grad =
      Eigen::MatrixXd::Zero(particle.weights.rows(), particle.weights.cols());
  for (const Trajectory& trajectory : trajectories) {
    const std::vector<double> g = shaped_returns(trajectory, gamma, eta);
    for (std::size_t t = 0; t < trajectory.steps.size(); ++t) {
      const TrajectoryStep& step = trajectory.steps[t];
      const double advantage = g[t] - baseline.value(static_cast<int>(t));
      grad += log_prob_grad(particle, step.state, step.query, schema) * advantage;
    }
  }
  grad /= static_cast<double>(trajectories.size());
  if (!grad.allFinite()) throw std::runtime_error("non-finite policy gradient");
  return grad;
}

Eigen::MatrixXd posterior_grad(const PolicyParticle& particle,
                               const Eigen::MatrixXd& reinforce_gradient, double alpha,
                               const PriorSpec& prior) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  Eigen::MatrixXd grad = reinforce_gradient / alpha;
  if (!prior.is_flat()) grad -= particle.weights / (prior.sigma * prior.sigma);
  return grad;
}

void TrainOptions::validate() const {
  run.validate();
  game.validate();
  if (!(prior.sigma > 0.0)) throw std::invalid_argument("prior sigma must be positive");
  if (candidates_per_particle < 1)
    throw std::invalid_argument("candidates_per_particle must be >= 1");
  if (baseline_decay < 0.0 || baseline_decay >= 1.0)
    throw std::invalid_argument("baseline_decay must be in [0,1)");
  if (init_scale < 0.0) throw std::invalid_argument("init_scale must be non-negative");
  if (run.t_max != game.t_max)
    throw std::invalid_argument("run.t_max and game.t_max must agree");
}

namespace {

double ensemble_avg_distance(const ParticleEnsemble& ensemble) {
  const int n = ensemble.size();
  if (n < 2) return 0.0;
  double sum = 0.0;
  int pairs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++pairs)
      sum += (ensemble.particles[i].weights - ensemble.particles[j].weights).norm();
  return sum / pairs;
}

}  // namespace

TrainResult train(const TrainOptions& options) {
  options.validate();
  rng::Engine init = rng::make_engine(options.run.seed, 0xfeedULL);
  ParticleEnsemble ensemble = ParticleEnsemble::random_init(
      options.game.schema, options.run.n_particles, options.init_scale, init);
  AnswererModel answerer = AnswererModel::zeros(options.game.schema);
  return train(options, std::move(ensemble), std::move(answerer), 0);
}

TrainResult train(const TrainOptions& options, ParticleEnsemble ensemble, AnswererModel answerer,
                  int start_epoch) {
  options.validate();
  if (ensemble.size() != options.run.n_particles)
    throw std::invalid_argument("ensemble size does not match n_particles");

  const RunConfig& run = options.run;
  Baseline baseline(run.t_max, options.baseline_decay);
  std::vector<Eigen::MatrixXd> adaptive_sq;
  if (options.adaptive_step)
    adaptive_sq.assign(ensemble.size(),
                       Eigen::MatrixXd::Zero(ensemble.particles[0].weights.rows(),
                                             ensemble.particles[0].weights.cols()));

  TrainResult result;
  for (int epoch = start_epoch; epoch < run.epochs; ++epoch) {
    const auto tic = std::chrono::steady_clock::now();
    const double eta = gain::eta_schedule(epoch, run.epochs, run.eta0);

    RolloutContext context;
    context.game = options.game;
    context.answerer = &answerer;
    context.utility_kind = run.utility_kind;
    context.beta = run.beta;
    context.answer_samples = run.answer_samples;
    context.selection = options.rollout_selection;
    context.candidates_per_particle = options.candidates_per_particle;

    std::vector<std::vector<Trajectory>> rollouts(ensemble.size());
    double reward_sum = 0.0, gain_sum = 0.0;
    int episode_count = 0, step_count = 0, success_count = 0;
    for (int i = 0; i < ensemble.size(); ++i) {
      rollouts[i].reserve(run.episodes_per_epoch);
      for (int e = 0; e < run.episodes_per_epoch; ++e) {
        rng::Engine scenes = scene_engine(run.seed, epoch, i, e);
        const Scene scene = env::generate_scene(options.game, scenes);
        RolloutEngines engines = rollout_engines(run.seed, epoch, i, e);
        Trajectory trajectory = rollout(ensemble.particles[i], context, scene, engines);
        for (const TrajectoryStep& step : trajectory.steps) {
          reward_sum += step.extrinsic_reward;
          gain_sum += step.intrinsic_gain;
          ++step_count;
        }
        success_count += trajectory.success ? 1 : 0;
        ++episode_count;
        rollouts[i].push_back(std::move(trajectory));
      }
    }

    // Answerer imitation: accuracy of the model the epoch ran with, then one
    // accumulated cross-entropy step on the observed answers.
    std::vector<AnswerObservation> batch;
    batch.reserve(step_count);
    int answer_hits = 0;
    for (const auto& per_particle : rollouts)
      for (const Trajectory& trajectory : per_particle)
        for (const TrajectoryStep& step : trajectory.steps) {
          const Eigen::VectorXd probs =
              predict_answer_dist(answerer, step.state, step.query, options.game.schema);
          Eigen::Index modal = 0;
          probs.maxCoeff(&modal);
          if (static_cast<Answer>(modal) == step.answer) ++answer_hits;
          batch.push_back(AnswerObservation{step.state, step.query, step.answer});
        }
    if (!batch.empty()) update_answerer(answerer, batch, run.step_omega, options.game.schema);

    svgd::Particles thetas, grads;
    thetas.reserve(ensemble.size());
    grads.reserve(ensemble.size());
    for (int i = 0; i < ensemble.size(); ++i) {
      const Eigen::MatrixXd likelihood = reinforce_grad(
          ensemble.particles[i], rollouts[i], baseline, run.gamma, eta, options.game.schema);
      grads.push_back(posterior_grad(ensemble.particles[i], likelihood, run.alpha, options.prior));
      thetas.push_back(ensemble.particles[i].weights);
    }
    svgd::Particles directions = svgd::svgd_directions(thetas, grads, options.kernel);
    if (options.adaptive_step) {
      for (int i = 0; i < ensemble.size(); ++i) {
        adaptive_sq[i] += directions[i].cwiseProduct(directions[i]);
        directions[i] =
            directions[i].cwiseQuotient((adaptive_sq[i].array() + 1e-8).sqrt().matrix());
      }
    }
    try {
      svgd::svgd_step(thetas, directions, run.step_theta);
    } catch (const std::runtime_error&) {
      if (!options.diagnostics_dir.empty())
        save_checkpoint(options.diagnostics_dir, ensemble, answerer);
      throw;
    }
    for (int i = 0; i < ensemble.size(); ++i) ensemble.particles[i].weights = thetas[i];

    for (int i = 0; i < ensemble.size(); ++i)
      if (!ensemble.particles[i].weights.allFinite()) {
        if (!options.diagnostics_dir.empty())
          save_checkpoint(options.diagnostics_dir, ensemble, answerer);
        throw std::runtime_error("training diverged: non-finite particle at epoch " +
                                 std::to_string(epoch));
      }

    // Baseline trails the returns that produced this epoch's gradients.
    for (const auto& per_particle : rollouts)
      for (const Trajectory& trajectory : per_particle) {
        const std::vector<double> g = shaped_returns(trajectory, run.gamma, eta);
        for (std::size_t t = 0; t < g.size(); ++t) baseline.update(static_cast<int>(t), g[t]);
      }

    EpochMetrics row;
    row.epoch = epoch;
    row.mean_extrinsic_reward = episode_count > 0 ? reward_sum / episode_count : 0.0;
    row.success_rate = episode_count > 0 ? static_cast<double>(success_count) / episode_count : 0.0;
    row.mean_intrinsic_gain = step_count > 0 ? gain_sum / step_count : 0.0;
    row.avg_pairwise_distance = ensemble_avg_distance(ensemble);
    row.answerer_accuracy = step_count > 0 ? static_cast<double>(answer_hits) / step_count : 0.0;
    row.eta = eta;
    row.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();
    result.metrics.push_back(row);
  }

  result.ensemble = std::move(ensemble);
  result.answerer = std::move(answerer);
  return result;
}

void save_checkpoint(const std::string& dir, const ParticleEnsemble& ensemble,
                     const AnswererModel& answerer) {
  std::filesystem::create_directories(dir);
  char name[32];
  for (int i = 0; i < ensemble.size(); ++i) {
    std::snprintf(name, sizeof name, "particle_%03d.txt", i);
    save_matrix(dir + "/" + name, ensemble.particles[i].weights);
  }
  save_matrix(dir + "/answerer.txt", answerer.weights);
}

std::pair<ParticleEnsemble, AnswererModel> load_checkpoint(const std::string& dir) {
  ParticleEnsemble ensemble;
  char name[32];
  for (int i = 0;; ++i) {
    std::snprintf(name, sizeof name, "particle_%03d.txt", i);
    const std::string path = dir + "/" + name;
    if (!std::filesystem::exists(path)) break;
    ensemble.particles.push_back(PolicyParticle{load_matrix(path)});
  }
  if (ensemble.particles.empty())
    throw std::runtime_error("no particle arrays found in checkpoint dir " + dir);
  AnswererModel answerer{load_matrix(dir + "/answerer.txt")};
  return {std::move(ensemble), std::move(answerer)};
}

double evaluate_success(const ParticleEnsemble& ensemble, const AnswererModel& answerer,
                        const env::GameConfig& game, const EvalOptions& options,
                        std::uint64_t seed, std::vector<env::Episode>* record) {
  if (ensemble.particles.empty()) throw std::invalid_argument("empty particle ensemble");
  if (options.episodes < 1) throw std::invalid_argument("evaluation needs episodes >= 1");

  const gain::SelectionConfig selection{options.candidates_per_particle, options.answer_samples,
                                        options.utility_kind, options.beta};
  int successes = 0;
  for (int e = 0; e < options.episodes; ++e) {
    rng::Engine scenes = scene_engine(seed, 0, 0, e);
    RolloutEngines engines = rollout_engines(seed, 0, 0, e);
    env::Episode episode = env::Episode::start(game, scenes);
    const std::size_t pick = rng::uniform_below(engines.policy, ensemble.particles.size());
    while (!episode.done) {
      const DialogState state = featurize(episode.scene, episode.history);
      const Query query =
          options.selection == QuerySelection::Gain
              ? gain::select_query(ensemble, answerer, episode.scene, state, selection,
                                   engines.policy)
              : sample_query(ensemble.particles[pick], state, game.schema, engines.policy);
      env::step(episode, query, engines.oracle);
    }
    successes += episode.guess == episode.scene.target_index ? 1 : 0;
    if (record != nullptr) record->push_back(episode);
  }
  return static_cast<double>(successes) / options.episodes;
}

}  // namespace seeker::rl
