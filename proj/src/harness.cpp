#include "seeker/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace seeker::harness {

double avg_pairwise_distance(const ParticleEnsemble& ensemble) {
  const int n = ensemble.size();
  if (n < 2) return 0.0;
  double sum = 0.0;
  int pairs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++pairs)
      sum += (ensemble.particles[i].weights - ensemble.particles[j].weights).norm();
  return sum / pairs;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows,
                       std::uint64_t config_hash, std::uint64_t seed) {
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash));
  out << "# config_hash=" << buf << " seed=" << seed << "\n";
  out << "epoch,mean_extrinsic_reward,success_rate,mean_intrinsic_gain,"
         "avg_pairwise_particle_distance,answerer_train_accuracy,eta\n";
  for (const MetricsRow& row : rows) {
    out << row.epoch << "," << num(row.mean_extrinsic_reward) << "," << num(row.success_rate)
        << "," << num(row.mean_intrinsic_gain) << "," << num(row.avg_pairwise_distance) << ","
        << num(row.answerer_accuracy) << "," << num(row.eta) << "\n";
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const rl::TrainOptions options = config.resolved_train();
  options.validate();

  ExperimentResult result;
  if (config.variant == Variant::Random) {
    rng::Engine init = rng::make_engine(options.run.seed, 0xfeedULL);
    result.ensemble = ParticleEnsemble::random_init(options.game.schema, 1, 0.0, init);
    result.answerer = AnswererModel::zeros(options.game.schema);
  } else {
    rl::TrainResult trained = rl::train(options);
    result.ensemble = std::move(trained.ensemble);
    result.answerer = std::move(trained.answerer);
    result.metrics = std::move(trained.metrics);
  }

  rl::EvalOptions eval;
  eval.episodes = config.eval_episodes;
  eval.selection = config.resolved_eval_selection();
  eval.candidates_per_particle = options.candidates_per_particle;
  eval.answer_samples = options.run.answer_samples;
  eval.utility_kind = options.run.utility_kind;
  eval.beta = options.run.beta;
  // Offset stream so evaluation scenes never repeat training scenes.
  result.eval_success = rl::evaluate_success(result.ensemble, result.answerer, options.game, eval,
                                             options.run.seed ^ 0x9e3779b97f4a7c15ULL);
  return result;
}

int run_experiment_cli(const std::string& config_path, const Overrides& overrides, bool resume) {
  try {
    ExperimentConfig config = load_config(config_path);
    apply_overrides(config, overrides);
    const rl::TrainOptions options = config.resolved_train();
    options.validate();

    std::filesystem::create_directories(config.out_dir);
    const std::string checkpoint_dir = config.out_dir + "/checkpoint";

    ExperimentResult result;
    if (resume && config.variant != Variant::Random &&
        std::filesystem::exists(checkpoint_dir + "/answerer.txt")) {
      auto [ensemble, answerer] = rl::load_checkpoint(checkpoint_dir);
      rl::TrainResult trained =
          rl::train(options, std::move(ensemble), std::move(answerer), 0);
      result.ensemble = std::move(trained.ensemble);
      result.answerer = std::move(trained.answerer);
      result.metrics = std::move(trained.metrics);

      rl::EvalOptions eval;
      eval.episodes = config.eval_episodes;
      eval.selection = config.resolved_eval_selection();
      eval.candidates_per_particle = options.candidates_per_particle;
      eval.answer_samples = options.run.answer_samples;
      eval.utility_kind = options.run.utility_kind;
      eval.beta = options.run.beta;
      result.eval_success = rl::evaluate_success(result.ensemble, result.answerer, options.game,
                                                 eval, options.run.seed ^ 0x9e3779b97f4a7c15ULL);
    } else {
      result = run_experiment(config);
    }

    {
      std::ofstream metrics(config.out_dir + "/metrics.csv");
      if (!metrics) throw std::runtime_error("cannot write metrics in " + config.out_dir);
      write_metrics_csv(metrics, result.metrics, config.config_hash(), config.train.run.seed);
    }
    {
      std::ofstream resolved(config.out_dir + "/config_resolved.cfg");
      resolved << config.canonical_text();
    }
    rl::save_checkpoint(checkpoint_dir, result.ensemble, result.answerer);

    for (const MetricsRow& row : result.metrics)
      std::cout << "epoch " << row.epoch << ": reward " << row.mean_extrinsic_reward
                << " success " << row.success_rate << " gain " << row.mean_intrinsic_gain
                << " dist " << row.avg_pairwise_distance << " ans_acc " << row.answerer_accuracy
                << " eta " << row.eta << " (" << row.wall_clock_seconds << "s)\n";
    std::cout << "variant=" << to_string(config.variant) << " eval_success=" << result.eval_success
              << " episodes=" << config.eval_episodes << "\n";
    std::cout << "artifacts: " << config.out_dir << "/metrics.csv, " << checkpoint_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

namespace {

struct BenchTarget {
  int dim = 1;
  std::vector<Eigen::VectorXd> modes;  // empty for unimodal
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  // Score of the (equal-weight, unit-variance) Gaussian or mixture.
  Eigen::VectorXd (*score)(const Eigen::VectorXd&) = nullptr;
};

Eigen::VectorXd gauss1d_score(const Eigen::VectorXd& x) { return -x; }

Eigen::VectorXd mixture_score(const Eigen::VectorXd& x, const Eigen::VectorXd& m1,
                              const Eigen::VectorXd& m2) {
  const double d1 = (x - m1).squaredNorm();
  const double d2 = (x - m2).squaredNorm();
  const double base = std::min(d1, d2);
  const double w1 = std::exp(-(d1 - base) / 2.0);
  const double w2 = std::exp(-(d2 - base) / 2.0);
  return (w1 * (m1 - x) + w2 * (m2 - x)) / (w1 + w2);
}

Eigen::VectorXd mixture1d_score(const Eigen::VectorXd& x) {
  static const Eigen::VectorXd lo = Eigen::VectorXd::Constant(1, -2.0);
  static const Eigen::VectorXd hi = Eigen::VectorXd::Constant(1, 2.0);
  return mixture_score(x, lo, hi);
}

Eigen::VectorXd mixture2d_score(const Eigen::VectorXd& x) {
  static const Eigen::VectorXd lo = (Eigen::VectorXd(2) << -2.0, 0.0).finished();
  static const Eigen::VectorXd hi = (Eigen::VectorXd(2) << 2.0, 0.0).finished();
  return mixture_score(x, lo, hi);
}

BenchTarget make_target(const std::string& name) {
  BenchTarget target;
  if (name == "gauss1d") {
    target.dim = 1;
    target.mean = Eigen::VectorXd::Zero(1);
    target.variance = Eigen::VectorXd::Ones(1);
    target.score = gauss1d_score;
  } else if (name == "mixture2-1d") {
    target.dim = 1;
    target.modes = {Eigen::VectorXd::Constant(1, -2.0), Eigen::VectorXd::Constant(1, 2.0)};
    target.mean = Eigen::VectorXd::Zero(1);
    target.variance = Eigen::VectorXd::Constant(1, 5.0);  // 1 + mode^2
    target.score = mixture1d_score;
  } else if (name == "mixture2-2d") {
    target.dim = 2;
    target.modes = {(Eigen::VectorXd(2) << -2.0, 0.0).finished(),
                    (Eigen::VectorXd(2) << 2.0, 0.0).finished()};
    target.mean = Eigen::VectorXd::Zero(2);
    target.variance = (Eigen::VectorXd(2) << 5.0, 1.0).finished();
    target.score = mixture2d_score;
  } else {
    throw std::invalid_argument("unknown svgd-bench target: " + name);
  }
  return target;
}

}  // namespace

BenchReport svgd_bench(const std::string& target_name, int n_particles, int steps,
                       double step_size, std::uint64_t seed) {
  if (n_particles < 1) throw std::invalid_argument("svgd-bench needs at least one particle");
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  const BenchTarget target = make_target(target_name);

  rng::Engine g = rng::make_engine(seed, 0xbe9cULL);
  svgd::Particles particles;
  particles.reserve(n_particles);
  for (int i = 0; i < n_particles; ++i) {
    Eigen::MatrixXd p(1, target.dim);
    for (int d = 0; d < target.dim; ++d) p(0, d) = rng::normal(g);
    particles.push_back(p);
  }

  svgd::Particles scores(n_particles);
  for (int s = 0; s < steps; ++s) {
    for (int i = 0; i < n_particles; ++i)
      scores[i] = target.score(particles[i].row(0).transpose()).transpose();
    const svgd::Particles directions =
        svgd::svgd_directions(particles, scores, svgd::KernelConfig::median());
    svgd::svgd_step(particles, directions, step_size);
  }

  BenchReport report;
  report.target = target_name;
  report.n_particles = n_particles;
  report.steps = steps;
  report.step_size = step_size;
  report.mean = Eigen::VectorXd::Zero(target.dim);
  for (const Eigen::MatrixXd& p : particles) report.mean += p.row(0).transpose();
  report.mean /= n_particles;
  report.variance = Eigen::VectorXd::Zero(target.dim);
  if (n_particles > 1) {
    for (const Eigen::MatrixXd& p : particles) {
      const Eigen::VectorXd centered = p.row(0).transpose() - report.mean;
      report.variance += centered.cwiseProduct(centered);
    }
    report.variance /= (n_particles - 1);
  }
  report.target_mean = target.mean;
  report.target_variance = target.variance;
  if (!target.modes.empty()) {
    for (const Eigen::MatrixXd& p : particles) {
      if ((p.row(0).transpose() - target.modes[0]).norm() < 0.5) ++report.near_low_mode;
      if ((p.row(0).transpose() - target.modes[1]).norm() < 0.5) ++report.near_high_mode;
    }
  }
  return report;
}

void print_bench_report(std::ostream& out, const BenchReport& report) {
  out << "target=" << report.target << " n=" << report.n_particles << " steps=" << report.steps
      << " step_size=" << report.step_size << "\n";
  out << "mean: [" << report.mean.transpose() << "]  target: [" << report.target_mean.transpose()
      << "]\n";
  out << "variance: [" << report.variance.transpose() << "]  target: ["
      << report.target_variance.transpose() << "]\n";
  if (report.near_low_mode + report.near_high_mode > 0 || report.target == "mixture2-1d" ||
      report.target == "mixture2-2d")
    out << "particles within 0.5 of modes: " << report.near_low_mode << " / "
        << report.near_high_mode << "\n";
}

}  // namespace seeker::harness
