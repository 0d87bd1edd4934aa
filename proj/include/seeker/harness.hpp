#pragma once

#include "seeker/config.hpp"
#include "seeker/rl.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace seeker::harness {

using MetricsRow = rl::EpochMetrics;

// Mean Frobenius distance over unordered particle pairs; 0 for n < 2.
double avg_pairwise_distance(const ParticleEnsemble& ensemble);

// CSV with a "# config_hash=... seed=..." comment first. Wall-clock time is
// deliberately not persisted: identical config and seed must give
// byte-identical files.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows,
                       std::uint64_t config_hash, std::uint64_t seed);

struct ExperimentResult {
  ParticleEnsemble ensemble;
  AnswererModel answerer;
  std::vector<MetricsRow> metrics;
  double eval_success = 0.0;
};

// Full experiment: train per config (or skip for the random baseline),
// write metrics + checkpoint under out_dir, evaluate, print a summary.
ExperimentResult run_experiment(const ExperimentConfig& config);

// CLI entry point: returns a process exit status instead of throwing.
int run_experiment_cli(const std::string& config_path, const Overrides& overrides, bool resume);

struct BenchReport {
  std::string target;
  int n_particles = 0;
  int steps = 0;
  double step_size = 0.0;
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;         // unbiased sample variance per coordinate
  Eigen::VectorXd target_mean;
  Eigen::VectorXd target_variance;
  int near_low_mode = 0;   // particles within 0.5 of each mixture mode
  int near_high_mode = 0;
};

// Runs the particle update on a closed-form target and reports final moments.
// Targets: gauss1d, mixture2-1d (modes +-2), mixture2-2d (modes (+-2, 0)).
BenchReport svgd_bench(const std::string& target, int n_particles, int steps, double step_size,
                       std::uint64_t seed);

void print_bench_report(std::ostream& out, const BenchReport& report);

}  // namespace seeker::harness
