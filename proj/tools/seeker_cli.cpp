#include "seeker/executor.hpp"
#include "seeker/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

namespace {

struct CommonFlags {
  std::string config_path;
  seeker::harness::Overrides overrides;
  std::string baseline;
  std::string utility;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* config = cmd->add_option("--config", flags.config_path, "experiment config file");
  if (config_required) config->required();
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&flags](std::uint64_t v) { flags.overrides.seed = v; }, "rng seed override");
  cmd->add_option_function<std::string>(
      "--out", [&flags](const std::string& v) { flags.overrides.out_dir = v; },
      "output directory override");
  cmd->add_option("--baseline", flags.baseline,
                  "variant override: method, random, reinforce, entropy-only");
  cmd->add_option_function<int>(
      "--particles", [&flags](int v) { flags.overrides.n_particles = v; },
      "particle count override");
  cmd->add_option_function<double>(
      "--alpha", [&flags](double v) { flags.overrides.alpha = v; }, "alpha override");
  cmd->add_option_function<double>(
      "--beta", [&flags](double v) { flags.overrides.beta = v; }, "beta override");
  cmd->add_option_function<double>(
      "--eta0", [&flags](double v) { flags.overrides.eta0 = v; }, "eta0 override");
  cmd->add_option("--utility", flags.utility, "utility override: entropy or exp");
}

int finish_overrides(CommonFlags& flags) {
  try {
    if (!flags.baseline.empty())
      flags.overrides.variant = seeker::harness::variant_from_string(flags.baseline);
    if (!flags.utility.empty())
      flags.overrides.utility = seeker::utility_kind_from_string(flags.utility);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_eval(CommonFlags& flags, const std::string& checkpoint, const std::string& record_path,
             int episodes_override) {
  try {
    seeker::harness::ExperimentConfig config = seeker::harness::load_config(flags.config_path);
    seeker::harness::apply_overrides(config, flags.overrides);
    if (episodes_override > 0) config.eval_episodes = episodes_override;
    const seeker::rl::TrainOptions options = config.resolved_train();

    const std::string dir = checkpoint.empty() ? config.out_dir + "/checkpoint" : checkpoint;
    auto [ensemble, answerer] = seeker::rl::load_checkpoint(dir);

    seeker::rl::EvalOptions eval;
    eval.episodes = config.eval_episodes;
    eval.selection = config.resolved_eval_selection();
    eval.candidates_per_particle = options.candidates_per_particle;
    eval.answer_samples = options.run.answer_samples;
    eval.utility_kind = options.run.utility_kind;
    eval.beta = options.run.beta;

    std::vector<seeker::env::Episode> episodes;
    const double success =
        seeker::rl::evaluate_success(ensemble, answerer, options.game, eval,
                                     options.run.seed ^ 0x9e3779b97f4a7c15ULL,
                                     record_path.empty() ? nullptr : &episodes);
    if (!record_path.empty()) {
      std::ofstream out(record_path);
      if (!out) throw std::runtime_error("cannot open record file: " + record_path);
      seeker::env::write_episode_records(out, episodes);
      std::cout << "recorded " << episodes.size() << " episodes to " << record_path << "\n";
    }
    std::cout << "checkpoint=" << dir << " episodes=" << eval.episodes
              << " success_rate=" << success << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_replay(const std::string& in_path, bool verbose) {
  try {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open episode file: " + in_path);
    const std::vector<seeker::env::Episode> episodes = seeker::env::read_episode_records(in);

    int successes = 0, guess_mismatches = 0;
    for (std::size_t i = 0; i < episodes.size(); ++i) {
      const seeker::env::Episode& episode = episodes[i];
      const int replayed_guess = seeker::guess_target(episode.scene, episode.history);
      if (episode.done && replayed_guess != episode.guess) ++guess_mismatches;
      const bool success = episode.guess == episode.scene.target_index;
      successes += success ? 1 : 0;
      if (verbose) {
        std::cout << "episode " << i << " target=" << episode.scene.target_index << "\n";
        for (const auto& [query, answer] : episode.history) {
          const auto& schema = episode.scene.schema;
          std::cout << "  " << schema.attributes[query.attribute] << "="
                    << schema.values[query.attribute][query.value] << " -> "
                    << seeker::to_string(answer) << "\n";
        }
        std::cout << "  guess=" << episode.guess << " replayed=" << replayed_guess
                  << (success ? " success" : " failure") << "\n";
      }
    }
    std::cout << "episodes=" << episodes.size() << " successes=" << successes
              << " replayed_guess_mismatches=" << guess_mismatches << "\n";
    return guess_mismatches == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein-variational information seeker on a synthetic guessing game"};
  app.require_subcommand(1);

  CommonFlags train_flags;
  bool resume = false;
  CLI::App* train = app.add_subcommand("train", "train policies and write metrics/checkpoints");
  add_common_flags(train, train_flags, true);
  train->add_flag("--resume", resume, "continue from an existing checkpoint in the output dir");

  CommonFlags eval_flags;
  std::string checkpoint, record_path;
  int eval_episodes = 0;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a trained checkpoint");
  add_common_flags(eval, eval_flags, true);
  eval->add_option("--checkpoint", checkpoint, "checkpoint directory (default <out>/checkpoint)");
  eval->add_option("--record", record_path, "write evaluated episodes as JSON lines");
  eval->add_option("--episodes", eval_episodes, "number of evaluation episodes");

  std::string bench_target = "gauss1d";
  int bench_particles = 50, bench_steps = 2000;
  double bench_step_size = 0.25;
  std::uint64_t bench_seed = 1;
  CLI::App* bench = app.add_subcommand("svgd-bench", "particle update check on closed-form targets");
  bench->add_option("--target", bench_target, "gauss1d, mixture2-1d or mixture2-2d");
  bench->add_option("--particles", bench_particles, "number of particles");
  bench->add_option("--steps", bench_steps, "number of update steps");
  bench->add_option("--step-size", bench_step_size, "update step size");
  bench->add_option("--seed", bench_seed, "rng seed");

  std::string replay_in;
  bool replay_verbose = false;
  CLI::App* replay = app.add_subcommand("replay", "replay recorded episodes");
  replay->add_option("--in", replay_in, "episode record file (JSON lines)")->required();
  replay->add_flag("--verbose", replay_verbose, "print every dialog turn");

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    if (const int status = finish_overrides(train_flags); status != 0) return status;
    return seeker::harness::run_experiment_cli(train_flags.config_path, train_flags.overrides,
                                               resume);
  }
  if (eval->parsed()) {
    if (const int status = finish_overrides(eval_flags); status != 0) return status;
    return run_eval(eval_flags, checkpoint, record_path, eval_episodes);
  }
  if (bench->parsed()) {
    try {
      const seeker::harness::BenchReport report =
          seeker::harness::svgd_bench(bench_target, bench_particles, bench_steps, bench_step_size,
                                      bench_seed);
      seeker::harness::print_bench_report(std::cout, report);
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  if (replay->parsed()) return run_replay(replay_in, replay_verbose);
  return 0;
}
