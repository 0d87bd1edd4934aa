#pragma once

#include "seeker/core.hpp"
#include "seeker/rng.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace seeker::env {

struct GameConfig {
  int n_objects = 8;
  AttributeSchema schema;
  int t_max = 5;            // question budget; the guess happens when it runs out
  double p_flip = 0.0;      // oracle noise: probability of inverting Yes/No
  double r_success = 1.0;
  double r_fail = 0.0;
  double question_penalty = 0.0;  // lambda, charged per question

  void validate() const;
};

// Uniform random scene whose target has a unique attribute signature, so
// every game is winnable. Deterministic under the engine's seed.
Scene generate_scene(const GameConfig& config, rng::Engine& g);

// Ground-truth answer: Yes iff the target holds the queried value, inverted
// with probability p_flip. Never answers NA.
Answer oracle_answer(const Scene& scene, const Query& query, rng::Engine& g, double p_flip);

struct StepResult {
  Answer answer = Answer::NA;
  double extrinsic_reward = 0.0;
  bool done = false;
};

struct Episode {
  Scene scene;
  History history;
  int round = 0;
  bool done = false;
  int guess = -1;
  GameConfig config;

  static Episode start(const GameConfig& config, rng::Engine& g);
  static Episode with_scene(Scene scene, const GameConfig& config);
};

// Ask one question. The answer joins the history; when the budget is
// exhausted the executor guesses and the terminal reward lands on this step.
StepResult step(Episode& episode, const Query& query, rng::Engine& g);

// Line-delimited JSON records for replay and debugging.
std::string episode_record(const Episode& episode);
Episode parse_episode_record(const std::string& line);
void write_episode_records(std::ostream& out, const std::vector<Episode>& episodes);
std::vector<Episode> read_episode_records(std::istream& in);

}  // namespace seeker::env
