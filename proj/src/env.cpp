#include "seeker/env.hpp"

#include "seeker/executor.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <stdexcept>

namespace seeker::env {

namespace {

double signature_space(const AttributeSchema& schema) {
  double total = 1.0;
  for (int a = 0; a < schema.num_attributes(); ++a) total *= schema.num_values(a);
  return total;
}

}  // namespace

void GameConfig::validate() const {
  schema.validate();
  if (n_objects < 2) throw std::invalid_argument("game needs at least two objects");
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  if (p_flip < 0.0 || p_flip >= 1.0) throw std::invalid_argument("p_flip must be in [0,1)");
  if (signature_space(schema) < n_objects)
    throw std::invalid_argument("schema admits fewer distinct signatures than objects");
}

Scene generate_scene(const GameConfig& config, rng::Engine& g) {
  config.validate();
  while (true) {
    Scene scene;
    scene.schema = config.schema;
    scene.objects.resize(config.n_objects);
    for (int o = 0; o < config.n_objects; ++o) {
      scene.objects[o].id = o;
      scene.objects[o].attribute_values.resize(config.schema.num_attributes());
      for (int a = 0; a < config.schema.num_attributes(); ++a)
        scene.objects[o].attribute_values[a] =
            static_cast<int>(rng::uniform_below(g, config.schema.num_values(a)));
    }
    scene.target_index = static_cast<int>(rng::uniform_below(g, config.n_objects));

    bool unique = true;
    for (int o = 0; o < config.n_objects && unique; ++o)
      if (o != scene.target_index &&
          scene.objects[o].attribute_values == scene.target().attribute_values)
        unique = false;
    if (unique) return scene;
  }
}

Answer oracle_answer(const Scene& scene, const Query& query, rng::Engine& g, double p_flip) {
  (void)token_id(query, scene.schema);  // validate
  bool yes = scene.target().attribute_values[query.attribute] == query.value;
  if (p_flip > 0.0 && rng::uniform_unit(g) < p_flip) yes = !yes;
  return yes ? Answer::Yes : Answer::No;
}

Episode Episode::start(const GameConfig& config, rng::Engine& g) {
  return with_scene(generate_scene(config, g), config);
}

Episode Episode::with_scene(Scene scene, const GameConfig& config) {
  config.validate();
  Episode episode;
  episode.scene = std::move(scene);
  episode.config = config;
  return episode;
}

StepResult step(Episode& episode, const Query& query, rng::Engine& g) {
  if (episode.done) throw std::logic_error("cannot step a finished episode");
  StepResult result;
  result.answer = oracle_answer(episode.scene, query, g, episode.config.p_flip);
  episode.history.emplace_back(query, result.answer);
  episode.round += 1;
  result.extrinsic_reward = -episode.config.question_penalty;
  if (episode.round >= episode.config.t_max) {
    episode.guess = guess_target(episode.scene, episode.history);
    episode.done = true;
    const bool success = episode.guess == episode.scene.target_index;
    result.extrinsic_reward += success ? episode.config.r_success : episode.config.r_fail;
  }
  result.done = episode.done;
  return result;
}

std::string episode_record(const Episode& episode) {
  nlohmann::json j;
  j["schema"] = nlohmann::json::array();
  for (int a = 0; a < episode.scene.schema.num_attributes(); ++a)
    j["schema"].push_back({{"name", episode.scene.schema.attributes[a]},
                           {"values", episode.scene.schema.values[a]}});
  j["objects"] = nlohmann::json::array();
  for (const SceneObject& obj : episode.scene.objects) j["objects"].push_back(obj.attribute_values);
  j["target"] = episode.scene.target_index;
  j["history"] = nlohmann::json::array();
  for (const auto& [query, answer] : episode.history)
    j["history"].push_back({{"attribute", query.attribute}, {"value", query.value},
                            {"answer", to_string(answer)}});
  j["round"] = episode.round;
  j["done"] = episode.done;
  j["guess"] = episode.guess;
  j["t_max"] = episode.config.t_max;
  j["p_flip"] = episode.config.p_flip;
  j["r_success"] = episode.config.r_success;
  j["r_fail"] = episode.config.r_fail;
  j["question_penalty"] = episode.config.question_penalty;
  return j.dump();
}

Episode parse_episode_record(const std::string& line) {
  const nlohmann::json j = nlohmann::json::parse(line);
  Episode episode;
  for (const auto& attr : j.at("schema")) {
    episode.scene.schema.attributes.push_back(attr.at("name").get<std::string>());
    episode.scene.schema.values.push_back(attr.at("values").get<std::vector<std::string>>());
  }
  int id = 0;
  for (const auto& values : j.at("objects"))
    episode.scene.objects.push_back(SceneObject{id++, values.get<std::vector<int>>()});
  episode.scene.target_index = j.at("target").get<int>();
  for (const auto& pair : j.at("history")) {
    const std::string answer = pair.at("answer").get<std::string>();
    Answer a = Answer::NA;
    if (answer == "yes") a = Answer::Yes;
    else if (answer == "no") a = Answer::No;
    else if (answer != "na") throw std::runtime_error("bad answer token in episode record");
    episode.history.emplace_back(
        Query{pair.at("attribute").get<int>(), pair.at("value").get<int>()}, a);
  }
  episode.round = j.at("round").get<int>();
  episode.done = j.at("done").get<bool>();
  episode.guess = j.at("guess").get<int>();
  episode.config.schema = episode.scene.schema;
  episode.config.n_objects = episode.scene.num_objects();
  episode.config.t_max = j.at("t_max").get<int>();
  episode.config.p_flip = j.at("p_flip").get<double>();
  episode.config.r_success = j.at("r_success").get<double>();
  episode.config.r_fail = j.at("r_fail").get<double>();
  episode.config.question_penalty = j.at("question_penalty").get<double>();
  return episode;
}

void write_episode_records(std::ostream& out, const std::vector<Episode>& episodes) {
  for (const Episode& episode : episodes) out << episode_record(episode) << "\n";
}

std::vector<Episode> read_episode_records(std::istream& in) {
  std::vector<Episode> episodes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    episodes.push_back(parse_episode_record(line));
  }
  return episodes;
}

}  // namespace seeker::env
