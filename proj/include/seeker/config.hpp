#pragma once

#include "seeker/rl.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace seeker::harness {

enum class Variant : std::uint8_t { Method, Random, Reinforce, EntropyOnly };

Variant variant_from_string(const std::string& name);
const char* to_string(Variant variant);

// Parsed experiment configuration: the training options plus evaluation and
// output settings. Section/key layout is documented in the README.
struct ExperimentConfig {
  Variant variant = Variant::Method;
  rl::TrainOptions train;
  int eval_episodes = 400;
  std::optional<rl::QuerySelection> eval_selection;  // unset: derived from variant
  std::string out_dir = "out";

  // Applies the variant's parameter overrides (particle count, eta0, prior,
  // alpha and a matching effective step size for plain REINFORCE).
  rl::TrainOptions resolved_train() const;
  rl::QuerySelection resolved_eval_selection() const;

  std::string canonical_text() const;  // stable serialization, used for hashing
  std::uint64_t config_hash() const;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<Variant> variant;
  std::optional<int> n_particles;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> eta0;
  std::optional<UtilityKind> utility;
};

ExperimentConfig default_config();

// "key = value" sections; '#' and ';' start comments. Unknown sections or
// keys are errors so typos cannot silently fall back to defaults.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

// Schema spec strings: "color:3,shape:3,size:2" or explicit labels
// "color:red|green|blue,size:2".
AttributeSchema parse_schema_spec(const std::string& spec);
std::string schema_spec_string(const AttributeSchema& schema);

}  // namespace seeker::harness
