#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace seeker {

// Query vocabulary: one token per (attribute, value) pair, laid out
// attribute-major so token ids are a bijection onto [0, vocab_size()).
struct AttributeSchema {
  std::vector<std::string> attributes;
  std::vector<std::vector<std::string>> values;  // one label list per attribute

  int num_attributes() const { return static_cast<int>(attributes.size()); }
  int num_values(int attribute) const { return static_cast<int>(values.at(attribute).size()); }
  int vocab_size() const;
  int token_offset(int attribute) const;

  void validate() const;  // throws std::invalid_argument on malformed schema

  // "name:count" schemas with auto-generated value labels.
  static AttributeSchema counts(const std::vector<std::pair<std::string, int>>& spec);
};

struct SceneObject {
  int id = 0;
  std::vector<int> attribute_values;  // one value index per schema attribute
};

struct Scene {
  AttributeSchema schema;
  std::vector<SceneObject> objects;
  int target_index = 0;  // hidden from the seeker; used by the oracle and evaluation

  int num_objects() const { return static_cast<int>(objects.size()); }
  const SceneObject& target() const { return objects.at(target_index); }
};

struct Query {
  int attribute = 0;
  int value = 0;

  friend bool operator==(const Query&, const Query&) = default;
};

enum class Answer : std::uint8_t { Yes, No, NA };

const char* to_string(Answer a);

using QueryAnswer = std::pair<Query, Answer>;
using History = std::vector<QueryAnswer>;

// s^(t): scene summary plus the question-answer history, with the fixed
// feature encoding used by both the policy and the answerer model.
struct DialogState {
  Eigen::VectorXd scene_features;  // per-token object counts / num_objects
  History history;
  int round = 0;
  Eigen::VectorXd feature_vector;  // [scene_features; signed history; 1]
};

struct TrajectoryStep {
  DialogState state;
  Query query;
  Answer answer = Answer::NA;
  double extrinsic_reward = 0.0;
  double intrinsic_gain = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  int guess = -1;
  bool success = false;
};

enum class UtilityKind : std::uint8_t { Entropy, Exp };

UtilityKind utility_kind_from_string(const std::string& name);
const char* to_string(UtilityKind kind);

// Training-loop constants. Defaults follow the reference experiment setup:
// 10 particles, beta = 1.0, alpha = 0.01, eta0 = 0.1 with linear decay.
struct RunConfig {
  int n_particles = 10;
  double gamma = 0.99;
  double alpha = 0.01;
  double beta = 1.0;
  double eta0 = 0.1;
  int epochs = 60;
  int episodes_per_epoch = 32;  // per particle
  int t_max = 5;
  double step_theta = 2e-4;
  double step_omega = 5e-3;
  UtilityKind utility_kind = UtilityKind::Entropy;
  double prior_sigma = 10.0;
  int answer_samples = 16;  // M in the gain statistics
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument when out of range
};

// Number of feature entries for a schema: per-token scene counts, the signed
// history block, and a trailing bias entry.
int feature_dim(const AttributeSchema& schema);

// Flat token id of a query and its inverse.
int token_id(const Query& query, const AttributeSchema& schema);
Query query_of_token(int token, const AttributeSchema& schema);

// Deterministic state encoding. History entries answered Yes contribute +1 at
// their token slot, No contributes -1, NA and unasked tokens stay 0.
DialogState featurize(const Scene& scene, const History& history);

}  // namespace seeker
