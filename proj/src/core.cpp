#include "seeker/core.hpp"

#include <cmath>
#include <stdexcept>

namespace seeker {

int AttributeSchema::vocab_size() const {
  int total = 0;
  for (const auto& v : values) total += static_cast<int>(v.size());
  return total;
}

int AttributeSchema::token_offset(int attribute) const {
  if (attribute < 0 || attribute >= num_attributes())
    throw std::invalid_argument("attribute index out of range");
  int offset = 0;
  for (int a = 0; a < attribute; ++a) offset += num_values(a);
  return offset;
}

void AttributeSchema::validate() const {
  if (attributes.empty()) throw std::invalid_argument("schema needs at least one attribute");
  if (attributes.size() != values.size())
    throw std::invalid_argument("schema attribute/value list size mismatch");
  for (const auto& v : values)
    if (v.size() < 2) throw std::invalid_argument("each attribute needs at least two values");
}

AttributeSchema AttributeSchema::counts(const std::vector<std::pair<std::string, int>>& spec) {
  AttributeSchema schema;
  for (const auto& [name, count] : spec) {
    schema.attributes.push_back(name);
    std::vector<std::string> labels;
    labels.reserve(count);
    for (int i = 0; i < count; ++i) labels.push_back(name + std::to_string(i));
    schema.values.push_back(std::move(labels));
  }
  schema.validate();
  return schema;
}

const char* to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    case Answer::NA: return "na";
  }
  return "na";
}

UtilityKind utility_kind_from_string(const std::string& name) {
  if (name == "entropy") return UtilityKind::Entropy;
  if (name == "exp") return UtilityKind::Exp;
  throw std::invalid_argument("unknown utility kind: " + name);
}

const char* to_string(UtilityKind kind) {
  return kind == UtilityKind::Entropy ? "entropy" : "exp";
}

void RunConfig::validate() const {
  if (n_particles < 1) throw std::invalid_argument("n_particles must be >= 1");
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must be in [0,1]");
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
  if (eta0 < 0.0) throw std::invalid_argument("eta0 must be non-negative");
  if (epochs < 0) throw std::invalid_argument("epochs must be non-negative");
  if (episodes_per_epoch < 1) throw std::invalid_argument("episodes_per_epoch must be >= 1");
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  if (step_theta <= 0.0) throw std::invalid_argument("step_theta must be positive");
  if (step_omega <= 0.0) throw std::invalid_argument("step_omega must be positive");
  if (prior_sigma <= 0.0) throw std::invalid_argument("prior_sigma must be positive");
  if (answer_samples < 2) throw std::invalid_argument("answer_samples must be >= 2");
}

int feature_dim(const AttributeSchema& schema) { return 2 * schema.vocab_size() + 1; }

int token_id(const Query& query, const AttributeSchema& schema) {
  if (query.attribute < 0 || query.attribute >= schema.num_attributes())
    throw std::invalid_argument("query attribute out of range");
  if (query.value < 0 || query.value >= schema.num_values(query.attribute))
    throw std::invalid_argument("query value out of range");
  return schema.token_offset(query.attribute) + query.value;
}

Query query_of_token(int token, const AttributeSchema& schema) {
  if (token < 0 || token >= schema.vocab_size())
    throw std::invalid_argument("token id out of range");
  for (int a = 0; a < schema.num_attributes(); ++a) {
    const int n = schema.num_values(a);
    if (token < n) return Query{a, token};
    token -= n;
  }
  throw std::invalid_argument("token id out of range");  // unreachable
}

DialogState featurize(const Scene& scene, const History& history) {
  const AttributeSchema& schema = scene.schema;
  schema.validate();
  if (scene.objects.empty()) throw std::invalid_argument("scene has no objects");

  const int vocab = schema.vocab_size();
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(vocab);
  for (const SceneObject& obj : scene.objects) {
    if (static_cast<int>(obj.attribute_values.size()) != schema.num_attributes())
      throw std::invalid_argument("object attribute count does not match schema");
    for (int a = 0; a < schema.num_attributes(); ++a)
      counts[token_id(Query{a, obj.attribute_values[a]}, schema)] += 1.0;
  }
  counts /= static_cast<double>(scene.objects.size());

  Eigen::VectorXd signs = Eigen::VectorXd::Zero(vocab);
  for (const auto& [query, answer] : history) {
    const int token = token_id(query, schema);  // validates against the schema
    if (answer == Answer::Yes) signs[token] = 1.0;
    else if (answer == Answer::No) signs[token] = -1.0;
    // NA carries no attribute evidence; slot stays 0.
  }

  DialogState state;
  state.scene_features = counts;
  state.history = history;
  state.round = static_cast<int>(history.size());
  state.feature_vector.resize(feature_dim(schema));
  state.feature_vector << counts, signs, 1.0;
  return state;
}

}  // namespace seeker
