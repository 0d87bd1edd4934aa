#include "seeker/executor.hpp"

#include <stdexcept>

namespace seeker {

bool consistent_with(const SceneObject& object, const QueryAnswer& pair) {
  const auto& [query, answer] = pair;
  if (answer == Answer::NA) return true;
  const bool match = object.attribute_values.at(query.attribute) == query.value;
  return answer == Answer::Yes ? match : !match;
}

GoalPosterior candidate_posterior(const Scene& scene, const History& history) {
  const int n = scene.num_objects();
  if (n < 1) throw std::invalid_argument("scene has no objects");
  Eigen::VectorXd weights(n);
  for (int o = 0; o < n; ++o) {
    double w = 1.0;
    for (const QueryAnswer& pair : history) {
      (void)token_id(pair.first, scene.schema);  // validate against the schema
      w *= consistent_with(scene.objects[o], pair) ? (1.0 - kConsistencySmoothing)
                                                   : kConsistencySmoothing;
    }
    weights[o] = w;
  }
  return GoalPosterior{weights / weights.sum()};
}

int guess_target(const Scene& scene, const History& history) {
  const GoalPosterior posterior = candidate_posterior(scene, history);
  int best = 0;
  for (int o = 1; o < posterior.probs.size(); ++o)
    if (posterior.probs[o] > posterior.probs[best]) best = o;
  return best;
}

double executor_score(const Scene& scene, const History& history, const QueryAnswer& hypothetical,
                      int object_id) {
  if (object_id < 0 || object_id >= scene.num_objects())
    throw std::invalid_argument("object id out of range");
  History extended = history;
  extended.push_back(hypothetical);
  return candidate_posterior(scene, extended).probs[object_id];
}

double executor_score(const Scene& scene, const History& history,
                      const QueryAnswer& hypothetical) {
  return executor_score(scene, history, hypothetical, guess_target(scene, history));
}

}  // namespace seeker
