#pragma once

#include "seeker/core.hpp"

#include <Eigen/Core>

namespace seeker {

// Smoothing weight for history pairs an object is inconsistent with. Keeps
// the posterior well defined under a noisy oracle and the entropy utility
// finite.
inline constexpr double kConsistencySmoothing = 0.01;

struct GoalPosterior {
  Eigen::VectorXd probs;  // one entry per scene object, sums to 1
};

// Does object keep the answer plausible? Yes demands a value match, No a
// mismatch, NA is uninformative.
bool consistent_with(const SceneObject& object, const QueryAnswer& pair);

// Product of per-pair consistency factors (1-eps vs eps), normalized.
// Duplicate history pairs multiply their factor again.
GoalPosterior candidate_posterior(const Scene& scene, const History& history);

// Argmax of the posterior; ties break to the lowest object id.
int guess_target(const Scene& scene, const History& history);

// Posterior mass at object_id after appending a hypothetical pair. Callers
// pick the reference object: the current top candidate while the target is
// unknown to the seeker, the true target when scoring realized answers.
double executor_score(const Scene& scene, const History& history, const QueryAnswer& hypothetical,
                      int object_id);

// Convenience form scored at the executor's current top candidate.
double executor_score(const Scene& scene, const History& history, const QueryAnswer& hypothetical);

}  // namespace seeker
