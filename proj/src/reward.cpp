#include "scenelogic/reward.hpp"

#include <stdexcept>

namespace scenelogic {

int answer_reward(const std::optional<Value>& predicted, const Value& ground_truth) {
  return predicted && *predicted == ground_truth ? 1 : 0;
}

double update_baseline(double baseline, int reward) {
  if (!(baseline >= 0.0 && baseline <= 1.0))
    throw std::invalid_argument("baseline must lie in [0, 1]");
  if (reward != 0 && reward != 1) throw std::invalid_argument("reward must be 0 or 1");
  return kBaselineDecay * baseline + kRewardWeight * reward;
}

}  // namespace scenelogic
