#pragma once

#include <optional>

#include "scenelogic/value.hpp"

namespace scenelogic {

inline constexpr double kBaselineDecay = 0.9;
inline constexpr double kRewardWeight = 0.1;

// 1 iff predicted holds a value equal to ground_truth; nullopt (ERROR) never
// matches.
int answer_reward(const std::optional<Value>& predicted, const Value& ground_truth);

// Moving-average baseline: kBaselineDecay * baseline + kRewardWeight * reward.
// Throws std::invalid_argument if baseline is outside [0, 1].
double update_baseline(double baseline, int reward);

}  // namespace scenelogic
