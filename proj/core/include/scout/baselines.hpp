#pragma once

#include <span>
#include <string>

#include "scout/belief.hpp"

namespace scout {

// Hand-designed exploration heuristics; each scores candidates by one
// feature component minus a travel penalty.
enum class HeuristicMetric { AverageEntropy, RearSideVoxel, OcclusionAware, UnknownCount };

std::string to_string(HeuristicMetric m);
HeuristicMetric heuristic_from_string(const std::string& name);

struct HeuristicConfig {
  HeuristicMetric metric = HeuristicMetric::AverageEntropy;
  double motion_penalty = 0.0;  // lambda on translation distance
};

double heuristic_score(const HeuristicConfig& cfg, const FeatureVector& x);

// Argmax of the score over `feasible` (ascending ids, first maximum wins).
// Throws NoFeasibleActionError when `feasible` is empty.
int heuristic_act(const HeuristicConfig& cfg, const Belief& belief,
                  const CoverageState& state, const NodeSet& nodes,
                  const ProblemSpec& spec, const SensorConfig& sensor,
                  std::span<const int> feasible);

}  // namespace scout
