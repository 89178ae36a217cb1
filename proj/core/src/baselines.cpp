#include "scout/baselines.hpp"

#include <limits>

#include "scout/errors.hpp"

namespace scout {

std::string to_string(HeuristicMetric m) {
  switch (m) {
    case HeuristicMetric::AverageEntropy: return "average-entropy";
    case HeuristicMetric::RearSideVoxel: return "rear-side-voxel";
    case HeuristicMetric::OcclusionAware: return "occlusion-aware";
    case HeuristicMetric::UnknownCount: return "unknown-count";
  }
  throw ConfigError("invalid heuristic metric");
}

HeuristicMetric heuristic_from_string(const std::string& name) {
  if (name == "average-entropy") return HeuristicMetric::AverageEntropy;
  if (name == "rear-side-voxel") return HeuristicMetric::RearSideVoxel;
  if (name == "occlusion-aware") return HeuristicMetric::OcclusionAware;
  if (name == "unknown-count") return HeuristicMetric::UnknownCount;
  throw ConfigError("unknown heuristic metric: " + name);
}

double heuristic_score(const HeuristicConfig& cfg, const FeatureVector& x) {
  double base = 0.0;
  switch (cfg.metric) {
    case HeuristicMetric::AverageEntropy: base = x[kAvgEntropyGain]; break;
    case HeuristicMetric::RearSideVoxel: base = x[kRearSideVoxelCount]; break;
    case HeuristicMetric::OcclusionAware: base = x[kOcclusionAwareGain]; break;
    case HeuristicMetric::UnknownCount: base = x[kUnknownCellsInRange]; break;
  }
  return base - cfg.motion_penalty * x[kTranslationDist];
}

int heuristic_act(const HeuristicConfig& cfg, const Belief& belief,
                  const CoverageState& state, const NodeSet& nodes,
                  const ProblemSpec& spec, const SensorConfig& sensor,
                  std::span<const int> feasible) {
  if (feasible.empty()) throw NoFeasibleActionError("heuristic has no feasible action");
  int best = feasible.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (int id : feasible) {
    FeatureVector x = extract_features(belief, state, id, nodes, spec, sensor);
    double score = heuristic_score(cfg, x);
    if (score > best_score) {
      best_score = score;
      best = id;
    }
  }
  return best;
}

}  // namespace scout
