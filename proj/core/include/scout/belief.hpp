#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "scout/sensor.hpp"
#include "scout/utility.hpp"

namespace scout {

enum class Occ : uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

// Partial knowledge of the hidden grid, accumulated from measurements. Cells
// only ever move Unknown -> Free or Unknown -> Occupied; a measurement that
// contradicts a committed cell throws ObservationConflictError.
struct Belief {
  int width = 0;
  int height = 0;
  double resolution = 1.0;
  std::vector<Occ> occ;
  std::vector<std::pair<int, Measurement>> history;  // (node_id, measurement)

  GridDims dims() const { return {width, height}; }
  Occ at(int x, int y) const { return occ[static_cast<size_t>(y) * width + x]; }
  int unknown_count() const;
  int count(Occ state) const;
};

Belief make_belief(int width, int height, double resolution);

// Folds a measurement in: hit cells become Occupied, free cells become Free.
// Idempotent for repeated identical measurements.
void belief_update(Belief& b, int node_id, const Measurement& m);

inline constexpr int kFeatureSchemaVersion = 1;
inline constexpr int kFeatureCount = 10;
using FeatureVector = std::array<double, kFeatureCount>;

// Fixed feature order; models store this schema and refuse to load when it
// differs from the extractor they would run against.
enum FeatureComponent : int {
  kAvgEntropyGain = 0,      // mean unknown cells crossed per simulated ray
  kUnknownCellsInRange,     // unknown cells whose center is within max_range
  kRearSideVoxelCount,      // unknown cells one step behind occupied hits
  kRearSideEntropyGain,     // same cells weighted by 1 / (1 + distance)
  kOcclusionAwareGain,      // unknown crossed cells weighted by 1 / (1 + distance)
  kExpectedNewSurface,      // hit cells adjacent (4-way) to unknown space
  kTranslationDist,         // meters from the current node
  kHeadingChange,           // |turn angle| in [0, pi], 0 on the first move
  kRemainingBudgetFraction, // 1.0 for the unconstrained variant
  kTimestepFraction,        // actions taken so far / horizon
};

const std::array<std::string, kFeatureCount>& feature_names();

// Simulated-scan features for moving to `candidate`. Rays run on the belief
// grid: Occupied blocks, Free and Unknown are crossed. All rays stay inside
// max_range except the single look-behind cell probed after a hit.
FeatureVector extract_features(const Belief& belief, const CoverageState& state,
                               int candidate, const NodeSet& nodes,
                               const ProblemSpec& spec, const SensorConfig& sensor);

}  // namespace scout
