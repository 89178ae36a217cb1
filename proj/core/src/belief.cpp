#include "scout/belief.hpp"

#include <algorithm>
#include <cmath>

#include "scout/errors.hpp"

namespace scout {

int Belief::unknown_count() const { return count(Occ::Unknown); }

int Belief::count(Occ state) const {
  int n = 0;
  for (Occ o : occ) n += (o == state);
  return n;
}

Belief make_belief(int width, int height, double resolution) {
  if (width < 1 || height < 1) throw ConfigError("belief dimensions must be positive");
  if (!(resolution > 0.0)) throw ConfigError("belief resolution must be positive");
  Belief b;
  b.width = width;
  b.height = height;
  b.resolution = resolution;
  b.occ.assign(static_cast<size_t>(width) * static_cast<size_t>(height), Occ::Unknown);
  return b;
}

namespace {

void commit(Belief& b, int cell, Occ value) {
  Occ& slot = b.occ[static_cast<size_t>(cell)];
  if (slot == Occ::Unknown) {
    slot = value;
  } else if (slot != value) {
    throw ObservationConflictError("measurement contradicts a committed belief cell");
  }
}

}  // namespace

void belief_update(Belief& b, int node_id, const Measurement& m) {
  if (m.hit_cells.capacity() != b.width * b.height ||
      m.free_cells.capacity() != b.width * b.height) {
    throw ConfigError("measurement grid does not match belief grid");
  }
  if (m.hit_cells.intersects(m.free_cells)) {
    throw ObservationConflictError("measurement marks a cell both hit and free");
  }
  for (int32_t c : m.free_cells.to_indices()) commit(b, c, Occ::Free);
  for (int32_t c : m.hit_cells.to_indices()) commit(b, c, Occ::Occupied);
  b.history.emplace_back(node_id, m);
}

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "avg_entropy_gain",      "unknown_cells_in_range", "rear_side_voxel_count",
      "rear_side_entropy_gain", "occlusion_aware_gain",   "expected_new_surface",
      "translation_dist",      "heading_change",         "remaining_budget_fraction",
      "timestep_fraction",
  };
  return names;
}

namespace {

bool touches_unknown(const Belief& b, int cell) {
  int x = cell % b.width;
  int y = cell / b.width;
  return (x > 0 && b.at(x - 1, y) == Occ::Unknown) ||
         (x + 1 < b.width && b.at(x + 1, y) == Occ::Unknown) ||
         (y > 0 && b.at(x, y - 1) == Occ::Unknown) ||
         (y + 1 < b.height && b.at(x, y + 1) == Occ::Unknown);
}

int unknown_in_range(const Belief& b, double cx, double cy, double range) {
  double res = b.resolution;
  int x_lo = std::max(0, static_cast<int>(std::floor((cx - range) / res)));
  int x_hi = std::min(b.width - 1, static_cast<int>(std::floor((cx + range) / res)));
  int y_lo = std::max(0, static_cast<int>(std::floor((cy - range) / res)));
  int y_hi = std::min(b.height - 1, static_cast<int>(std::floor((cy + range) / res)));
  double r2 = range * range;
  int n = 0;
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      if (b.at(x, y) != Occ::Unknown) continue;
      double dx = (static_cast<double>(x) + 0.5) * res - cx;
      double dy = (static_cast<double>(y) + 0.5) * res - cy;
      if (dx * dx + dy * dy <= r2) ++n;
    }
  }
  return n;
}

double wrapped_abs_angle(double a) {
  a = std::remainder(a, kTwoPi);
  return std::abs(a);
}

}  // namespace

FeatureVector extract_features(const Belief& belief, const CoverageState& state,
                               int candidate, const NodeSet& nodes,
                               const ProblemSpec& spec, const SensorConfig& sensor) {
  const Node& cand = nodes.at(candidate);
  const Node& cur = nodes.at(state.current);

  int cell_count = belief.width * belief.height;
  CellSet unknown_seen(cell_count);
  CellSet rear_seen(cell_count);
  CellSet hits_seen(cell_count);

  int total_unknown_crossed = 0;
  double occlusion_gain = 0.0;
  int rear_count = 0;
  double rear_entropy = 0.0;
  int new_surface = 0;

  // Look-behind needs one cell past the hit, so the traversal limit carries
  // two extra cells of slack; the visitor applies the true range cut itself.
  double limit = sensor.max_range + 2.0 * belief.resolution;
  std::vector<double> dirs = ray_directions(cand, sensor);
  for (double theta : dirs) {
    bool past_hit = false;
    traverse_cells(belief.dims(), belief.resolution, cand.x, cand.y, theta, limit,
                   [&](int cell, double t) {
                     Occ o = belief.occ[static_cast<size_t>(cell)];
                     if (past_hit) {
                       if (o == Occ::Unknown && rear_seen.insert_new(cell)) {
                         ++rear_count;
                         rear_entropy += 1.0 / (1.0 + t);
                       }
                       return false;
                     }
                     if (t >= sensor.max_range) return false;
                     if (o == Occ::Occupied) {
                       if (hits_seen.insert_new(cell) && touches_unknown(belief, cell)) {
                         ++new_surface;
                       }
                       past_hit = true;
                       return true;
                     }
                     if (o == Occ::Unknown) {
                       ++total_unknown_crossed;
                       if (unknown_seen.insert_new(cell)) {
                         occlusion_gain += 1.0 / (1.0 + t);
                       }
                     }
                     return true;
                   });
  }

  double translation = std::hypot(cand.x - cur.x, cand.y - cur.y);

  double heading_change = 0.0;
  if (state.visited.size() >= 2) {
    const Node& prev = nodes.at(state.visited[state.visited.size() - 2]);
    double incoming = std::atan2(cur.y - prev.y, cur.x - prev.x);
    double outgoing = std::atan2(cand.y - cur.y, cand.x - cur.x);
    heading_change = wrapped_abs_angle(outgoing - incoming);
  }

  double budget_fraction = 1.0;
  if (spec.variant == Variant::Budgeted) {
    budget_fraction = std::max(0.0, (spec.budget - state.traveled - translation) /
                                        spec.budget);
  }

  FeatureVector x{};
  x[kAvgEntropyGain] = static_cast<double>(total_unknown_crossed) / sensor.num_rays;
  x[kUnknownCellsInRange] =
      static_cast<double>(unknown_in_range(belief, cand.x, cand.y, sensor.max_range));
  x[kRearSideVoxelCount] = static_cast<double>(rear_count);
  x[kRearSideEntropyGain] = rear_entropy;
  x[kOcclusionAwareGain] = occlusion_gain;
  x[kExpectedNewSurface] = static_cast<double>(new_surface);
  x[kTranslationDist] = translation;
  x[kHeadingChange] = heading_change;
  x[kRemainingBudgetFraction] = budget_fraction;
  x[kTimestepFraction] =
      static_cast<double>(state.visited.size() - 1) / spec.horizon;
  return x;
}

}  // namespace scout
