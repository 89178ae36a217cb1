#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "scout/belief.hpp"
#include "scout/errors.hpp"
#include "scout/sensor.hpp"

using namespace scout;
using scout::testing::world_from_ascii;

namespace {

Measurement measurement_of(int width, int height, std::vector<int> hits,
                           std::vector<int> frees) {
  Measurement m;
  m.node_id = 0;
  m.hit_cells = CellSet(width * height);
  m.free_cells = CellSet(width * height);
  for (int c : hits) m.hit_cells.insert(c);
  for (int c : frees) m.free_cells.insert(c);
  return m;
}

// 9x9 belief, everything Free except four wall cells two steps out from the
// center in each cardinal direction, each with one Unknown cell behind it
// (center rows/columns sketched):
//
//     . . U # . # U . .        row y = 4, around the candidate cell (4,4)
//     same pattern vertically in column x = 4
Belief four_walls() {
  Belief b = make_belief(9, 9, 1.0);
  for (auto& o : b.occ) o = Occ::Free;
  auto set = [&](int x, int y, Occ v) { b.occ[static_cast<size_t>(y) * 9 + x] = v; };
  set(6, 4, Occ::Occupied);
  set(7, 4, Occ::Unknown);
  set(2, 4, Occ::Occupied);
  set(1, 4, Occ::Unknown);
  set(4, 6, Occ::Occupied);
  set(4, 7, Occ::Unknown);
  set(4, 2, Occ::Occupied);
  set(4, 1, Occ::Unknown);
  return b;
}

// Candidate node 1 sits at the center with heading pi/4, so a 4-ray full
// circle scan points exactly along the axes. Node 0 is the current node.
NodeSet four_wall_nodes() {
  NodeSet ns;
  ns.nodes.push_back({0, 1.5, 0.5, 0.0});
  ns.nodes.push_back({1, 4.5, 4.5, kTwoPi / 8.0});
  ns.start_id = 0;
  return ns;
}

CoverageState fresh_state(int node_count, int current) {
  CoverageState s;
  s.visited = {current};
  s.visited_mask.assign(static_cast<size_t>(node_count), 0);
  s.visited_mask[static_cast<size_t>(current)] = 1;
  s.current = current;
  s.covered = CellSet(81);
  s.traveled = 0.0;
  return s;
}

SensorConfig cardinal_sensor(double range) {
  SensorConfig s;
  s.num_rays = 4;
  s.fov = kTwoPi;
  s.max_range = range;
  return s;
}

}  // namespace

TEST_SUITE("belief") {

TEST_CASE("belief starts unknown and commits measurements monotonically") {
  Belief b = make_belief(4, 3, 1.0);
  CHECK(b.unknown_count() == 12);
  Measurement m = measurement_of(4, 3, {5}, {0, 1, 4});
  belief_update(b, 7, m);
  CHECK(b.at(1, 1) == Occ::Occupied);
  CHECK(b.at(0, 0) == Occ::Free);
  CHECK(b.at(1, 0) == Occ::Free);
  CHECK(b.at(0, 1) == Occ::Free);
  CHECK(b.at(3, 2) == Occ::Unknown);
  CHECK(b.unknown_count() == 8);
  CHECK(b.count(Occ::Free) == 3);
  REQUIRE(b.history.size() == 1);
  CHECK(b.history[0].first == 7);

  // Idempotent on cells; history still records the repeat.
  belief_update(b, 7, m);
  CHECK(b.unknown_count() == 8);
  CHECK(b.history.size() == 2);
}

TEST_CASE("belief_update rejects contradictions and mismatched grids") {
  Belief b = make_belief(4, 3, 1.0);
  belief_update(b, 0, measurement_of(4, 3, {}, {5}));
  CHECK_THROWS_AS(belief_update(b, 1, measurement_of(4, 3, {5}, {})),
                  ObservationConflictError);

  Measurement both = measurement_of(4, 3, {2}, {2});
  CHECK_THROWS_AS(belief_update(b, 1, both), ObservationConflictError);

  Measurement wrong = measurement_of(5, 3, {}, {0});
  CHECK_THROWS_AS(belief_update(b, 1, wrong), ConfigError);
}

TEST_CASE("belief mirrors the world on scanned cells") {
  WorldMap w = world_from_ascii({
      ".........",
      "....#....",
      ".........",
      ".........",
      ".........",
  });
  Node n{0, 4.5, 3.5, 0.0};
  SensorConfig s;
  s.num_rays = 64;
  s.max_range = 4.0;
  Measurement m = raycast(w, n, s);
  Belief b = make_belief(9, 5, 1.0);
  belief_update(b, 0, m);
  for (int idx : m.hit_cells.to_indices()) {
    CHECK(b.occ[static_cast<size_t>(idx)] == Occ::Occupied);
  }
  for (int idx : m.free_cells.to_indices()) {
    CHECK(b.occ[static_cast<size_t>(idx)] == Occ::Free);
  }
  CHECK(b.unknown_count() ==
        45 - m.hit_cells.count() - m.free_cells.count());
}

TEST_CASE("feature schema is frozen") {
  CHECK(kFeatureSchemaVersion == 1);
  CHECK(kFeatureCount == 10);
  const auto& names = feature_names();
  CHECK(names[kAvgEntropyGain] == "avg_entropy_gain");
  CHECK(names[kUnknownCellsInRange] == "unknown_cells_in_range");
  CHECK(names[kRearSideVoxelCount] == "rear_side_voxel_count");
  CHECK(names[kRearSideEntropyGain] == "rear_side_entropy_gain");
  CHECK(names[kOcclusionAwareGain] == "occlusion_aware_gain");
  CHECK(names[kExpectedNewSurface] == "expected_new_surface");
  CHECK(names[kTranslationDist] == "translation_dist");
  CHECK(names[kHeadingChange] == "heading_change");
  CHECK(names[kRemainingBudgetFraction] == "remaining_budget_fraction");
  CHECK(names[kTimestepFraction] == "timestep_fraction");
}

TEST_CASE("four-wall fixture produces the hand-computed feature vector") {
  Belief b = four_walls();
  NodeSet ns = four_wall_nodes();
  CoverageState s = fresh_state(2, 0);
  ProblemSpec spec;
  spec.horizon = 10;
  SensorConfig sensor = cardinal_sensor(3.5);

  FeatureVector x = extract_features(b, s, 1, ns, spec, sensor);

  // Every ray crosses only Free cells before its wall: no entropy gain.
  CHECK(x[kAvgEntropyGain] == 0.0);
  // The four rear cells are the only unknowns, centers 3.0 m out.
  CHECK(x[kUnknownCellsInRange] == 4.0);
  // One unknown look-behind cell per cardinal wall.
  CHECK(x[kRearSideVoxelCount] == 4.0);
  // Rear cells entered at t = 2.5: weight 1/3.5 each.
  CHECK(x[kRearSideEntropyGain] == doctest::Approx(4.0 / 3.5).epsilon(1e-12));
  CHECK(x[kOcclusionAwareGain] == 0.0);
  // Each wall cell borders its unknown rear cell.
  CHECK(x[kExpectedNewSurface] == 4.0);
  // Spec example: offset (3,4) from the current node.
  CHECK(x[kTranslationDist] == 5.0);
  CHECK(x[kHeadingChange] == 0.0);  // first move
  CHECK(x[kRemainingBudgetFraction] == 1.0);
  CHECK(x[kTimestepFraction] == 0.0);
}

TEST_CASE("rear look-behind may pass max_range but in-range counting cannot") {
  Belief b = four_walls();
  NodeSet ns = four_wall_nodes();
  CoverageState s = fresh_state(2, 0);
  ProblemSpec spec;
  SensorConfig sensor = cardinal_sensor(2.0);  // walls at 1.5, rear at 2.5

  FeatureVector x = extract_features(b, s, 1, ns, spec, sensor);
  CHECK(x[kRearSideVoxelCount] == 4.0);
  CHECK(x[kRearSideEntropyGain] == doctest::Approx(4.0 / 3.5).epsilon(1e-12));
  CHECK(x[kUnknownCellsInRange] == 0.0);  // rear centers at 3.0 > 2.0
  CHECK(x[kExpectedNewSurface] == 4.0);
}

TEST_CASE("unknown-field fixture counts crossings per ray without dedup") {
  Belief b = make_belief(5, 5, 1.0);  // all Unknown
  NodeSet ns;
  ns.nodes.push_back({0, 0.5, 0.5, 0.0});
  ns.nodes.push_back({1, 2.5, 2.5, kTwoPi / 8.0});
  ns.start_id = 0;
  CoverageState s = fresh_state(2, 0);
  s.covered = CellSet(25);
  ProblemSpec spec;
  SensorConfig sensor = cardinal_sensor(1.5);

  FeatureVector x = extract_features(b, s, 1, ns, spec, sensor);
  // Each cardinal ray crosses the origin cell plus one neighbor (the next
  // cell enters exactly at max_range and is cut). The shared origin cell is
  // counted once per ray: 8 crossings / 4 rays.
  CHECK(x[kAvgEntropyGain] == 2.0);
  // Deduped distance-weighted version: origin once at t=0, four neighbors
  // at t=0.5.
  CHECK(x[kOcclusionAwareGain] ==
        doctest::Approx(1.0 + 4.0 / 1.5).epsilon(1e-12));
  // All nine cells of the 3x3 block have centers within 1.5.
  CHECK(x[kUnknownCellsInRange] == 9.0);
  CHECK(x[kRearSideVoxelCount] == 0.0);
  CHECK(x[kExpectedNewSurface] == 0.0);
}

TEST_CASE("heading change follows the turn angle between legs") {
  Belief b = make_belief(12, 12, 1.0);
  for (auto& o : b.occ) o = Occ::Free;
  NodeSet ns;
  ns.nodes.push_back({0, 0.5, 0.5, 0.0});
  ns.nodes.push_back({1, 3.5, 4.5, 0.0});   // leg (3,4)
  ns.nodes.push_back({2, 6.5, 8.5, 0.0});   // same direction again
  ns.nodes.push_back({3, 3.5, 10.5, 0.0});  // turn to straight north
  ns.start_id = 0;
  ProblemSpec spec;
  SensorConfig sensor = cardinal_sensor(1.0);

  CoverageState s = fresh_state(4, 0);
  s.visited = {0, 1};
  s.visited_mask[1] = 1;
  s.current = 1;

  FeatureVector straight = extract_features(b, s, 2, ns, spec, sensor);
  CHECK(straight[kHeadingChange] == 0.0);
  CHECK(straight[kTranslationDist] == 5.0);

  FeatureVector turn = extract_features(b, s, 3, ns, spec, sensor);
  double expect = std::abs(std::remainder(
      std::atan2(6.0, 0.0) - std::atan2(4.0, 3.0), kTwoPi));
  CHECK(turn[kHeadingChange] == doctest::Approx(expect).epsilon(1e-12));

  FeatureVector back = extract_features(b, s, 0, ns, spec, sensor);
  CHECK(back[kHeadingChange] == doctest::Approx(kTwoPi / 2.0).epsilon(1e-12));
}

TEST_CASE("budget fraction tracks the remaining travel allowance") {
  Belief b = four_walls();
  NodeSet ns = four_wall_nodes();
  CoverageState s = fresh_state(2, 0);
  s.traveled = 2.0;
  SensorConfig sensor = cardinal_sensor(3.5);

  ProblemSpec spec;
  spec.variant = Variant::Budgeted;
  spec.budget = 10.0;  // translation is 5: (10 - 2 - 5) / 10
  FeatureVector x = extract_features(b, s, 1, ns, spec, sensor);
  CHECK(x[kRemainingBudgetFraction] == doctest::Approx(0.3).epsilon(1e-12));

  spec.budget = 6.0;  // overdraft clamps to zero
  x = extract_features(b, s, 1, ns, spec, sensor);
  CHECK(x[kRemainingBudgetFraction] == 0.0);
}

TEST_CASE("timestep fraction counts actions over the horizon") {
  Belief b = four_walls();
  NodeSet ns = four_wall_nodes();
  ProblemSpec spec;
  spec.horizon = 10;
  SensorConfig sensor = cardinal_sensor(3.5);

  CoverageState s = fresh_state(2, 0);
  s.visited = {0, 1, 0};  // hypothetical three-entry path
  FeatureVector x = extract_features(b, s, 1, ns, spec, sensor);
  CHECK(x[kTimestepFraction] == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("make_belief validates dimensions") {
  CHECK_THROWS_AS(make_belief(0, 3, 1.0), ConfigError);
  CHECK_THROWS_AS(make_belief(3, 3, 0.0), ConfigError);
}

}  // TEST_SUITE
