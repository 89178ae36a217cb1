#pragma once

#include <limits>
#include <span>
#include <vector>

#include "scout/sensor.hpp"

namespace scout {

enum class Variant { Unconstrained, Budgeted };

struct ProblemSpec {
  int horizon = 30;  // actions after the free start observation
  double budget = std::numeric_limits<double>::infinity();  // meters
  Variant variant = Variant::Unconstrained;
  bool allow_revisits = false;

  bool operator==(const ProblemSpec&) const = default;
};

void validate_problem(const ProblemSpec& p);

// Per-node visibility plus the coverage normalizer for one (world, nodes,
// sensor) triple. Built once and shared by rewards, oracles and rollouts.
struct CoverageIndex {
  int cell_count = 0;
  std::vector<CellSet> node_hits;  // indexed by node id
  CellSet attainable;              // union of node_hits
  int denominator = 0;             // |attainable|, always > 0
};

// Throws ConfigError when no node can see any surface (denominator 0).
CoverageIndex build_coverage_index(const WorldMap& world, const NodeSet& nodes,
                                   const SensorConfig& sensor);

// Path state under the true world. `visited` is the travel path in order,
// starting at the start node; it holds no duplicates (revisits, when the
// problem allows them, move `current` and pay travel without re-appending).
struct CoverageState {
  std::vector<int> visited;
  std::vector<uint8_t> visited_mask;  // by node id
  int current = -1;
  CellSet covered;
  double traveled = 0.0;  // meters

  bool is_visited(int id) const { return visited_mask[static_cast<size_t>(id)] != 0; }
};

CoverageState initial_state(const CoverageIndex& index, const NodeSet& nodes);

// Rebuilds the state a given visit sequence induces; used when the same
// node sequence must be scored against a different world's index.
CoverageState state_for_path(std::span<const int> path, const CoverageIndex& index,
                             const NodeSet& nodes);

// Moves to `node_id`, paying travel from `current`. First visits extend the
// path and fold the node's visible set into `covered`; revisits only move.
void apply_action(CoverageState& s, int node_id, const CoverageIndex& index,
                  const NodeSet& nodes);

// Fraction of attainable surface seen by the visited set.
double coverage(const CoverageState& s, const CoverageIndex& index);
double coverage_of_set(std::span<const int> visited, const CoverageIndex& index);

// Cells a first visit to `node_id` would newly cover.
int marginal_gain_cells(int node_id, const CoverageState& s, const CoverageIndex& index);
double marginal_gain(int node_id, const CoverageState& s, const CoverageIndex& index);

// One-step reward: marginal coverage, zero when revisiting.
double reward(const CoverageState& s, const CoverageIndex& index, int node_id);

// Total Euclidean length of a node path.
double travel_cost(std::span<const int> path, const NodeSet& nodes);

// Actions available from `s`, ascending by id: unvisited nodes (plus visited
// ones when revisits are allowed), and under a budget only moves whose total
// travel stays within it (boundary inclusive).
std::vector<int> feasible_actions(const CoverageState& s, const NodeSet& nodes,
                                  const ProblemSpec& spec);

}  // namespace scout
