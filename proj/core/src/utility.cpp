#include "scout/utility.hpp"

#include <cmath>

#include "scout/errors.hpp"

namespace scout {

void validate_problem(const ProblemSpec& p) {
  if (p.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (p.variant == Variant::Budgeted) {
    if (!(p.budget > 0.0) || !std::isfinite(p.budget)) {
      throw ConfigError("budgeted variant needs a positive finite budget");
    }
  }
}

CoverageIndex build_coverage_index(const WorldMap& world, const NodeSet& nodes,
                                   const SensorConfig& sensor) {
  validate_nodes(nodes, world);
  CoverageIndex idx;
  idx.cell_count = world.width * world.height;
  idx.node_hits.reserve(static_cast<size_t>(nodes.size()));
  idx.attainable = CellSet(idx.cell_count);
  for (const Node& n : nodes.nodes) {
    idx.node_hits.push_back(visible_surface(world, n, sensor));
    idx.attainable |= idx.node_hits.back();
  }
  idx.denominator = idx.attainable.count();
  if (idx.denominator == 0) {
    throw ConfigError("no node sees any surface; coverage denominator is zero");
  }
  return idx;
}

CoverageState initial_state(const CoverageIndex& index, const NodeSet& nodes) {
  CoverageState s;
  s.visited = {nodes.start_id};
  s.visited_mask.assign(static_cast<size_t>(nodes.size()), 0);
  s.visited_mask[static_cast<size_t>(nodes.start_id)] = 1;
  s.current = nodes.start_id;
  s.covered = index.node_hits[static_cast<size_t>(nodes.start_id)];
  s.traveled = 0.0;
  return s;
}

CoverageState state_for_path(std::span<const int> path, const CoverageIndex& index,
                             const NodeSet& nodes) {
  if (path.empty()) throw ConfigError("path must contain at least the start node");
  CoverageState s;
  s.visited.assign(path.begin(), path.end());
  s.visited_mask.assign(static_cast<size_t>(nodes.size()), 0);
  s.covered = CellSet(index.cell_count);
  for (int id : path) {
    nodes.at(id);
    s.visited_mask[static_cast<size_t>(id)] = 1;
    s.covered |= index.node_hits[static_cast<size_t>(id)];
  }
  s.current = path.back();
  s.traveled = travel_cost(path, nodes);
  return s;
}

void apply_action(CoverageState& s, int node_id, const CoverageIndex& index,
                  const NodeSet& nodes) {
  nodes.at(node_id);
  s.traveled += node_distance(nodes, s.current, node_id);
  s.current = node_id;
  if (s.is_visited(node_id)) return;
  s.visited.push_back(node_id);
  s.visited_mask[static_cast<size_t>(node_id)] = 1;
  s.covered |= index.node_hits[static_cast<size_t>(node_id)];
}

double coverage(const CoverageState& s, const CoverageIndex& index) {
  return static_cast<double>(s.covered.count()) / index.denominator;
}

double coverage_of_set(std::span<const int> visited, const CoverageIndex& index) {
  CellSet covered(index.cell_count);
  for (int id : visited) covered |= index.node_hits[static_cast<size_t>(id)];
  return static_cast<double>(covered.count()) / index.denominator;
}

int marginal_gain_cells(int node_id, const CoverageState& s, const CoverageIndex& index) {
  return s.covered.count_new(index.node_hits[static_cast<size_t>(node_id)]);
}

double marginal_gain(int node_id, const CoverageState& s, const CoverageIndex& index) {
  return static_cast<double>(marginal_gain_cells(node_id, s, index)) /
         index.denominator;
}

double reward(const CoverageState& s, const CoverageIndex& index, int node_id) {
  if (s.is_visited(node_id)) return 0.0;
  return marginal_gain(node_id, s, index);
}

double travel_cost(std::span<const int> path, const NodeSet& nodes) {
  double total = 0.0;
  for (size_t i = 1; i < path.size(); ++i) {
    total += node_distance(nodes, path[i - 1], path[i]);
  }
  return total;
}

std::vector<int> feasible_actions(const CoverageState& s, const NodeSet& nodes,
                                  const ProblemSpec& spec) {
  std::vector<int> out;
  for (int id = 0; id < nodes.size(); ++id) {
    if (!spec.allow_revisits && s.is_visited(id)) continue;
    if (spec.variant == Variant::Budgeted) {
      if (s.traveled + node_distance(nodes, s.current, id) > spec.budget) continue;
    }
    out.push_back(id);
  }
  return out;
}

}  // namespace scout
