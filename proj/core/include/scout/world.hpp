#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scout/grid.hpp"

namespace scout {

// Hidden world: binary occupancy grid plus the derived coverable surface.
// Surface cells are occupied cells with at least one free 4-neighbor; they
// are what the sensor can reveal and what coverage is measured against.
struct WorldMap {
  int width = 0;
  int height = 0;
  double resolution = 1.0;  // meters per cell side
  std::vector<uint8_t> cells;  // row-major, 1 = occupied
  CellSet surface;

  GridDims dims() const { return {width, height}; }
  bool in_bounds(int x, int y) const { return dims().contains(x, y); }
  bool occupied(int x, int y) const {
    return cells[static_cast<size_t>(y) * width + x] != 0;
  }
  bool occupied_index(int i) const { return cells[static_cast<size_t>(i)] != 0; }
  int free_cell_count() const;

  bool operator==(const WorldMap&) const = default;
};

CellSet compute_surface(int width, int height, const std::vector<uint8_t>& cells);

// Builds a world and derives its surface set; throws ConfigError when the
// dimensions, resolution, or cell buffer are inconsistent.
WorldMap make_world(int width, int height, double resolution,
                    std::vector<uint8_t> cells);

struct Node {
  int id = 0;
  double x = 0.0;  // meters
  double y = 0.0;
  double heading = 0.0;  // radians

  bool operator==(const Node&) const = default;
};

// Candidate sensing locations. Ids are dense 0..n-1 and index the vector.
struct NodeSet {
  std::vector<Node> nodes;
  int start_id = 0;

  int size() const { return static_cast<int>(nodes.size()); }
  const Node& at(int id) const;
  const Node& start() const { return at(start_id); }

  bool operator==(const NodeSet&) const = default;
};

double node_distance(const NodeSet& nodes, int a, int b);

// Throws ConfigError unless every node sits on a free in-bounds cell, ids are
// dense, at most one node occupies a cell, and start_id is valid.
void validate_nodes(const NodeSet& nodes, const WorldMap& world);

enum class Split { Train, Test, Validation };

std::string to_string(Split s);
Split split_from_string(const std::string& s);

struct WorldEntry {
  WorldMap world;
  NodeSet nodes;

  bool operator==(const WorldEntry&) const = default;
};

struct WorldDataset {
  std::string generator_name;
  uint64_t seed = 0;
  Split split = Split::Train;
  std::vector<WorldEntry> entries;

  int size() const { return static_cast<int>(entries.size()); }
  bool operator==(const WorldDataset&) const = default;
};

}  // namespace scout
