#pragma once

#include <cstdint>
#include <string>

#include "scout/world.hpp"

namespace scout {

// Procedural world families. Every generator is deterministic in (dims,
// params, seed, world index): each world draws from its own child stream, so
// any subsequence of indices regenerates identically.
struct ParallelLinesParams {
  double min_length = 24.0;  // meters
  double max_length = 40.0;
  double min_separation = 6.0;
  double max_separation = 14.0;
  double thickness = 1.0;  // cells
  int max_attempts = 64;   // placement retries before giving up
};

struct DistributedBlocksParams {
  int min_blocks = 4;
  int max_blocks = 8;
  int min_half_extent = 2;  // cells
  int max_half_extent = 5;
  double margin_fraction = 0.25;  // outer band holding every block center
};

struct PoissonForestParams {
  double intensity = 0.01;  // expected disks per square meter
  double min_radius = 1.0;  // meters
  double max_radius = 2.0;
  int max_attempts = 64;  // redraws when a draw yields no obstacle or no free cell
};

WorldMap gen_parallel_lines(GridDims dims, double resolution, uint64_t seed,
                            uint64_t world_index, const ParallelLinesParams& p);
WorldMap gen_distributed_blocks(GridDims dims, double resolution, uint64_t seed,
                                uint64_t world_index, const DistributedBlocksParams& p);
WorldMap gen_poisson_forest(GridDims dims, double resolution, uint64_t seed,
                            uint64_t world_index, const PoissonForestParams& p);

// Uniform rejection sampling of node positions over free space, at most one
// node per cell, headings uniform in [0, 2*pi). The start node is the one
// nearest the grid center (lowest id on ties). Throws
// InsufficientFreeSpaceError when the world cannot host `count` nodes.
NodeSet sample_nodes(const WorldMap& world, int count, uint64_t seed,
                     uint64_t world_index);

struct GeneratorConfig {
  std::string name = "parallel-lines";  // parallel-lines | distributed-blocks | poisson-forest
  GridDims dims{64, 64};
  double resolution = 1.0;
  int node_count = 300;
  ParallelLinesParams lines;
  DistributedBlocksParams blocks;
  PoissonForestParams forest;
};

void validate_generator(const GeneratorConfig& cfg);

// count worlds + nodes from one seeded family.
WorldDataset generate_dataset(const GeneratorConfig& cfg, int count, uint64_t seed,
                              Split split);

}  // namespace scout
