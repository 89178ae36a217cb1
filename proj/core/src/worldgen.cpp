#include "scout/worldgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "scout/errors.hpp"
#include "scout/rng.hpp"
#include "scout/sensor.hpp"

namespace scout {

namespace {

// Stream lanes: one child stream per (lane, world index) so terrain and node
// draws never interleave and any index subsequence regenerates identically.
constexpr uint64_t kTerrainLane = 0;
constexpr uint64_t kNodeLane = 1;

void stamp(std::vector<uint8_t>& cells, GridDims dims, int x, int y, int thickness) {
  int lo = -(thickness - 1) / 2;
  int hi = thickness / 2;
  for (int dy = lo; dy <= hi; ++dy) {
    for (int dx = lo; dx <= hi; ++dx) {
      int px = x + dx;
      int py = y + dy;
      if (dims.contains(px, py)) cells[static_cast<size_t>(dims.index(px, py))] = 1;
    }
  }
}

// Integer Bresenham walk between two cells, stamping `thickness` squares.
void raster_segment(std::vector<uint8_t>& cells, GridDims dims, int x0, int y0,
                    int x1, int y1, int thickness) {
  int dx = std::abs(x1 - x0);
  int dy = -std::abs(y1 - y0);
  int sx = x0 < x1 ? 1 : -1;
  int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    stamp(cells, dims, x0, y0, thickness);
    if (x0 == x1 && y0 == y1) break;
    int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

// True when any cell of `b` touches a cell of `a` (8-connectivity).
bool touches(const std::vector<std::pair<int, int>>& a,
             const std::vector<std::pair<int, int>>& b) {
  for (auto [bx, by] : b) {
    for (auto [ax, ay] : a) {
      if (std::abs(ax - bx) <= 1 && std::abs(ay - by) <= 1) return true;
    }
  }
  return false;
}

std::vector<std::pair<int, int>> occupied_cells(const std::vector<uint8_t>& cells,
                                                GridDims dims) {
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y < dims.height; ++y) {
    for (int x = 0; x < dims.width; ++x) {
      if (cells[static_cast<size_t>(dims.index(x, y))]) out.emplace_back(x, y);
    }
  }
  return out;
}

}  // namespace

WorldMap gen_parallel_lines(GridDims dims, double resolution, uint64_t seed,
                            uint64_t world_index, const ParallelLinesParams& p) {
  if (dims.width < 32 || dims.height < 32) {
    throw ConfigError("parallel-lines needs a grid of at least 32x32 cells");
  }
  Pcg32 rng = child_rng(seed, {kTerrainLane, world_index});
  double world_w = dims.width * resolution;
  double world_h = dims.height * resolution;
  double margin = resolution;  // keep the pair clear of the border

  for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
    double length = rng.uniform(p.min_length, p.max_length);
    double sep = rng.uniform(p.min_separation, p.max_separation);
    double theta = rng.uniform(0.0, kTwoPi / 2.0);
    double dx = std::cos(theta);
    double dy = std::sin(theta);

    // Half extents of the pair's bounding box at this angle.
    double ax = length / 2.0 * std::abs(dx) + sep / 2.0 * std::abs(dy) + margin;
    double ay = length / 2.0 * std::abs(dy) + sep / 2.0 * std::abs(dx) + margin;
    if (2.0 * ax >= world_w || 2.0 * ay >= world_h) continue;

    double cx = rng.uniform(ax, world_w - ax);
    double cy = rng.uniform(ay, world_h - ay);
    double nx = -dy;
    double ny = dx;

    std::vector<std::vector<std::pair<int, int>>> lines;
    std::vector<uint8_t> cells(static_cast<size_t>(dims.cell_count()), 0);
    for (int side = -1; side <= 1; side += 2) {
      double lx = cx + side * sep / 2.0 * nx;
      double ly = cy + side * sep / 2.0 * ny;
      auto cell_of = [&](double wx, double wy) {
        return std::pair<int, int>(static_cast<int>(std::floor(wx / resolution)),
                                   static_cast<int>(std::floor(wy / resolution)));
      };
      auto [x0, y0] = cell_of(lx - length / 2.0 * dx, ly - length / 2.0 * dy);
      auto [x1, y1] = cell_of(lx + length / 2.0 * dx, ly + length / 2.0 * dy);
      std::vector<uint8_t> one(static_cast<size_t>(dims.cell_count()), 0);
      raster_segment(one, dims, x0, y0, x1, y1, p.thickness);
      lines.push_back(occupied_cells(one, dims));
      for (size_t i = 0; i < cells.size(); ++i) cells[i] |= one[i];
    }
    if (touches(lines[0], lines[1])) continue;  // rasterized walls merged
    return make_world(dims.width, dims.height, resolution, std::move(cells));
  }
  throw ConfigError("parallel-lines placement failed; grid too small for the parameters");
}

WorldMap gen_distributed_blocks(GridDims dims, double resolution, uint64_t seed,
                                uint64_t world_index, const DistributedBlocksParams& p) {
  // Block centers live in the outer margin band; the interior box stays
  // center-free (though large blocks may overhang into it).
  int lo_x = static_cast<int>(std::lround(p.margin_fraction * dims.width));
  int hi_x = dims.width - 1 - lo_x;
  int lo_y = static_cast<int>(std::lround(p.margin_fraction * dims.height));
  int hi_y = dims.height - 1 - lo_y;
  if (lo_x < 1 || lo_y < 1 || lo_x > hi_x || lo_y > hi_y) {
    throw ConfigError("distributed-blocks margin band is degenerate");
  }

  Pcg32 rng = child_rng(seed, {kTerrainLane, world_index});
  std::vector<uint8_t> cells(static_cast<size_t>(dims.cell_count()), 0);
  int blocks = rng.uniform_int(p.min_blocks, p.max_blocks);
  for (int b = 0; b < blocks; ++b) {
    int cx;
    int cy;
    do {
      cx = rng.uniform_int(0, dims.width - 1);
      cy = rng.uniform_int(0, dims.height - 1);
    } while (cx >= lo_x && cx <= hi_x && cy >= lo_y && cy <= hi_y);
    int hx = rng.uniform_int(p.min_half_extent, p.max_half_extent);
    int hy = rng.uniform_int(p.min_half_extent, p.max_half_extent);
    for (int y = std::max(0, cy - hy); y <= std::min(dims.height - 1, cy + hy); ++y) {
      for (int x = std::max(0, cx - hx); x <= std::min(dims.width - 1, cx + hx); ++x) {
        cells[static_cast<size_t>(dims.index(x, y))] = 1;
      }
    }
  }
  return make_world(dims.width, dims.height, resolution, std::move(cells));
}

WorldMap gen_poisson_forest(GridDims dims, double resolution, uint64_t seed,
                            uint64_t world_index, const PoissonForestParams& p) {
  Pcg32 rng = child_rng(seed, {kTerrainLane, world_index});
  double world_w = dims.width * resolution;
  double world_h = dims.height * resolution;

  for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
    int disks = rng.poisson(p.intensity * world_w * world_h);
    if (disks == 0) continue;
    std::vector<uint8_t> cells(static_cast<size_t>(dims.cell_count()), 0);
    for (int d = 0; d < disks; ++d) {
      double cx = rng.uniform(0.0, world_w);
      double cy = rng.uniform(0.0, world_h);
      double r = rng.uniform(p.min_radius, p.max_radius);
      int x_lo = std::max(0, static_cast<int>(std::floor((cx - r) / resolution)));
      int x_hi = std::min(dims.width - 1, static_cast<int>(std::floor((cx + r) / resolution)));
      int y_lo = std::max(0, static_cast<int>(std::floor((cy - r) / resolution)));
      int y_hi = std::min(dims.height - 1, static_cast<int>(std::floor((cy + r) / resolution)));
      for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
          double px = (static_cast<double>(x) + 0.5) * resolution - cx;
          double py = (static_cast<double>(y) + 0.5) * resolution - cy;
          if (px * px + py * py <= r * r) {
            cells[static_cast<size_t>(dims.index(x, y))] = 1;
          }
        }
      }
    }
    bool any_free = std::any_of(cells.begin(), cells.end(),
                                [](uint8_t c) { return c == 0; });
    if (!any_free) continue;
    return make_world(dims.width, dims.height, resolution, std::move(cells));
  }
  throw ConfigError("poisson-forest kept drawing empty or fully blocked worlds");
}

NodeSet sample_nodes(const WorldMap& world, int count, uint64_t seed,
                     uint64_t world_index) {
  if (count < 1) throw ConfigError("node count must be >= 1");
  if (world.free_cell_count() < count) {
    throw InsufficientFreeSpaceError("world has fewer free cells than requested nodes");
  }

  Pcg32 rng = child_rng(seed, {kNodeLane, world_index});
  GridDims dims = world.dims();
  CellSet taken(dims.cell_count());
  NodeSet out;
  out.nodes.reserve(static_cast<size_t>(count));

  long budget = 1000L * count;
  while (out.size() < count && budget > 0) {
    --budget;
    double x = rng.uniform(0.0, dims.width * world.resolution);
    double y = rng.uniform(0.0, dims.height * world.resolution);
    int cx = static_cast<int>(std::floor(x / world.resolution));
    int cy = static_cast<int>(std::floor(y / world.resolution));
    if (!dims.contains(cx, cy) || world.occupied(cx, cy)) continue;
    if (!taken.insert_new(dims.index(cx, cy))) continue;
    out.nodes.push_back({out.size(), x, y, rng.uniform(0.0, kTwoPi)});
  }
  // Rejection can stall when free space is nearly full; finish by walking
  // the free untaken cells in index order and using their centers.
  if (out.size() < count) {
    for (int i = 0; i < dims.cell_count() && out.size() < count; ++i) {
      if (world.occupied_index(i) || taken.contains(i)) continue;
      taken.insert(i);
      double x = (static_cast<double>(i % dims.width) + 0.5) * world.resolution;
      double y = (static_cast<double>(i / dims.width) + 0.5) * world.resolution;
      out.nodes.push_back({out.size(), x, y, rng.uniform(0.0, kTwoPi)});
    }
  }

  double mid_x = dims.width * world.resolution / 2.0;
  double mid_y = dims.height * world.resolution / 2.0;
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const Node& n : out.nodes) {
    double d2 = (n.x - mid_x) * (n.x - mid_x) + (n.y - mid_y) * (n.y - mid_y);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = n.id;
    }
  }
  out.start_id = best;
  validate_nodes(out, world);
  return out;
}

void validate_generator(const GeneratorConfig& cfg) {
  if (cfg.name != "parallel-lines" && cfg.name != "distributed-blocks" &&
      cfg.name != "poisson-forest") {
    throw ConfigError("unknown generator: " + cfg.name);
  }
  if (cfg.dims.width < 8 || cfg.dims.height < 8) {
    throw ConfigError("generator grids must be at least 8x8");
  }
  if (!(cfg.resolution > 0.0)) throw ConfigError("resolution must be positive");
  if (cfg.node_count < 1) throw ConfigError("node count must be >= 1");
  const ParallelLinesParams& l = cfg.lines;
  if (!(l.min_length > 0.0) || l.min_length > l.max_length ||
      !(l.min_separation > 0.0) || l.min_separation > l.max_separation ||
      l.thickness < 1 || l.max_attempts < 1) {
    throw ConfigError("invalid parallel-lines parameters");
  }
  const DistributedBlocksParams& b = cfg.blocks;
  if (b.min_blocks < 1 || b.min_blocks > b.max_blocks || b.min_half_extent < 1 ||
      b.min_half_extent > b.max_half_extent || b.margin_fraction < 0.0 ||
      b.margin_fraction >= 0.5) {
    throw ConfigError("invalid distributed-blocks parameters");
  }
  const PoissonForestParams& f = cfg.forest;
  if (!(f.intensity > 0.0) || !(f.min_radius > 0.0) || f.min_radius > f.max_radius ||
      f.max_attempts < 1) {
    throw ConfigError("invalid poisson-forest parameters");
  }
}

WorldDataset generate_dataset(const GeneratorConfig& cfg, int count, uint64_t seed,
                              Split split) {
  validate_generator(cfg);
  if (count < 1) throw ConfigError("dataset count must be >= 1");
  WorldDataset ds;
  ds.generator_name = cfg.name;
  ds.seed = seed;
  ds.split = split;
  ds.entries.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    uint64_t idx = static_cast<uint64_t>(i);
    WorldMap w;
    if (cfg.name == "parallel-lines") {
      w = gen_parallel_lines(cfg.dims, cfg.resolution, seed, idx, cfg.lines);
    } else if (cfg.name == "distributed-blocks") {
      w = gen_distributed_blocks(cfg.dims, cfg.resolution, seed, idx, cfg.blocks);
    } else {
      w = gen_poisson_forest(cfg.dims, cfg.resolution, seed, idx, cfg.forest);
    }
    NodeSet nodes = sample_nodes(w, cfg.node_count, seed, idx);
    ds.entries.push_back({std::move(w), std::move(nodes)});
  }
  return ds;
}

}  // namespace scout
