#include "scout/sensor.hpp"

#include <cmath>

#include "scout/errors.hpp"

namespace scout {

void validate_sensor(const SensorConfig& s) {
  if (s.num_rays < 1) throw ConfigError("sensor num_rays must be >= 1");
  if (!(s.fov > 0.0) || s.fov > kTwoPi + 1e-12) {
    throw ConfigError("sensor fov must be in (0, 2*pi]");
  }
  if (!(s.max_range > 0.0) || !std::isfinite(s.max_range)) {
    throw ConfigError("sensor max_range must be positive and finite");
  }
}

std::vector<double> ray_directions(const Node& node, const SensorConfig& s) {
  std::vector<double> dirs(static_cast<size_t>(s.num_rays));
  double start = node.heading - s.fov / 2.0;
  for (int i = 0; i < s.num_rays; ++i) {
    dirs[static_cast<size_t>(i)] =
        start + s.fov * (static_cast<double>(i) + 0.5) / s.num_rays;
  }
  return dirs;
}

Measurement raycast(const WorldMap& world, const Node& node, const SensorConfig& s) {
  validate_sensor(s);
  int cx = static_cast<int>(std::floor(node.x / world.resolution));
  int cy = static_cast<int>(std::floor(node.y / world.resolution));
  if (!world.in_bounds(cx, cy) || world.occupied(cx, cy)) {
    throw NodeInsideObstacleError("sensor origin is not on a free in-bounds cell");
  }

  Measurement m;
  m.node_id = node.id;
  m.hit_cells = CellSet(world.width * world.height);
  m.free_cells = CellSet(world.width * world.height);
  m.ranges.assign(static_cast<size_t>(s.num_rays), s.max_range);
  int origin_idx = cy * world.width + cx;
  if (s.count_origin_cell) m.free_cells.insert(origin_idx);

  std::vector<double> dirs = ray_directions(node, s);
  for (int i = 0; i < s.num_rays; ++i) {
    traverse_cells(world.dims(), world.resolution, node.x, node.y,
                   dirs[static_cast<size_t>(i)], s.max_range,
                   [&](int cell, double t_entry) {
                     if (world.occupied_index(cell)) {
                       m.hit_cells.insert(cell);
                       m.ranges[static_cast<size_t>(i)] = t_entry;
                       return false;
                     }
                     if (cell != origin_idx || s.count_origin_cell) {
                       m.free_cells.insert(cell);
                     }
                     return true;
                   });
  }
  return m;
}

CellSet visible_surface(const WorldMap& world, const Node& node,
                        const SensorConfig& s) {
  return std::move(raycast(world, node, s).hit_cells);
}

}  // namespace scout
