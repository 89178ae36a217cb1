#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "scout/world.hpp"

namespace scout {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct SensorConfig {
  int num_rays = 128;
  double fov = kTwoPi;      // radians, centered on the node heading
  double max_range = 12.0;  // meters
  bool count_origin_cell = true;  // record the sensor's own cell as free

  bool operator==(const SensorConfig&) const = default;
};

void validate_sensor(const SensorConfig& s);

// One panoramic scan from a node. hit/free sets are cell indices; ranges has
// one entry per ray, max_range when the ray exits the grid or hits nothing.
struct Measurement {
  int node_id = -1;
  CellSet hit_cells;
  CellSet free_cells;
  std::vector<double> ranges;

  bool operator==(const Measurement&) const = default;
};

// Ray directions are the angular bin centers of the field of view:
// theta_i = heading - fov/2 + fov * (i + 0.5) / num_rays. A full 2*pi fov
// yields evenly spaced rays with no duplicated direction; num_rays == 1
// with fov 2*pi points along the heading.
std::vector<double> ray_directions(const Node& node, const SensorConfig& s);

// Exact grid traversal (incremental boundary-crossing walk). Visits the cell
// containing the origin first (entry distance 0), then each crossed cell in
// order with its entry distance in meters. A ray through an exact cell
// corner steps diagonally; only cells whose interior the ray crosses are
// visited. Stops when the entry distance reaches `limit`, when the ray
// leaves the grid, or when `visit` returns false. An origin outside the grid
// visits nothing.
template <class Visit>
void traverse_cells(GridDims dims, double resolution, double ox, double oy,
                    double theta, double limit, Visit&& visit) {
  double x0 = ox / resolution;
  double y0 = oy / resolution;
  int cx = static_cast<int>(std::floor(x0));
  int cy = static_cast<int>(std::floor(y0));
  if (!dims.contains(cx, cy)) return;

  double limit_cells = limit / resolution;
  if (!visit(dims.index(cx, cy), 0.0)) return;

  double dx = std::cos(theta);
  double dy = std::sin(theta);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
  double t_delta_x = step_x != 0 ? 1.0 / std::abs(dx) : kInf;
  double t_delta_y = step_y != 0 ? 1.0 / std::abs(dy) : kInf;
  double t_max_x = kInf;
  double t_max_y = kInf;
  if (step_x > 0) t_max_x = (static_cast<double>(cx) + 1.0 - x0) / dx;
  if (step_x < 0) t_max_x = (static_cast<double>(cx) - x0) / dx;
  if (step_y > 0) t_max_y = (static_cast<double>(cy) + 1.0 - y0) / dy;
  if (step_y < 0) t_max_y = (static_cast<double>(cy) - y0) / dy;

  for (;;) {
    double t_entry;
    if (t_max_x < t_max_y) {
      t_entry = t_max_x;
      cx += step_x;
      t_max_x += t_delta_x;
    } else if (t_max_y < t_max_x) {
      t_entry = t_max_y;
      cy += step_y;
      t_max_y += t_delta_y;
    } else {
      if (t_max_x == kInf) return;  // zero direction (defensive)
      t_entry = t_max_x;  // exact corner: step diagonally
      cx += step_x;
      cy += step_y;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    }
    if (t_entry >= limit_cells) return;
    if (!dims.contains(cx, cy)) return;
    if (!visit(dims.index(cx, cy), t_entry * resolution)) return;
  }
}

// Scans the hidden world from a node. Occupied cells block rays and are
// recorded as hits with the exact entry distance; free cells crossed before
// the hit are recorded as free. Throws NodeInsideObstacleError when the node
// sits on an occupied or out-of-bounds cell.
Measurement raycast(const WorldMap& world, const Node& node, const SensorConfig& s);

// Surface visible from a node: the hit cells of a scan.
CellSet visible_surface(const WorldMap& world, const Node& node,
                        const SensorConfig& s);

}  // namespace scout
