#include "scout/world.hpp"

#include <cmath>

#include "scout/errors.hpp"

namespace scout {

int WorldMap::free_cell_count() const {
  int n = 0;
  for (uint8_t c : cells) n += (c == 0);
  return n;
}

CellSet compute_surface(int width, int height, const std::vector<uint8_t>& cells) {
  CellSet surface(width * height);
  auto at = [&](int x, int y) { return cells[static_cast<size_t>(y) * width + x]; };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!at(x, y)) continue;
      bool exposed = (x > 0 && !at(x - 1, y)) || (x + 1 < width && !at(x + 1, y)) ||
                     (y > 0 && !at(x, y - 1)) || (y + 1 < height && !at(x, y + 1));
      if (exposed) surface.insert(y * width + x);
    }
  }
  return surface;
}

WorldMap make_world(int width, int height, double resolution,
                    std::vector<uint8_t> cells) {
  if (width < 1 || height < 1) throw ConfigError("world dimensions must be positive");
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw ConfigError("world resolution must be positive and finite");
  }
  if (cells.size() != static_cast<size_t>(width) * static_cast<size_t>(height)) {
    throw ConfigError("world cell buffer does not match dimensions");
  }
  for (uint8_t c : cells) {
    if (c > 1) throw ConfigError("world cells must be 0 or 1");
  }
  WorldMap w;
  w.width = width;
  w.height = height;
  w.resolution = resolution;
  w.cells = std::move(cells);
  if (w.free_cell_count() == 0) throw ConfigError("world has no free cells");
  w.surface = compute_surface(width, height, w.cells);
  return w;
}

const Node& NodeSet::at(int id) const {
  if (id < 0 || id >= size()) throw UnknownIdError("unknown node id " + std::to_string(id));
  return nodes[static_cast<size_t>(id)];
}

double node_distance(const NodeSet& nodes, int a, int b) {
  const Node& na = nodes.at(a);
  const Node& nb = nodes.at(b);
  return std::hypot(nb.x - na.x, nb.y - na.y);
}

void validate_nodes(const NodeSet& nodes, const WorldMap& world) {
  if (nodes.nodes.empty()) throw ConfigError("node set is empty");
  CellSet taken(world.width * world.height);
  for (int i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes.nodes[static_cast<size_t>(i)];
    if (n.id != i) throw ConfigError("node ids must be dense 0..n-1");
    int cx = static_cast<int>(std::floor(n.x / world.resolution));
    int cy = static_cast<int>(std::floor(n.y / world.resolution));
    if (!world.in_bounds(cx, cy)) throw ConfigError("node lies outside the grid");
    if (world.occupied(cx, cy)) throw ConfigError("node lies inside an obstacle");
    if (!taken.insert_new(cy * world.width + cx)) {
      throw ConfigError("two nodes share a grid cell");
    }
  }
  if (nodes.start_id < 0 || nodes.start_id >= nodes.size()) {
    throw ConfigError("start_id is not a valid node id");
  }
}

std::string to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Test: return "test";
    case Split::Validation: return "validation";
  }
  throw ConfigError("invalid split value");
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  if (s == "validation") return Split::Validation;
  throw ConfigError("unknown split name: " + s);
}

}  // namespace scout
