#include "fixtures.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "scout/errors.hpp"

namespace scout::testing {

WorldMap world_from_ascii(const std::vector<std::string>& rows,
                          double resolution) {
  if (rows.empty()) throw std::invalid_argument("ascii world needs rows");
  int height = static_cast<int>(rows.size());
  int width = static_cast<int>(rows[0].size());
  std::vector<uint8_t> cells(static_cast<size_t>(width) * height, 0);
  for (int y = 0; y < height; ++y) {
    if (static_cast<int>(rows[y].size()) != width) {
      throw std::invalid_argument("ascii world rows differ in length");
    }
    for (int x = 0; x < width; ++x) {
      if (rows[y][static_cast<size_t>(x)] == '#') {
        cells[static_cast<size_t>(y) * width + x] = 1;
      }
    }
  }
  return make_world(width, height, resolution, std::move(cells));
}

int count_components(const WorldMap& world, bool eight_connected) {
  std::vector<uint8_t> seen(world.cells.size(), 0);
  int components = 0;
  for (int start = 0; start < static_cast<int>(world.cells.size()); ++start) {
    if (!world.occupied_index(start) || seen[static_cast<size_t>(start)]) {
      continue;
    }
    ++components;
    std::queue<int> frontier;
    frontier.push(start);
    seen[static_cast<size_t>(start)] = 1;
    while (!frontier.empty()) {
      int cell = frontier.front();
      frontier.pop();
      int cx = cell % world.width;
      int cy = cell / world.width;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!eight_connected && dx != 0 && dy != 0) continue;
          int nx = cx + dx;
          int ny = cy + dy;
          if (!world.in_bounds(nx, ny) || !world.occupied(nx, ny)) continue;
          int ni = ny * world.width + nx;
          if (seen[static_cast<size_t>(ni)]) continue;
          seen[static_cast<size_t>(ni)] = 1;
          frontier.push(ni);
        }
      }
    }
  }
  return components;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TempDir::TempDir() {
  static std::atomic<uint64_t> counter{0};
  uint64_t id = counter.fetch_add(1);
  path = std::filesystem::temp_directory_path() /
         ("scout-test-" + std::to_string(::getpid()) + "-" + std::to_string(id));
  std::filesystem::create_directories(path);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path, ec);
}

ProcessResult run_process(const std::string& command,
                          const std::filesystem::path& cwd) {
  ProcessResult r;
  std::filesystem::path out_file = cwd / ".proc-out";
  std::filesystem::path err_file = cwd / ".proc-err";
  std::string full = "cd '" + cwd.string() + "' && " + command + " > '" +
                     out_file.string() + "' 2> '" + err_file.string() + "'";
  int rc = std::system(full.c_str());
  if (rc == -1) {
    r.exit_code = -1;
  } else if (WIFEXITED(rc)) {
    r.exit_code = WEXITSTATUS(rc);
  } else {
    r.exit_code = 128;
  }
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  std::filesystem::remove(out_file);
  std::filesystem::remove(err_file);
  return r;
}

}  // namespace scout::testing
