#pragma once

// Shared helpers for the test binaries: ascii micro-worlds, component
// counting, process spawning, and self-cleaning temp directories.

#include <filesystem>
#include <string>
#include <vector>

#include "scout/world.hpp"

namespace scout::testing {

// rows[y] is grid row y; '#' marks an occupied cell, anything else is free.
WorldMap world_from_ascii(const std::vector<std::string>& rows,
                          double resolution = 1.0);

// Connected components of the occupied cells (4- or 8-connectivity).
int count_components(const WorldMap& world, bool eight_connected);

std::string slurp(const std::filesystem::path& path);

// Unique directory under the system temp root, removed recursively on
// destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs `command` through the shell with `cwd` as working directory, capturing
// both streams. The command string must already be shell-quoted.
ProcessResult run_process(const std::string& command,
                          const std::filesystem::path& cwd);

}  // namespace scout::testing
