#pragma once

#include <string>

#include "scout/world.hpp"

namespace scout {

// World dataset files come in two interchangeable encodings sharing one
// logical schema (see docs/file_formats.md): a JSON document and a packed
// little-endian binary stream behind the magic "SCOUTWDB". Occupied cells
// are stored sorted and delta-encoded in both. Loading auto-detects the
// encoding, enforces the format version (same major, minor not newer) and
// revalidates every world and node set.
enum class DatasetEncoding { Json, Binary };

void save_dataset(const WorldDataset& ds, const std::string& path,
                  DatasetEncoding encoding);
WorldDataset load_dataset(const std::string& path);

}  // namespace scout
