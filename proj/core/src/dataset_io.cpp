#include "scout/dataset_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scout/errors.hpp"
#include "scout/version.hpp"

namespace scout {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr char kMagic[8] = {'S', 'C', 'O', 'U', 'T', 'W', 'D', 'B'};

std::vector<int32_t> delta_encode(const std::vector<int32_t>& sorted) {
  std::vector<int32_t> out;
  out.reserve(sorted.size());
  int32_t prev = 0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    out.push_back(i == 0 ? sorted[i] : sorted[i] - prev);
    prev = sorted[i];
  }
  return out;
}

std::vector<int32_t> delta_decode(const std::vector<int32_t>& deltas, int cell_count) {
  std::vector<int32_t> out;
  out.reserve(deltas.size());
  int64_t cur = 0;
  for (size_t i = 0; i < deltas.size(); ++i) {
    if (i == 0 ? deltas[i] < 0 : deltas[i] < 1) {
      throw FormatError("occupied cell deltas must be sorted and distinct");
    }
    cur += deltas[i];
    if (cur >= cell_count) throw FormatError("occupied cell index out of range");
    out.push_back(static_cast<int32_t>(cur));
  }
  return out;
}

std::vector<int32_t> occupied_indices(const WorldMap& w) {
  std::vector<int32_t> out;
  for (int i = 0; i < w.width * w.height; ++i) {
    if (w.occupied_index(i)) out.push_back(i);
  }
  return out;
}

WorldMap world_from_parts(int width, int height, double resolution,
                          const std::vector<int32_t>& occupied) {
  if (width < 1 || height < 1 ||
      static_cast<int64_t>(width) * height > (1LL << 26)) {
    throw FormatError("world dimensions out of range");
  }
  std::vector<uint8_t> cells(static_cast<size_t>(width) * static_cast<size_t>(height), 0);
  for (int32_t i : occupied) cells[static_cast<size_t>(i)] = 1;
  try {
    return make_world(width, height, resolution, std::move(cells));
  } catch (const ConfigError& e) {
    throw FormatError(std::string("world record failed validation: ") + e.what());
  }
}

NodeSet nodes_from_parts(std::vector<Node> nodes, int start_id, const WorldMap& world) {
  NodeSet ns;
  ns.nodes = std::move(nodes);
  ns.start_id = start_id;
  try {
    validate_nodes(ns, world);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("node record failed validation: ") + e.what());
  }
  return ns;
}

void check_version(int major, int minor) {
  if (major != kWorldFormatMajor || minor > kWorldFormatMinor) {
    throw FormatError("unsupported world dataset format version " +
                      std::to_string(major) + "." + std::to_string(minor));
  }
}

// --- JSON encoding ---

ordered_json header_json(const WorldDataset& ds) {
  ordered_json h;
  h["format"] = "scout-worlds";
  h["format_version"] = {{"major", kWorldFormatMajor}, {"minor", kWorldFormatMinor}};
  h["generator_name"] = ds.generator_name;
  h["seed"] = ds.seed;
  h["split"] = to_string(ds.split);
  h["count"] = ds.size();
  return h;
}

void save_json(const WorldDataset& ds, const std::string& path) {
  ordered_json j = header_json(ds);
  ordered_json worlds = ordered_json::array();
  for (const WorldEntry& e : ds.entries) {
    ordered_json w;
    w["width"] = e.world.width;
    w["height"] = e.world.height;
    w["resolution"] = e.world.resolution;
    w["occupied_delta"] = delta_encode(occupied_indices(e.world));
    ordered_json nodes = ordered_json::array();
    for (const Node& n : e.nodes.nodes) {
      nodes.push_back({{"id", n.id}, {"x", n.x}, {"y", n.y}, {"heading", n.heading}});
    }
    w["nodes"] = std::move(nodes);
    w["start_id"] = e.nodes.start_id;
    worlds.push_back(std::move(w));
  }
  j["worlds"] = std::move(worlds);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open dataset file for writing: " + path);
  out << j.dump(1) << '\n';
  if (!out) throw IoError("failed writing dataset file: " + path);
}

WorldDataset load_json(const std::string& text, const std::string& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw FormatError("dataset file " + path + " is not valid JSON: " + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "scout-worlds") {
      throw FormatError("not a world dataset file");
    }
    const auto& v = j.at("format_version");
    check_version(v.at("major").get<int>(), v.at("minor").get<int>());

    WorldDataset ds;
    ds.generator_name = j.at("generator_name").get<std::string>();
    ds.seed = j.at("seed").get<uint64_t>();
    ds.split = split_from_string(j.at("split").get<std::string>());
    int count = j.at("count").get<int>();
    const auto& worlds = j.at("worlds");
    if (static_cast<int>(worlds.size()) != count) {
      throw FormatError("dataset count does not match world records");
    }
    for (const auto& w : worlds) {
      WorldMap world = world_from_parts(
          w.at("width").get<int>(), w.at("height").get<int>(),
          w.at("resolution").get<double>(),
          delta_decode(w.at("occupied_delta").get<std::vector<int32_t>>(),
                       w.at("width").get<int>() * w.at("height").get<int>()));
      std::vector<Node> nodes;
      for (const auto& n : w.at("nodes")) {
        nodes.push_back({n.at("id").get<int>(), n.at("x").get<double>(),
                         n.at("y").get<double>(), n.at("heading").get<double>()});
      }
      NodeSet ns = nodes_from_parts(std::move(nodes), w.at("start_id").get<int>(), world);
      ds.entries.push_back({std::move(world), std::move(ns)});
    }
    return ds;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError("dataset file " + path + " failed validation: " + e.what());
  }
}

// --- binary encoding ---

void put_u32(std::string& buf, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  buf.append(b, 4);
}

void put_f64(std::string& buf, double v) {
  uint64_t bits = std::bit_cast<uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  buf.append(b, 8);
}

struct Cursor {
  const std::string& buf;
  size_t off = 0;

  void need(size_t k) const {
    if (off + k > buf.size()) throw FormatError("dataset file is truncated");
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<uint8_t>(buf[off + static_cast<size_t>(i)])) << (8 * i);
    }
    off += 4;
    return v;
  }
  double f64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(static_cast<uint8_t>(buf[off + static_cast<size_t>(i)])) << (8 * i);
    }
    off += 8;
    return std::bit_cast<double>(v);
  }
  std::string bytes(size_t k) {
    need(k);
    std::string s = buf.substr(off, k);
    off += k;
    return s;
  }
};

void save_binary(const WorldDataset& ds, const std::string& path) {
  std::string buf;
  buf.append(kMagic, sizeof(kMagic));
  std::string header = header_json(ds).dump();
  put_u32(buf, static_cast<uint32_t>(header.size()));
  buf += header;

  for (const WorldEntry& e : ds.entries) {
    put_u32(buf, static_cast<uint32_t>(e.world.width));
    put_u32(buf, static_cast<uint32_t>(e.world.height));
    put_f64(buf, e.world.resolution);
    std::vector<int32_t> deltas = delta_encode(occupied_indices(e.world));
    put_u32(buf, static_cast<uint32_t>(deltas.size()));
    for (int32_t d : deltas) put_u32(buf, static_cast<uint32_t>(d));
    put_u32(buf, static_cast<uint32_t>(e.nodes.size()));
    for (const Node& n : e.nodes.nodes) {
      put_u32(buf, static_cast<uint32_t>(n.id));
      put_f64(buf, n.x);
      put_f64(buf, n.y);
      put_f64(buf, n.heading);
    }
    put_u32(buf, static_cast<uint32_t>(e.nodes.start_id));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open dataset file for writing: " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing dataset file: " + path);
}

WorldDataset load_binary(const std::string& text, const std::string& path) {
  Cursor cur{text, sizeof(kMagic)};
  uint32_t header_len = cur.u32();
  std::string header_text = cur.bytes(header_len);
  ordered_json h;
  try {
    h = ordered_json::parse(header_text);
  } catch (const std::exception& e) {
    throw FormatError("dataset header is not valid JSON: " + std::string(e.what()));
  }

  try {
    if (h.at("format").get<std::string>() != "scout-worlds") {
      throw FormatError("not a world dataset file");
    }
    const auto& v = h.at("format_version");
    check_version(v.at("major").get<int>(), v.at("minor").get<int>());

    WorldDataset ds;
    ds.generator_name = h.at("generator_name").get<std::string>();
    ds.seed = h.at("seed").get<uint64_t>();
    ds.split = split_from_string(h.at("split").get<std::string>());
    int count = h.at("count").get<int>();
    if (count < 0) throw FormatError("negative world count");

    for (int i = 0; i < count; ++i) {
      int width = static_cast<int>(cur.u32());
      int height = static_cast<int>(cur.u32());
      double resolution = cur.f64();
      uint32_t n_occ = cur.u32();
      std::vector<int32_t> deltas;
      deltas.reserve(n_occ);
      for (uint32_t k = 0; k < n_occ; ++k) deltas.push_back(static_cast<int32_t>(cur.u32()));
      WorldMap world = world_from_parts(width, height, resolution,
                                        delta_decode(deltas, width * height));
      uint32_t n_nodes = cur.u32();
      std::vector<Node> nodes;
      nodes.reserve(n_nodes);
      for (uint32_t k = 0; k < n_nodes; ++k) {
        Node n;
        n.id = static_cast<int>(cur.u32());
        n.x = cur.f64();
        n.y = cur.f64();
        n.heading = cur.f64();
        nodes.push_back(n);
      }
      int start_id = static_cast<int>(cur.u32());
      NodeSet ns = nodes_from_parts(std::move(nodes), start_id, world);
      ds.entries.push_back({std::move(world), std::move(ns)});
    }
    if (cur.off != text.size()) throw FormatError("trailing bytes after last world record");
    return ds;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError("dataset file " + path + " failed validation: " + e.what());
  }
}

}  // namespace

void save_dataset(const WorldDataset& ds, const std::string& path,
                  DatasetEncoding encoding) {
  if (encoding == DatasetEncoding::Json) {
    save_json(ds, path);
  } else {
    save_binary(ds, path);
  }
}

WorldDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();

  if (text.size() >= sizeof(kMagic) && std::memcmp(text.data(), kMagic, sizeof(kMagic)) == 0) {
    return load_binary(text, path);
  }
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return load_json(text, path);
  }
  throw FormatError("unrecognized dataset file: " + path);
}

}  // namespace scout
