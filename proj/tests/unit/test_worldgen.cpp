#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "scout/errors.hpp"
#include "scout/rng.hpp"
#include "scout/sensor.hpp"
#include "scout/worldgen.hpp"

using namespace scout;
using scout::testing::count_components;

TEST_SUITE("worldgen") {

TEST_CASE("parallel lines produce exactly two separated strokes") {
  ParallelLinesParams p;
  for (uint64_t wi = 0; wi < 40; ++wi) {
    WorldMap w = gen_parallel_lines({64, 64}, 1.0, 91, wi, p);
    CHECK(w.free_cell_count() > 0);
    CHECK(w.surface.count() > 0);
    // Two strokes that never touch under 8-connectivity.
    CHECK(count_components(w, true) == 2);
    // A Bresenham stroke of length >= 24 m covers at least 16 cells.
    int total = static_cast<int>(w.cells.size()) - w.free_cell_count();
    CHECK(total >= 32);
  }
}

TEST_CASE("parallel lines reject grids too small for the segments") {
  ParallelLinesParams p;
  p.min_length = 16.0;
  p.max_length = 16.0;
  CHECK_THROWS_AS(gen_parallel_lines({8, 8}, 1.0, 1, 0, p), ConfigError);
}

TEST_CASE("distributed blocks keep every center in the outer band") {
  DistributedBlocksParams p;
  const int W = 64;
  const int H = 64;
  // Band edge: round(margin * dim); centers never fall strictly inside, so
  // no occupied cell can lie deeper than the largest half extent.
  const int lo = 16;
  const int hi = 47;
  for (uint64_t wi = 0; wi < 40; ++wi) {
    WorldMap w = gen_distributed_blocks({W, H}, 1.0, 17, wi, p);
    int occupied = 0;
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        if (!w.occupied(x, y)) continue;
        ++occupied;
        bool deep_x = x >= lo + p.max_half_extent && x <= hi - p.max_half_extent;
        bool deep_y = y >= lo + p.max_half_extent && y <= hi - p.max_half_extent;
        CHECK(!(deep_x && deep_y));
      }
    }
    // At least one block of minimal extent survives: (2*2+1)^2 cells.
    CHECK(occupied >= 25);
    CHECK(count_components(w, true) <= p.max_blocks);
  }
}

TEST_CASE("distributed blocks reject degenerate margin bands") {
  DistributedBlocksParams p;
  p.margin_fraction = 0.01;  // rounds to an empty band on 16x16
  CHECK_THROWS_AS(gen_distributed_blocks({16, 16}, 1.0, 1, 0, p), ConfigError);
  p.margin_fraction = 0.5;  // band swallows the whole grid, box inverts
  CHECK_THROWS_AS(gen_distributed_blocks({16, 16}, 1.0, 1, 0, p), ConfigError);
}

TEST_CASE("poisson forest matches an independent simulation of the process") {
  // The disk count is not observable from the raster (disks merge), so
  // compare mean occupied-cell counts against a from-scratch simulation of
  // the same generative recipe: K ~ Poisson(intensity * area) redrawn while
  // zero, K disk centers and radii uniform, cells whose centers fall inside
  // a disk become occupied.
  PoissonForestParams p;
  const int W = 64;
  const int H = 64;
  const double mean_disks = p.intensity * W * H;

  const int n_gen = 300;
  double gen_sum = 0.0;
  double gen_sumsq = 0.0;
  for (int wi = 0; wi < n_gen; ++wi) {
    WorldMap w = gen_poisson_forest({W, H}, 1.0, 23, static_cast<uint64_t>(wi), p);
    double occ = static_cast<double>(w.cells.size()) - w.free_cell_count();
    CHECK(occ > 0);
    CHECK(w.free_cell_count() > 0);
    gen_sum += occ;
    gen_sumsq += occ * occ;
  }

  const int n_sim = 3000;
  Pcg32 sim_rng(777, 99);
  double sim_sum = 0.0;
  double sim_sumsq = 0.0;
  for (int t = 0; t < n_sim; ++t) {
    int disks = 0;
    do {
      disks = sim_rng.poisson(mean_disks);
    } while (disks == 0);
    std::vector<uint8_t> cells(static_cast<size_t>(W) * H, 0);
    for (int d = 0; d < disks; ++d) {
      double cx = sim_rng.uniform(0.0, W);
      double cy = sim_rng.uniform(0.0, H);
      double r = sim_rng.uniform(p.min_radius, p.max_radius);
      int x0 = std::max(0, static_cast<int>(std::floor(cx - r - 1)));
      int x1 = std::min(W - 1, static_cast<int>(std::ceil(cx + r + 1)));
      int y0 = std::max(0, static_cast<int>(std::floor(cy - r - 1)));
      int y1 = std::min(H - 1, static_cast<int>(std::ceil(cy + r + 1)));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          double dx = x + 0.5 - cx;
          double dy = y + 0.5 - cy;
          if (dx * dx + dy * dy <= r * r) {
            cells[static_cast<size_t>(y) * W + x] = 1;
          }
        }
      }
    }
    double occ = 0;
    for (uint8_t c : cells) occ += c;
    sim_sum += occ;
    sim_sumsq += occ * occ;
  }

  double gen_mean = gen_sum / n_gen;
  double sim_mean = sim_sum / n_sim;
  double gen_var = gen_sumsq / n_gen - gen_mean * gen_mean;
  double sim_var = sim_sumsq / n_sim - sim_mean * sim_mean;
  double se = std::sqrt(gen_var / n_gen + sim_var / n_sim);
  CHECK(std::abs(gen_mean - sim_mean) < 4.0 * se);
}

TEST_CASE("generators are deterministic in seed and world index") {
  ParallelLinesParams lp;
  WorldMap a = gen_parallel_lines({64, 64}, 1.0, 5, 3, lp);
  WorldMap b = gen_parallel_lines({64, 64}, 1.0, 5, 3, lp);
  CHECK(a == b);
  WorldMap c = gen_parallel_lines({64, 64}, 1.0, 5, 4, lp);
  CHECK(!(a == c));
  WorldMap d = gen_parallel_lines({64, 64}, 1.0, 6, 3, lp);
  CHECK(!(a == d));

  // Regenerating a single index does not depend on earlier indices.
  DistributedBlocksParams bp;
  WorldMap w7 = gen_distributed_blocks({64, 64}, 1.0, 5, 7, bp);
  for (uint64_t wi = 0; wi < 7; ++wi) {
    (void)gen_distributed_blocks({64, 64}, 1.0, 5, wi, bp);
  }
  CHECK(gen_distributed_blocks({64, 64}, 1.0, 5, 7, bp) == w7);
}

TEST_CASE("sampled nodes sit on distinct free cells with dense ids") {
  ParallelLinesParams lp;
  WorldMap w = gen_parallel_lines({64, 64}, 1.0, 31, 0, lp);
  NodeSet ns = sample_nodes(w, 300, 31, 0);
  REQUIRE(ns.size() == 300);
  CHECK_NOTHROW(validate_nodes(ns, w));
  for (int i = 0; i < ns.size(); ++i) {
    const Node& n = ns.nodes[static_cast<size_t>(i)];
    CHECK(n.id == i);
    CHECK(n.heading >= 0.0);
    CHECK(n.heading < kTwoPi);
  }

  // Start is the node nearest the grid center, lowest id on ties.
  double cx = 32.0;
  double cy = 32.0;
  int best = 0;
  double best_d = 1e300;
  for (const Node& n : ns.nodes) {
    double d = std::hypot(n.x - cx, n.y - cy);
    if (d < best_d) {
      best_d = d;
      best = n.id;
    }
  }
  CHECK(ns.start_id == best);

  CHECK(sample_nodes(w, 300, 31, 0) == ns);
}

TEST_CASE("node sampling covers exactly the free cells when counts match") {
  WorldMap w = scout::testing::world_from_ascii({
      "#####",
      "##..#",
      "#.###",
      "#...#",
      "#####",
  });
  REQUIRE(w.free_cell_count() == 6);
  NodeSet ns = sample_nodes(w, 6, 3, 1);
  CHECK(ns.size() == 6);
  CellSet cells(25);
  for (const Node& n : ns.nodes) {
    cells.insert(static_cast<int>(std::floor(n.y)) * 5 +
                 static_cast<int>(std::floor(n.x)));
  }
  CHECK(cells.count() == 6);

  CHECK_THROWS_AS(sample_nodes(w, 7, 3, 1), InsufficientFreeSpaceError);
}

TEST_CASE("generate_dataset stamps metadata and validates every entry") {
  GeneratorConfig cfg;
  cfg.name = "distributed-blocks";
  cfg.dims = {32, 32};
  cfg.node_count = 40;
  WorldDataset ds = generate_dataset(cfg, 5, 1234, Split::Test);
  CHECK(ds.generator_name == "distributed-blocks");
  CHECK(ds.seed == 1234);
  CHECK(ds.split == Split::Test);
  REQUIRE(ds.size() == 5);
  for (const WorldEntry& e : ds.entries) {
    CHECK(e.nodes.size() == 40);
    CHECK_NOTHROW(validate_nodes(e.nodes, e.world));
  }
  CHECK(generate_dataset(cfg, 5, 1234, Split::Test) == ds);
  CHECK(!(generate_dataset(cfg, 5, 1235, Split::Test) == ds));
}

TEST_CASE("validate_generator rejects unknown names and bad parameters") {
  GeneratorConfig cfg;
  cfg.name = "bogus";
  CHECK_THROWS_AS(validate_generator(cfg), ConfigError);

  cfg = GeneratorConfig{};
  cfg.node_count = 0;
  CHECK_THROWS_AS(validate_generator(cfg), ConfigError);

  cfg = GeneratorConfig{};
  cfg.lines.min_length = 50.0;  // exceeds max_length
  CHECK_THROWS_AS(validate_generator(cfg), ConfigError);

  cfg = GeneratorConfig{};
  cfg.blocks.min_blocks = 0;
  CHECK_THROWS_AS(validate_generator(cfg), ConfigError);

  cfg = GeneratorConfig{};
  cfg.forest.intensity = 0.0;
  CHECK_THROWS_AS(validate_generator(cfg), ConfigError);
}

}  // TEST_SUITE
