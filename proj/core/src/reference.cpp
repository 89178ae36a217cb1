#include "scout/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "scout/errors.hpp"
#include "scout/eval.hpp"
#include "scout/rng.hpp"

namespace scout {

TinyEnsemble make_ensemble(std::vector<WorldMap> worlds, NodeSet nodes,
                           SensorConfig sensor, ProblemSpec spec) {
  if (worlds.empty() || static_cast<int>(worlds.size()) > kMaxEnsembleWorlds) {
    throw ConfigError("ensemble must hold 1.." + std::to_string(kMaxEnsembleWorlds) +
                      " worlds");
  }
  validate_problem(spec);
  validate_sensor(sensor);
  for (const WorldMap& w : worlds) {
    if (w.width != worlds.front().width || w.height != worlds.front().height ||
        w.resolution != worlds.front().resolution) {
      throw ConfigError("ensemble worlds must share dimensions and resolution");
    }
  }
  TinyEnsemble ens;
  ens.indices.reserve(worlds.size());
  for (const WorldMap& w : worlds) {
    ens.indices.push_back(build_coverage_index(w, nodes, sensor));
  }
  ens.worlds = std::move(worlds);
  ens.nodes = std::move(nodes);
  ens.sensor = sensor;
  ens.spec = spec;
  return ens;
}

TinyEnsemble make_tiny_ensemble(uint64_t seed) {
  constexpr int kSide = 12;
  uint64_t attempt_seed = seed;
  for (int attempt = 0; attempt < 64; ++attempt, attempt_seed = splitmix64(attempt_seed)) {
    Pcg32 rng(attempt_seed, 0x54494e59);
    int n_worlds = 2 + static_cast<int>(rng.bounded(7));
    int n_nodes = 5 + static_cast<int>(rng.bounded(4));
    // Short range keeps most of the grid out of the first scan; twin worlds
    // (below) differ only beyond it, so posteriors stay ambiguous for a few
    // steps instead of collapsing at t=1.
    double range = 2.5 + 1.5 * rng.next_double();
    double mid = kSide / 2.0;

    std::vector<std::vector<uint8_t>> grids;
    std::vector<uint8_t> blocked_somewhere(kSide * kSide, 0);
    for (int k = 0; k < n_worlds; ++k) {
      std::vector<uint8_t> cells;
      bool twin = k > 0 && rng.bounded(2) == 0;
      if (twin) {
        // Clone an earlier grid and add one obstacle outside the start's
        // sensing disk; the pair is indistinguishable until someone looks.
        cells = grids[rng.bounded(static_cast<uint32_t>(k))];
        for (int tries = 0; tries < 32; ++tries) {
          int c = static_cast<int>(rng.bounded(kSide * kSide));
          double cx = (c % kSide) + 0.5 - mid;
          double cy = (c / kSide) + 0.5 - mid;
          if (cells[static_cast<size_t>(c)] == 0 &&
              cx * cx + cy * cy > (range + 1.0) * (range + 1.0)) {
            cells[static_cast<size_t>(c)] = 1;
            blocked_somewhere[static_cast<size_t>(c)] = 1;
            break;
          }
        }
      } else {
        cells.assign(kSide * kSide, 0);
        int obstacles = 3 + static_cast<int>(rng.bounded(4));
        for (int o = 0; o < obstacles; ++o) {
          int c = static_cast<int>(rng.bounded(kSide * kSide));
          cells[static_cast<size_t>(c)] = 1;
          blocked_somewhere[static_cast<size_t>(c)] = 1;
        }
      }
      grids.push_back(std::move(cells));
    }

    std::vector<int> common_free;
    for (int c = 0; c < kSide * kSide; ++c) {
      if (!blocked_somewhere[static_cast<size_t>(c)]) common_free.push_back(c);
    }
    if (static_cast<int>(common_free.size()) < n_nodes) continue;

    // Node cells: partial shuffle of the common-free list.
    for (int i = 0; i < n_nodes; ++i) {
      uint32_t j = static_cast<uint32_t>(i) +
                   rng.bounded(static_cast<uint32_t>(common_free.size() - static_cast<size_t>(i)));
      std::swap(common_free[static_cast<size_t>(i)], common_free[j]);
    }
    NodeSet nodes;
    for (int i = 0; i < n_nodes; ++i) {
      int c = common_free[static_cast<size_t>(i)];
      double x = (c % kSide) + 0.1 + 0.8 * rng.next_double();
      double y = (c / kSide) + 0.1 + 0.8 * rng.next_double();
      nodes.nodes.push_back({i, x, y, rng.uniform(0.0, kTwoPi)});
    }
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (const Node& n : nodes.nodes) {
      double d2 = (n.x - mid) * (n.x - mid) + (n.y - mid) * (n.y - mid);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = n.id;
      }
    }
    nodes.start_id = best;

    ProblemSpec spec;
    spec.horizon = 2 + static_cast<int>(rng.bounded(2));
    spec.variant = Variant::Unconstrained;

    SensorConfig sensor;
    sensor.num_rays = 16;
    sensor.max_range = range;

    std::vector<WorldMap> worlds;
    try {
      for (auto& g : grids) worlds.push_back(make_world(kSide, kSide, 1.0, std::move(g)));
      return make_ensemble(std::move(worlds), std::move(nodes), sensor, spec);
    } catch (const ConfigError&) {
      continue;  // some world saw no surface; redraw
    }
  }
  throw Error("could not draw a solvable tiny ensemble");
}

namespace {

void brute_force_rec(const CoverageIndex& index, const NodeSet& nodes,
                     const ProblemSpec& spec, CoverageState& s, int depth,
                     int& best_cells, std::vector<int>& best_path) {
  std::vector<int> feasible =
      depth < spec.horizon ? feasible_actions(s, nodes, spec) : std::vector<int>{};
  if (feasible.empty()) {
    int cells = s.covered.count();
    if (cells > best_cells) {
      best_cells = cells;
      best_path = s.visited;
    }
    return;
  }
  for (int a : feasible) {
    CoverageState next = s;
    apply_action(next, a, index, nodes);
    brute_force_rec(index, nodes, spec, next, depth + 1, best_cells, best_path);
  }
}

}  // namespace

BruteForceResult brute_force_path(const CoverageIndex& index, const NodeSet& nodes,
                                  const ProblemSpec& spec) {
  validate_problem(spec);
  if (nodes.size() > kMaxBruteForceNodes || spec.horizon > kMaxBruteForceHorizon) {
    throw InstanceTooLargeError("brute force caps: |V| <= 10, horizon <= 4");
  }
  CoverageState s = initial_state(index, nodes);
  int base_cells = s.covered.count();
  int best_cells = -1;
  std::vector<int> best_path;
  brute_force_rec(index, nodes, spec, s, 0, best_cells, best_path);

  BruteForceResult r;
  r.path = std::move(best_path);
  r.utility = static_cast<double>(best_cells) / index.denominator;
  r.gain = static_cast<double>(best_cells - base_cells) / index.denominator;
  return r;
}

std::vector<double> exact_posterior(const TinyEnsemble& ens, const Belief& belief) {
  int n = ens.size();
  std::vector<char> consistent(static_cast<size_t>(n), 1);
  for (const auto& [node_id, m] : belief.history) {
    const Node& node = ens.nodes.at(node_id);
    for (int k = 0; k < n; ++k) {
      if (!consistent[static_cast<size_t>(k)]) continue;
      if (!(raycast(ens.worlds[static_cast<size_t>(k)], node, ens.sensor) == m)) {
        consistent[static_cast<size_t>(k)] = 0;
      }
    }
  }
  int support = 0;
  for (char c : consistent) support += c;
  if (support == 0) {
    throw NoConsistentWorldError("belief history matches no world in the ensemble");
  }
  std::vector<double> w(static_cast<size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    if (consistent[static_cast<size_t>(k)]) {
      w[static_cast<size_t>(k)] = 1.0 / static_cast<double>(support);
    }
  }
  return w;
}

int hallucinating_act(const TinyEnsemble& ens, const CoverageState& state,
                      const Belief& belief, const ProblemSpec& spec,
                      OracleKind kind, int steps_remaining) {
  std::vector<double> posterior = exact_posterior(ens, belief);
  std::vector<int> feasible = feasible_actions(state, ens.nodes, spec);
  if (feasible.empty()) throw NoFeasibleActionError("hallucinating oracle has no action");

  // Per-world states induced by the same visit sequence.
  std::vector<CoverageState> states;
  states.reserve(static_cast<size_t>(ens.size()));
  for (int k = 0; k < ens.size(); ++k) {
    states.push_back(state_for_path(state.visited, ens.indices[static_cast<size_t>(k)],
                                    ens.nodes));
  }

  int best = feasible.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (int a : feasible) {
    double score = 0.0;
    for (int k = 0; k < ens.size(); ++k) {
      if (posterior[static_cast<size_t>(k)] == 0.0) continue;
      score += posterior[static_cast<size_t>(k)] *
               q_value_to_go(kind, states[static_cast<size_t>(k)],
                             ens.indices[static_cast<size_t>(k)], ens.nodes, spec, a,
                             steps_remaining);
    }
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

namespace {

// Rolls `rollin` for t-1 actions in every world, reseeding identically; the
// policy must be belief-based, so branches diverge only after measurements
// diverge. Returns per-world episodes.
std::vector<std::unique_ptr<Episode>> roll_in_all(const TinyEnsemble& ens,
                                                  Policy& rollin, uint64_t seed,
                                                  int t) {
  std::vector<std::unique_ptr<Episode>> eps;
  for (int k = 0; k < ens.size(); ++k) {
    auto ep = std::make_unique<Episode>(ens.worlds[static_cast<size_t>(k)], ens.nodes,
                                        ens.indices[static_cast<size_t>(k)], ens.sensor,
                                        ens.spec);
    rollin.begin_episode(seed);
    for (int step = 1; step < t; ++step) {
      if (ep->done()) throw InstanceTooLargeError("roll-in ended before timestep t");
      StepContext ctx{ep->state(),    ep->belief(), ens.indices[static_cast<size_t>(k)],
                      ens.nodes,      ens.spec,     ens.sensor,
                      ep->feasible(), ep->t_next(), ep->steps_remaining()};
      ep->step(rollin.act(ctx));
    }
    eps.push_back(std::move(ep));
  }
  return eps;
}

Lemma1Result lemma1_evaluate(const TinyEnsemble& ens,
                             const std::vector<std::unique_ptr<Episode>>& eps,
                             int action, int steps_remaining, OracleKind kind) {
  int n = ens.size();
  double lhs = 0.0;
  double rhs = 0.0;
  for (int k = 0; k < n; ++k) {
    const Episode& ep = *eps[static_cast<size_t>(k)];
    lhs += q_value_to_go(kind, ep.state(), ens.indices[static_cast<size_t>(k)],
                         ens.nodes, ens.spec, action, steps_remaining) /
           static_cast<double>(n);
    std::vector<double> posterior = exact_posterior(ens, ep.belief());
    double inner = 0.0;
    for (int j = 0; j < n; ++j) {
      if (posterior[static_cast<size_t>(j)] == 0.0) continue;
      CoverageState sj = state_for_path(ep.state().visited,
                                        ens.indices[static_cast<size_t>(j)], ens.nodes);
      inner += posterior[static_cast<size_t>(j)] *
               q_value_to_go(kind, sj, ens.indices[static_cast<size_t>(j)], ens.nodes,
                             ens.spec, action, steps_remaining);
    }
    rhs += inner / static_cast<double>(n);
  }
  return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace

Lemma1Result lemma1_check(const TinyEnsemble& ens, Policy& rollin,
                          uint64_t rollin_seed, int t, int action, OracleKind kind) {
  if (t < 1 || t > ens.spec.horizon) throw ConfigError("timestep outside the horizon");
  auto eps = roll_in_all(ens, rollin, rollin_seed, t);
  for (const auto& ep : eps) {
    if (!std::binary_search(ep->feasible().begin(), ep->feasible().end(), action)) {
      throw ConfigError("action is infeasible in some rolled-in branch");
    }
  }
  return lemma1_evaluate(ens, eps, action, ens.spec.horizon - t + 1, kind);
}

Lemma1Scan lemma1_scan(const TinyEnsemble& ens, Policy& rollin,
                       uint64_t rollin_seed, OracleKind kind) {
  Lemma1Scan scan;
  for (int t = 1; t <= ens.spec.horizon; ++t) {
    auto eps = roll_in_all(ens, rollin, rollin_seed, t);
    // Actions feasible in every branch.
    std::vector<int> common = eps.front()->feasible();
    for (size_t k = 1; k < eps.size(); ++k) {
      const std::vector<int>& f = eps[k]->feasible();
      std::vector<int> merged;
      std::set_intersection(common.begin(), common.end(), f.begin(), f.end(),
                            std::back_inserter(merged));
      common = std::move(merged);
    }
    for (int a : common) {
      Lemma1Result r = lemma1_evaluate(ens, eps, a, ens.spec.horizon - t + 1, kind);
      scan.max_gap = std::max(scan.max_gap, r.gap);
      ++scan.checks;
    }
  }
  return scan;
}

namespace {

// Expected optimal value over one consistency class of worlds, all of which
// produced identical measurements along `visited`.
double adaptive_dp(const TinyEnsemble& ens, std::vector<int>& visited,
                   const std::vector<int>& cls, int steps,
                   const std::vector<std::vector<Measurement>>& scans) {
  if (steps == 0) return 0.0;
  std::vector<CoverageState> states;
  states.reserve(cls.size());
  for (int k : cls) {
    states.push_back(state_for_path(visited, ens.indices[static_cast<size_t>(k)],
                                    ens.nodes));
  }
  std::vector<int> feasible = feasible_actions(states.front(), ens.nodes, ens.spec);
  if (feasible.empty()) return 0.0;

  double best = -1.0;
  for (int a : feasible) {
    double imm = 0.0;
    for (size_t i = 0; i < cls.size(); ++i) {
      imm += reward(states[i], ens.indices[static_cast<size_t>(cls[i])], a) /
             static_cast<double>(cls.size());
    }
    // Partition the class by the measurement the action would produce.
    std::vector<std::vector<int>> groups;
    for (int k : cls) {
      bool placed = false;
      for (std::vector<int>& g : groups) {
        if (scans[static_cast<size_t>(g.front())][static_cast<size_t>(a)] ==
            scans[static_cast<size_t>(k)][static_cast<size_t>(a)]) {
          g.push_back(k);
          placed = true;
          break;
        }
      }
      if (!placed) groups.push_back({k});
    }
    double cont = 0.0;
    visited.push_back(a);
    for (const std::vector<int>& g : groups) {
      cont += static_cast<double>(g.size()) / static_cast<double>(cls.size()) *
              adaptive_dp(ens, visited, g, steps - 1, scans);
    }
    visited.pop_back();
    best = std::max(best, imm + cont);
  }
  return best;
}

std::vector<std::vector<Measurement>> all_scans(const TinyEnsemble& ens) {
  std::vector<std::vector<Measurement>> scans(static_cast<size_t>(ens.size()));
  for (int k = 0; k < ens.size(); ++k) {
    for (const Node& node : ens.nodes.nodes) {
      scans[static_cast<size_t>(k)].push_back(
          raycast(ens.worlds[static_cast<size_t>(k)], node, ens.sensor));
    }
  }
  return scans;
}

}  // namespace

double optimal_adaptive_value(const TinyEnsemble& ens) {
  if (ens.size() > kMaxAdaptiveWorlds || ens.nodes.size() > kMaxAdaptiveNodes ||
      ens.spec.horizon > kMaxAdaptiveHorizon) {
    throw InstanceTooLargeError(
        "adaptive DP caps: <= 8 worlds, |V| <= 8, horizon <= 3");
  }
  std::vector<std::vector<Measurement>> scans = all_scans(ens);

  // The start observation partitions the prior before any action.
  std::vector<std::vector<int>> groups;
  for (int k = 0; k < ens.size(); ++k) {
    bool placed = false;
    for (std::vector<int>& g : groups) {
      if (scans[static_cast<size_t>(g.front())][static_cast<size_t>(ens.nodes.start_id)] ==
          scans[static_cast<size_t>(k)][static_cast<size_t>(ens.nodes.start_id)]) {
        g.push_back(k);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({k});
  }

  std::vector<int> visited = {ens.nodes.start_id};
  double value = 0.0;
  for (const std::vector<int>& g : groups) {
    value += static_cast<double>(g.size()) / static_cast<double>(ens.size()) *
             adaptive_dp(ens, visited, g, ens.spec.horizon, scans);
  }
  return value;
}

double hallucinating_policy_value(const TinyEnsemble& ens, OracleKind kind,
                                  int lookahead) {
  double total = 0.0;
  for (int k = 0; k < ens.size(); ++k) {
    Episode ep(ens.worlds[static_cast<size_t>(k)], ens.nodes,
               ens.indices[static_cast<size_t>(k)], ens.sensor, ens.spec);
    while (!ep.done()) {
      int steps = lookahead > 0 ? lookahead : ep.steps_remaining();
      int a = hallucinating_act(ens, ep.state(), ep.belief(), ens.spec, kind, steps);
      ep.step(a);
    }
    total += ep.cum_reward();
  }
  return total / static_cast<double>(ens.size());
}

}  // namespace scout
