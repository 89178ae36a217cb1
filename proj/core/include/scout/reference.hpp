#pragma once

#include <vector>

#include "scout/oracles.hpp"
#include "scout/policy.hpp"

namespace scout {

// Independent exact machinery on tiny enumerable instances: brute-force
// optima, exact posteriors, the hallucinating oracle, and belief-space
// dynamic programming. Everything here is enumeration; nothing is shared
// with the production planners beyond the primitive reward arithmetic.

inline constexpr int kMaxEnsembleWorlds = 16;
inline constexpr int kMaxBruteForceNodes = 10;
inline constexpr int kMaxBruteForceHorizon = 4;
inline constexpr int kMaxAdaptiveWorlds = 8;
inline constexpr int kMaxAdaptiveNodes = 8;
inline constexpr int kMaxAdaptiveHorizon = 3;

// A uniform prior over candidate worlds that share dimensions and one node
// set; per-world coverage indices are prebuilt.
struct TinyEnsemble {
  std::vector<WorldMap> worlds;
  NodeSet nodes;
  SensorConfig sensor;
  ProblemSpec spec;
  std::vector<CoverageIndex> indices;

  int size() const { return static_cast<int>(worlds.size()); }
};

// Validates shared dims, node freedom in every world, and the world cap;
// builds the per-world indices.
TinyEnsemble make_ensemble(std::vector<WorldMap> worlds, NodeSet nodes,
                           SensorConfig sensor, ProblemSpec spec);

// Seeded random solvable ensemble on a 12x12 grid: 2..8 worlds with sparse
// obstacles, 5..8 nodes free in all worlds, horizon 2..3, unconstrained.
TinyEnsemble make_tiny_ensemble(uint64_t seed);

struct BruteForceResult {
  std::vector<int> path;  // includes the start node
  double utility = 0.0;   // coverage of the visited set
  double gain = 0.0;      // utility minus the start node's own coverage
};

// Exhaustive enumeration of feasible node sequences up to the horizon.
// Throws InstanceTooLargeError above the caps.
BruteForceResult brute_force_path(const CoverageIndex& index, const NodeSet& nodes,
                                  const ProblemSpec& spec);

// Uniform weights over worlds reproducing every measurement in the belief
// history exactly; throws NoConsistentWorldError when none does.
std::vector<double> exact_posterior(const TinyEnsemble& ens, const Belief& belief);

// Argmax over feasible actions of the posterior-expected oracle value;
// lowest id on ties. One-step greedy kind with steps_remaining 1 is the
// adaptive-greedy rule.
int hallucinating_act(const TinyEnsemble& ens, const CoverageState& state,
                      const Belief& belief, const ProblemSpec& spec,
                      OracleKind kind, int steps_remaining);

struct Lemma1Result {
  double lhs = 0.0;  // prior-expected clairvoyant value at the rolled-in states
  double rhs = 0.0;  // prior-expected posterior-mixture value at the same states
  double gap = 0.0;
};

// Offline/online equivalence probe: rolls `rollin` (a belief-based policy,
// reseeded identically per world) to timestep t in every world, then
// compares the clairvoyant value of `action` against its posterior-expected
// value. `action` must be feasible in every rolled-in branch.
Lemma1Result lemma1_check(const TinyEnsemble& ens, Policy& rollin,
                          uint64_t rollin_seed, int t, int action, OracleKind kind);

// Sweep of lemma1_check over every timestep and every action feasible in
// all branches; returns the worst gap and the number of checks.
struct Lemma1Scan {
  double max_gap = 0.0;
  int checks = 0;
};
Lemma1Scan lemma1_scan(const TinyEnsemble& ens, Policy& rollin,
                       uint64_t rollin_seed, OracleKind kind);

// Exact value of the optimal adaptive policy by backward induction over
// (visited sequence, consistent-world partition) belief states. Throws
// InstanceTooLargeError above the caps.
double optimal_adaptive_value(const TinyEnsemble& ens);

// Mean over worlds of the cumulative reward of the hallucinating policy
// (posterior-expected oracle value argmax each step).
double hallucinating_policy_value(const TinyEnsemble& ens,
                                  OracleKind kind = OracleKind::Greedy,
                                  int lookahead = 1);

}  // namespace scout
