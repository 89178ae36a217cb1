#pragma once

#include <string>
#include <vector>

#include "scout/policy.hpp"
#include "scout/world.hpp"

namespace scout {

// Online episode under the true world: the start node observes for free,
// then up to `horizon` policy actions, each followed by a scan folded into
// the belief. Ends early only when the feasible set empties (budget).
class Episode {
 public:
  Episode(const WorldMap& world, const NodeSet& nodes, const CoverageIndex& index,
          const SensorConfig& sensor, const ProblemSpec& spec);

  const CoverageState& state() const { return state_; }
  const Belief& belief() const { return belief_; }
  const std::vector<int>& feasible() const { return feasible_; }
  int actions_taken() const { return actions_taken_; }
  int t_next() const { return actions_taken_ + 1; }
  int steps_remaining() const { return spec_.horizon - actions_taken_; }
  bool done() const { return actions_taken_ >= spec_.horizon || feasible_.empty(); }
  // Coverage gained by actions (the start node's free observation excluded),
  // recomputed from integer cell counts so it exactly telescopes.
  double cum_reward() const {
    return static_cast<double>(state_.covered.count() - base_cells_) /
           index_.denominator;
  }
  double remaining_budget() const { return spec_.budget - state_.traveled; }

  // Applies one action, scans, updates the belief; returns the reward.
  double step(int action);

 private:
  const WorldMap& world_;
  const NodeSet& nodes_;
  const CoverageIndex& index_;
  SensorConfig sensor_;
  ProblemSpec spec_;
  CoverageState state_;
  Belief belief_;
  std::vector<int> feasible_;
  int actions_taken_ = 0;
  int base_cells_ = 0;
};

struct TrajectoryStep {
  int t = 0;
  int node_id = 0;
  double reward = 0.0;
  double cum_reward = 0.0;
  double remaining_budget = 0.0;  // +inf for the unconstrained variant
  int feasible_count = 0;
};

enum class TerminalKind { Horizon, BudgetExhausted };

struct Trajectory {
  std::string policy;
  int world_index = -1;
  uint64_t seed = 0;
  std::vector<TrajectoryStep> steps;
  TerminalKind terminal = TerminalKind::Horizon;
  double final_coverage = 0.0;
};

Trajectory rollout(Policy& policy, const WorldMap& world, const NodeSet& nodes,
                   const CoverageIndex& index, const SensorConfig& sensor,
                   const ProblemSpec& spec, uint64_t seed, int world_index);

// Per-timestep aggregates over one dataset; episodes that stop early extend
// their last cumulative reward to the horizon. ci_half is the normal 95%
// half-width (0 when n == 1).
struct EvalSummary {
  std::string policy;
  int n = 0;
  std::vector<double> mean_cum;
  std::vector<double> ci_half;
  double final_mean = 0.0;
  double final_ci_half = 0.0;
  double final_median = 0.0;
  double final_lo = 0.0;  // 95% interval on the final-step mean
  double final_hi = 0.0;
  double wall_clock_s = 0.0;
};

struct EvalResult {
  EvalSummary summary;
  std::vector<Trajectory> trajectories;
};

// One rollout per dataset entry; episode e draws seed mix(base_seed, e).
// `threads` > 1 runs worlds in parallel with identical results.
EvalResult evaluate(Policy& policy, const WorldDataset& dataset,
                    const ProblemSpec& spec, const SensorConfig& sensor,
                    uint64_t base_seed, int threads = 1);

// curve.csv: timestep,mean,ci_half,n. final.csv: policy,median,lo,hi.
// trajectories.jsonl: one JSON object per episode.
void write_curve_csv(const EvalSummary& summary, const std::string& path);
void write_final_csv(const std::vector<EvalSummary>& summaries, const std::string& path);
void write_trajectories_jsonl(const std::vector<Trajectory>& trajectories,
                              const std::string& path, bool append);

// Round-trip exact decimal rendering shared by every emitter.
std::string format_double(double v);

}  // namespace scout
