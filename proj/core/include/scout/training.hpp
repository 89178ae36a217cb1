#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scout/learner.hpp"
#include "scout/oracles.hpp"
#include "scout/world.hpp"

namespace scout {

// The four imitation trainers. Reward* imitate one-step greedy coverage on
// the unconstrained problem; Qval* imitate cost-benefit reward-to-go on the
// budgeted problem. *FT fit one model per timestep by forward training;
// *Agg aggregate every round's labels into one stationary model.
enum class Algorithm { RewardFT, QvalFT, RewardAgg, QvalAgg };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

bool is_stationary(Algorithm a);
bool wants_budget(Algorithm a);
OracleKind oracle_for(Algorithm a);
bool labels_reward_to_go(Algorithm a);

// Roll-in mixing weight per aggregation round: classic uses the oracle only
// on the first round, exponential decays alpha_i = decay^(i-1).
struct AlphaSchedule {
  enum class Kind { Classic, Exponential } kind = Kind::Classic;
  double decay = 0.5;

  double alpha(int iteration) const;  // 1-based
};

struct TrainConfig {
  Algorithm algorithm = Algorithm::RewardAgg;
  int iterations = 10;         // aggregation rounds; forward training uses horizon
  int episodes_per_iter = 30;  // states collected per round (or per timestep)
  int labels_per_state = 8;    // distinct random actions labeled per state
  AlphaSchedule alpha;
  ProblemSpec problem;
  SensorConfig sensor;
  ForestHyperparams forest;
  uint64_t seed = 0;
  int threads = 1;
};

// Rejects knob ranges and, in both directions, algorithm/variant mismatches
// (Reward* require Unconstrained, Qval* require Budgeted).
void validate_train_config(const TrainConfig& cfg);

struct IterationRecord {
  int iteration = 0;  // aggregation round, or timestep for forward training
  int examples_added = 0;
  int dataset_size = 0;
  // MSE of the predictor previously responsible for these states on the new
  // labels; the uniform-random initial policy predicts 0.
  double online_loss = 0.0;
  double val_mean_reward = 0.0;
  double alpha = 0.0;  // 0 for forward training
  int resampled_episodes = 0;
  double wall_clock_s = 0.0;
};

struct TrainingReport {
  Algorithm algorithm = Algorithm::RewardAgg;
  std::vector<IterationRecord> iterations;
  int selected_iteration = 0;  // round whose policy won validation
  int total_examples = 0;
  double wall_clock_s = 0.0;
};

// Replay record for one stored label: enough state to recompute the oracle
// target from scratch and compare exactly.
struct LabeledState {
  int world_index = 0;
  std::vector<int> visited;
  int action = 0;
  int steps_remaining = 0;
  double target = 0.0;
};

struct TrainResult {
  LearntPolicyModel policy;
  TrainingReport report;
  std::vector<LabeledState> audit;  // one per aggregated example, in order
};

// Deterministic in (config, datasets): all randomness flows through child
// streams keyed by (round, episode), so thread count cannot change results.
TrainResult train(const TrainConfig& cfg, const WorldDataset& train_worlds,
                  const WorldDataset& val_worlds);

void write_report_csv(const TrainingReport& report, const std::string& path);
void write_report_text(const TrainingReport& report, const std::string& path);

}  // namespace scout
