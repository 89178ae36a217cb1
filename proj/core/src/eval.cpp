#include "scout/eval.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "scout/errors.hpp"

namespace scout {

Episode::Episode(const WorldMap& world, const NodeSet& nodes,
                 const CoverageIndex& index, const SensorConfig& sensor,
                 const ProblemSpec& spec)
    : world_(world),
      nodes_(nodes),
      index_(index),
      sensor_(sensor),
      spec_(spec),
      state_(initial_state(index, nodes)),
      belief_(make_belief(world.width, world.height, world.resolution)) {
  validate_problem(spec_);
  validate_sensor(sensor_);
  belief_update(belief_, nodes_.start_id, raycast(world_, nodes_.start(), sensor_));
  feasible_ = feasible_actions(state_, nodes_, spec_);
  base_cells_ = state_.covered.count();
}

double Episode::step(int action) {
  if (done()) throw NoFeasibleActionError("episode already finished");
  if (!std::binary_search(feasible_.begin(), feasible_.end(), action)) {
    throw ConfigError("action " + std::to_string(action) + " is not feasible");
  }
  double r = reward(state_, index_, action);
  apply_action(state_, action, index_, nodes_);
  belief_update(belief_, action, raycast(world_, nodes_.at(action), sensor_));
  ++actions_taken_;
  feasible_ = feasible_actions(state_, nodes_, spec_);
  return r;
}

Trajectory rollout(Policy& policy, const WorldMap& world, const NodeSet& nodes,
                   const CoverageIndex& index, const SensorConfig& sensor,
                   const ProblemSpec& spec, uint64_t seed, int world_index) {
  Episode ep(world, nodes, index, sensor, spec);
  policy.begin_episode(seed);

  Trajectory traj;
  traj.policy = policy.name();
  traj.world_index = world_index;
  traj.seed = seed;
  while (!ep.done()) {
    StepContext ctx{ep.state(),    ep.belief(), index,
                    nodes,         spec,        sensor,
                    ep.feasible(), ep.t_next(), ep.steps_remaining()};
    int choices = static_cast<int>(ctx.feasible.size());
    int a = policy.act(ctx);
    double r = ep.step(a);
    traj.steps.push_back({ep.actions_taken(), a, r, ep.cum_reward(),
                          ep.remaining_budget(), choices});
  }
  traj.terminal = ep.actions_taken() >= spec.horizon ? TerminalKind::Horizon
                                                     : TerminalKind::BudgetExhausted;
  traj.final_coverage = coverage(ep.state(), index);
  return traj;
}

namespace {

double cum_at(const Trajectory& traj, int t) {
  if (traj.steps.empty()) return 0.0;
  size_t i = std::min(static_cast<size_t>(t), traj.steps.size());
  return traj.steps[i - 1].cum_reward;
}

// Values are sorted before summing so the aggregate is bitwise identical
// under any permutation of the dataset entries.
void mean_ci(std::vector<double> xs, double& mean, double& ci_half) {
  std::sort(xs.begin(), xs.end());
  size_t n = xs.size();
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / static_cast<double>(n);
  if (n < 2) {
    ci_half = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  double sd = std::sqrt(ss / static_cast<double>(n - 1));
  ci_half = 1.96 * sd / std::sqrt(static_cast<double>(n));
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  size_t n = xs.size();
  if (n % 2 == 1) return xs[n / 2];
  return (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

}  // namespace

EvalResult evaluate(Policy& policy, const WorldDataset& dataset,
                    const ProblemSpec& spec, const SensorConfig& sensor,
                    uint64_t base_seed, int threads) {
  if (dataset.entries.empty()) throw EmptyDatasetError("evaluation dataset is empty");
  auto t0 = std::chrono::steady_clock::now();

  int n = dataset.size();
  std::vector<Trajectory> trajs(static_cast<size_t>(n));
  auto run_range = [&](int lo, int hi, Policy& p) {
    for (int wi = lo; wi < hi; ++wi) {
      const WorldEntry& e = dataset.entries[static_cast<size_t>(wi)];
      CoverageIndex index = build_coverage_index(e.world, e.nodes, sensor);
      uint64_t seed = mix_stream({base_seed, 0x45504953u, static_cast<uint64_t>(wi)});
      trajs[static_cast<size_t>(wi)] =
          rollout(p, e.world, e.nodes, index, sensor, spec, seed, wi);
    }
  };

  int workers = std::clamp(threads, 1, n);
  if (workers <= 1) {
    run_range(0, n, policy);
  } else {
    std::vector<std::unique_ptr<Policy>> clones;
    std::vector<std::thread> pool;
    for (int k = 0; k < workers; ++k) clones.push_back(policy.clone());
    for (int k = 0; k < workers; ++k) {
      int lo = k * n / workers;
      int hi = (k + 1) * n / workers;
      pool.emplace_back([&, lo, hi, k] { run_range(lo, hi, *clones[static_cast<size_t>(k)]); });
    }
    for (std::thread& th : pool) th.join();
  }

  EvalSummary s;
  s.policy = policy.name();
  s.n = n;
  s.mean_cum.resize(static_cast<size_t>(spec.horizon));
  s.ci_half.resize(static_cast<size_t>(spec.horizon));
  std::vector<double> col(static_cast<size_t>(n));
  for (int t = 1; t <= spec.horizon; ++t) {
    for (int wi = 0; wi < n; ++wi) {
      col[static_cast<size_t>(wi)] = cum_at(trajs[static_cast<size_t>(wi)], t);
    }
    mean_ci(col, s.mean_cum[static_cast<size_t>(t - 1)], s.ci_half[static_cast<size_t>(t - 1)]);
  }
  for (int wi = 0; wi < n; ++wi) {
    col[static_cast<size_t>(wi)] = cum_at(trajs[static_cast<size_t>(wi)], spec.horizon);
  }
  mean_ci(col, s.final_mean, s.final_ci_half);
  s.final_median = median(col);
  s.final_lo = s.final_mean - s.final_ci_half;
  s.final_hi = s.final_mean + s.final_ci_half;
  s.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  return {std::move(s), std::move(trajs)};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

void write_curve_csv(const EvalSummary& summary, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open curve file for writing: " + path);
  out << "timestep,mean,ci_half,n\n";
  for (size_t t = 0; t < summary.mean_cum.size(); ++t) {
    out << (t + 1) << ',' << format_double(summary.mean_cum[t]) << ','
        << format_double(summary.ci_half[t]) << ',' << summary.n << '\n';
  }
  if (!out) throw IoError("failed writing curve file: " + path);
}

void write_final_csv(const std::vector<EvalSummary>& summaries, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open final file for writing: " + path);
  out << "policy,median,lo,hi\n";
  for (const EvalSummary& s : summaries) {
    out << s.policy << ',' << format_double(s.final_median) << ','
        << format_double(s.final_lo) << ',' << format_double(s.final_hi) << '\n';
  }
  if (!out) throw IoError("failed writing final file: " + path);
}

void write_trajectories_jsonl(const std::vector<Trajectory>& trajectories,
                              const std::string& path, bool append) {
  std::ofstream out(path, append ? std::ios::binary | std::ios::app : std::ios::binary);
  if (!out) throw IoError("cannot open trajectory file for writing: " + path);
  for (const Trajectory& traj : trajectories) {
    nlohmann::ordered_json j;
    j["policy"] = traj.policy;
    j["world_index"] = traj.world_index;
    j["seed"] = traj.seed;
    j["terminal"] =
        traj.terminal == TerminalKind::Horizon ? "horizon" : "budget-exhausted";
    j["final_coverage"] = traj.final_coverage;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const TrajectoryStep& st : traj.steps) {
      nlohmann::ordered_json js;
      js["t"] = st.t;
      js["node"] = st.node_id;
      js["reward"] = st.reward;
      js["cum_reward"] = st.cum_reward;
      if (std::isinf(st.remaining_budget)) {
        js["remaining_budget"] = nullptr;
      } else {
        js["remaining_budget"] = st.remaining_budget;
      }
      js["feasible_count"] = st.feasible_count;
      steps.push_back(std::move(js));
    }
    j["steps"] = std::move(steps);
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("failed writing trajectory file: " + path);
}

}  // namespace scout
