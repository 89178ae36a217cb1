#include "scout/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include "scout/errors.hpp"
#include "scout/eval.hpp"
#include "scout/rng.hpp"

namespace scout {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::RewardFT: return "reward-ft";
    case Algorithm::QvalFT: return "qval-ft";
    case Algorithm::RewardAgg: return "reward-agg";
    case Algorithm::QvalAgg: return "qval-agg";
  }
  throw ConfigError("invalid algorithm value");
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "reward-ft") return Algorithm::RewardFT;
  if (name == "qval-ft") return Algorithm::QvalFT;
  if (name == "reward-agg") return Algorithm::RewardAgg;
  if (name == "qval-agg") return Algorithm::QvalAgg;
  throw ConfigError("unknown algorithm: " + name);
}

bool is_stationary(Algorithm a) {
  return a == Algorithm::RewardAgg || a == Algorithm::QvalAgg;
}

bool wants_budget(Algorithm a) {
  return a == Algorithm::QvalFT || a == Algorithm::QvalAgg;
}

OracleKind oracle_for(Algorithm a) {
  return wants_budget(a) ? OracleKind::Gcb : OracleKind::Greedy;
}

bool labels_reward_to_go(Algorithm a) { return wants_budget(a); }

double AlphaSchedule::alpha(int iteration) const {
  if (kind == Kind::Classic) return iteration == 1 ? 1.0 : 0.0;
  return std::pow(decay, iteration - 1);
}

void validate_train_config(const TrainConfig& cfg) {
  validate_problem(cfg.problem);
  validate_sensor(cfg.sensor);
  validate_hyperparams(cfg.forest);
  if (cfg.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (cfg.episodes_per_iter < 1) throw ConfigError("episodes per iteration must be >= 1");
  if (cfg.labels_per_state < 1) throw ConfigError("labels per state must be >= 1");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (cfg.alpha.kind == AlphaSchedule::Kind::Exponential &&
      (!(cfg.alpha.decay > 0.0) || cfg.alpha.decay > 1.0)) {
    throw ConfigError("alpha decay must be in (0, 1]");
  }
  bool budgeted = cfg.problem.variant == Variant::Budgeted;
  if (wants_budget(cfg.algorithm) && !budgeted) {
    throw ConfigError(to_string(cfg.algorithm) + " requires the budgeted variant");
  }
  if (!wants_budget(cfg.algorithm) && budgeted) {
    throw ConfigError(to_string(cfg.algorithm) + " requires the unconstrained variant");
  }
}

namespace {

constexpr uint64_t kEpisodeLane = 0x45505300;  // roll-in draws
constexpr uint64_t kFitLane = 0x46495400;      // forest seeds
constexpr uint64_t kValLane = 0x56414c00;      // validation rollouts
constexpr int kMaxEpisodeAttempts = 50;

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  int workers = std::clamp(threads, 1, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  for (int k = 0; k < workers; ++k) {
    int lo = k * n / workers;
    int hi = (k + 1) * n / workers;
    pool.emplace_back([&fn, &errors, lo, hi, k] {
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<size_t>(k)] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double mse_on(const ForestModel* model, const RegressionDataset& data) {
  if (data.examples.empty()) return 0.0;
  double sum = 0.0;
  for (const RegressionExample& e : data.examples) {
    double p = model ? predict(*model, e.x) : 0.0;
    sum += (p - e.y) * (p - e.y);
  }
  return sum / static_cast<double>(data.size());
}

double label_for(const TrainConfig& cfg, const CoverageState& state,
                 const CoverageIndex& index, const NodeSet& nodes, int action,
                 int steps_remaining) {
  if (!labels_reward_to_go(cfg.algorithm)) return reward(state, index, action);
  return q_value_to_go(oracle_for(cfg.algorithm), state, index, nodes, cfg.problem,
                       action, steps_remaining);
}

// k distinct actions from `feasible`, drawn by partial shuffle, returned
// ascending so the emitted example order is reproducible.
std::vector<int> pick_actions(std::vector<int> feasible, int k, Pcg32& rng) {
  int n = static_cast<int>(feasible.size());
  k = std::min(k, n);
  for (int i = 0; i < k; ++i) {
    uint32_t j = static_cast<uint32_t>(i) + rng.bounded(static_cast<uint32_t>(n - i));
    std::swap(feasible[static_cast<size_t>(i)], feasible[j]);
  }
  feasible.resize(static_cast<size_t>(k));
  std::sort(feasible.begin(), feasible.end());
  return feasible;
}

struct TrainSetup {
  std::vector<CoverageIndex> indices;  // one per train world
  double total_wall = 0.0;
};

double validation_reward(const LearntPolicyModel& model, const TrainConfig& cfg,
                         const WorldDataset& val_worlds, uint64_t lane) {
  LearntPolicy policy(model, "candidate");
  EvalResult r = evaluate(policy, val_worlds, cfg.problem, cfg.sensor,
                          mix_stream({cfg.seed, kValLane, lane}), cfg.threads);
  return r.summary.final_mean;
}

TrainResult train_aggregate(const TrainConfig& cfg, const WorldDataset& train_worlds,
                            const WorldDataset& val_worlds,
                            const std::vector<CoverageIndex>& indices) {
  auto t_start = std::chrono::steady_clock::now();
  int T = cfg.problem.horizon;
  int m = cfg.episodes_per_iter;

  RegressionDataset aggregate;
  std::vector<LabeledState> audit;
  FeatureNormalization norm;
  bool have_norm = false;
  std::vector<LearntPolicyModel> fitted;  // policy after each round
  TrainingReport report;
  report.algorithm = cfg.algorithm;

  for (int round = 1; round <= cfg.iterations; ++round) {
    auto t_round = std::chrono::steady_clock::now();
    double alpha = cfg.alpha.alpha(round);
    const LearntPolicyModel* learner = fitted.empty() ? nullptr : &fitted.back();

    std::vector<RegressionDataset> buffers(static_cast<size_t>(m));
    std::vector<std::vector<LabeledState>> audits(static_cast<size_t>(m));
    std::vector<int> resampled(static_cast<size_t>(m), 0);
    parallel_for(m, cfg.threads, [&](int j) {
      Pcg32 rng = child_rng(cfg.seed, {kEpisodeLane, static_cast<uint64_t>(round),
                                       static_cast<uint64_t>(j)});
      for (int attempt = 0;; ++attempt) {
        if (attempt >= kMaxEpisodeAttempts) {
          throw Error("training could not reach a sampled timestep; "
                      "horizon or budget leaves no feasible actions");
        }
        int wi = static_cast<int>(rng.bounded(static_cast<uint32_t>(train_worlds.size())));
        int t_target = 1 + static_cast<int>(rng.bounded(static_cast<uint32_t>(T)));
        const WorldEntry& entry = train_worlds.entries[static_cast<size_t>(wi)];
        const CoverageIndex& index = indices[static_cast<size_t>(wi)];
        Episode ep(entry.world, entry.nodes, index, cfg.sensor, cfg.problem);

        bool reached = true;
        for (int step = 1; step < t_target; ++step) {
          if (ep.done()) {
            reached = false;
            break;
          }
          bool use_oracle = rng.next_double() < alpha;
          int a;
          if (use_oracle) {
            a = oracle_act(oracle_for(cfg.algorithm), ep.state(), index, entry.nodes,
                           cfg.problem, ep.steps_remaining());
          } else if (learner) {
            a = policy_act(*learner, ep.belief(), ep.state(), entry.nodes,
                           cfg.problem, cfg.sensor, ep.feasible(), ep.t_next());
          } else {
            const std::vector<int>& f = ep.feasible();
            a = f[rng.bounded(static_cast<uint32_t>(f.size()))];
          }
          ep.step(a);
        }
        if (!reached || ep.done()) {
          ++resampled[static_cast<size_t>(j)];
          continue;
        }

        int steps_remaining = T - (t_target - 1);
        for (int a : pick_actions(ep.feasible(), cfg.labels_per_state, rng)) {
          RegressionExample e;
          e.x = extract_features(ep.belief(), ep.state(), a, entry.nodes,
                                 cfg.problem, cfg.sensor);
          e.y = label_for(cfg, ep.state(), index, entry.nodes, a, steps_remaining);
          buffers[static_cast<size_t>(j)].examples.push_back(e);
          audits[static_cast<size_t>(j)].push_back(
              {wi, ep.state().visited, a, steps_remaining, e.y});
        }
        break;
      }
    });

    RegressionDataset fresh;
    for (const RegressionDataset& b : buffers) fresh.append(b);
    for (std::vector<LabeledState>& a : audits) {
      audit.insert(audit.end(), a.begin(), a.end());
    }
    double online_loss = mse_on(learner ? &learner->models.front() : nullptr, fresh);
    aggregate.append(fresh);
    if (!have_norm) {
      norm = fit_normalization(aggregate);
      have_norm = true;
    }

    ForestModel model = fit_forest(aggregate, cfg.forest,
                                   mix_stream({cfg.seed, kFitLane,
                                               static_cast<uint64_t>(round)}),
                                   &norm);
    LearntPolicyModel policy;
    policy.models = {std::move(model)};
    policy.stationary = true;
    policy.horizon = T;
    double val = validation_reward(policy, cfg, val_worlds, static_cast<uint64_t>(round));
    fitted.push_back(std::move(policy));

    IterationRecord rec;
    rec.iteration = round;
    rec.examples_added = fresh.size();
    rec.dataset_size = aggregate.size();
    rec.online_loss = online_loss;
    rec.val_mean_reward = val;
    rec.alpha = alpha;
    for (int r : resampled) rec.resampled_episodes += r;
    rec.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_round).count();
    report.iterations.push_back(rec);
  }

  int best = 0;
  for (int i = 1; i < static_cast<int>(report.iterations.size()); ++i) {
    if (report.iterations[static_cast<size_t>(i)].val_mean_reward >
        report.iterations[static_cast<size_t>(best)].val_mean_reward) {
      best = i;
    }
  }
  report.selected_iteration = best + 1;
  report.total_examples = aggregate.size();
  report.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return {fitted[static_cast<size_t>(best)], std::move(report), std::move(audit)};
}

TrainResult train_forward(const TrainConfig& cfg, const WorldDataset& train_worlds,
                          const WorldDataset& val_worlds,
                          const std::vector<CoverageIndex>& indices) {
  auto t_start = std::chrono::steady_clock::now();
  int T = cfg.problem.horizon;
  int m = cfg.episodes_per_iter;

  std::vector<ForestModel> models;
  std::vector<LabeledState> audit;
  FeatureNormalization norm;
  bool have_norm = false;
  TrainingReport report;
  report.algorithm = cfg.algorithm;
  int total = 0;

  for (int t = 1; t <= T; ++t) {
    auto t_round = std::chrono::steady_clock::now();
    std::vector<RegressionDataset> buffers(static_cast<size_t>(m));
    std::vector<std::vector<LabeledState>> audits(static_cast<size_t>(m));
    std::vector<int> resampled(static_cast<size_t>(m), 0);
    parallel_for(m, cfg.threads, [&](int j) {
      Pcg32 rng = child_rng(cfg.seed, {kEpisodeLane, static_cast<uint64_t>(t),
                                       static_cast<uint64_t>(j)});
      for (int attempt = 0;; ++attempt) {
        if (attempt >= kMaxEpisodeAttempts) {
          throw Error("forward training could not roll in to timestep " +
                      std::to_string(t));
        }
        int wi = static_cast<int>(rng.bounded(static_cast<uint32_t>(train_worlds.size())));
        const WorldEntry& entry = train_worlds.entries[static_cast<size_t>(wi)];
        const CoverageIndex& index = indices[static_cast<size_t>(wi)];
        Episode ep(entry.world, entry.nodes, index, cfg.sensor, cfg.problem);

        // Roll in with the already-trained prefix.
        bool reached = true;
        for (int step = 1; step < t; ++step) {
          if (ep.done()) {
            reached = false;
            break;
          }
          const ForestModel& fm = models[static_cast<size_t>(step - 1)];
          int a = ep.feasible().front();
          double best = -std::numeric_limits<double>::infinity();
          for (int cand : ep.feasible()) {
            FeatureVector x = extract_features(ep.belief(), ep.state(), cand,
                                               entry.nodes, cfg.problem, cfg.sensor);
            double score = predict(fm, x);
            if (score > best) {
              best = score;
              a = cand;
            }
          }
          ep.step(a);
        }
        if (!reached || ep.done()) {
          ++resampled[static_cast<size_t>(j)];
          continue;
        }

        int steps_remaining = T - (t - 1);
        for (int a : pick_actions(ep.feasible(), cfg.labels_per_state, rng)) {
          RegressionExample e;
          e.x = extract_features(ep.belief(), ep.state(), a, entry.nodes,
                                 cfg.problem, cfg.sensor);
          e.y = label_for(cfg, ep.state(), index, entry.nodes, a, steps_remaining);
          buffers[static_cast<size_t>(j)].examples.push_back(e);
          audits[static_cast<size_t>(j)].push_back(
              {wi, ep.state().visited, a, steps_remaining, e.y});
        }
        break;
      }
    });

    RegressionDataset fresh;
    for (const RegressionDataset& b : buffers) fresh.append(b);
    for (std::vector<LabeledState>& a : audits) {
      audit.insert(audit.end(), a.begin(), a.end());
    }
    double online_loss =
        mse_on(t >= 2 ? &models[static_cast<size_t>(t - 2)] : nullptr, fresh);
    if (!have_norm) {
      norm = fit_normalization(fresh);
      have_norm = true;
    }
    models.push_back(fit_forest(fresh, cfg.forest,
                                mix_stream({cfg.seed, kFitLane,
                                            static_cast<uint64_t>(t)}),
                                &norm));
    total += fresh.size();

    // Validate the partial policy; untrained later steps reuse the newest
    // model.
    LearntPolicyModel partial;
    partial.models = models;
    partial.stationary = false;
    partial.horizon = static_cast<int>(models.size());
    double val = validation_reward(partial, cfg, val_worlds, static_cast<uint64_t>(t));

    IterationRecord rec;
    rec.iteration = t;
    rec.examples_added = fresh.size();
    rec.dataset_size = fresh.size();
    rec.online_loss = online_loss;
    rec.val_mean_reward = val;
    rec.alpha = 0.0;
    for (int r : resampled) rec.resampled_episodes += r;
    rec.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_round).count();
    report.iterations.push_back(rec);
  }

  LearntPolicyModel policy;
  policy.models = std::move(models);
  policy.stationary = false;
  policy.horizon = T;
  report.selected_iteration = T;
  report.total_examples = total;
  report.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return {std::move(policy), std::move(report), std::move(audit)};
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const WorldDataset& train_worlds,
                  const WorldDataset& val_worlds) {
  validate_train_config(cfg);
  if (train_worlds.entries.empty()) throw EmptyDatasetError("training dataset is empty");
  if (val_worlds.entries.empty()) throw EmptyDatasetError("validation dataset is empty");

  std::vector<CoverageIndex> indices(static_cast<size_t>(train_worlds.size()));
  parallel_for(train_worlds.size(), cfg.threads, [&](int wi) {
    const WorldEntry& e = train_worlds.entries[static_cast<size_t>(wi)];
    indices[static_cast<size_t>(wi)] = build_coverage_index(e.world, e.nodes, cfg.sensor);
  });

  if (is_stationary(cfg.algorithm)) {
    return train_aggregate(cfg, train_worlds, val_worlds, indices);
  }
  return train_forward(cfg, train_worlds, val_worlds, indices);
}

void write_report_csv(const TrainingReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open report file for writing: " + path);
  // Wall-clock lives in the text report only; this file stays byte-identical
  // across reruns with the same seed.
  out << "iteration,examples_added,dataset_size,online_loss,val_mean_reward,"
         "alpha,resampled_episodes\n";
  for (const IterationRecord& r : report.iterations) {
    out << r.iteration << ',' << r.examples_added << ',' << r.dataset_size << ','
        << format_double(r.online_loss) << ',' << format_double(r.val_mean_reward)
        << ',' << format_double(r.alpha) << ',' << r.resampled_episodes << '\n';
  }
  if (!out) throw IoError("failed writing report file: " + path);
}

void write_report_text(const TrainingReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open report file for writing: " + path);
  out << "algorithm: " << to_string(report.algorithm) << '\n'
      << "rounds: " << report.iterations.size() << '\n'
      << "selected_iteration: " << report.selected_iteration << '\n'
      << "total_examples: " << report.total_examples << '\n'
      << "wall_clock_s: " << format_double(report.wall_clock_s) << '\n';
  for (const IterationRecord& r : report.iterations) {
    out << "  round " << r.iteration << ": examples=" << r.examples_added
        << " dataset=" << r.dataset_size << " online_loss=" << format_double(r.online_loss)
        << " val=" << format_double(r.val_mean_reward)
        << " alpha=" << format_double(r.alpha)
        << " resampled=" << r.resampled_episodes << '\n';
  }
  if (!out) throw IoError("failed writing report file: " + path);
}

}  // namespace scout
