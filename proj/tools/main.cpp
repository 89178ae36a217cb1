// scout: one binary for the whole pipeline. Subcommands generate world
// datasets, train scanning policies by imitation, evaluate policies on test
// worlds, and run the exact verification suites. Exit codes: 0 success,
// 1 runtime failure, 2 usage or config error.
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "scout/dataset_io.hpp"
#include "scout/errors.hpp"
#include "scout/eval.hpp"
#include "scout/learner.hpp"
#include "scout/policy.hpp"
#include "scout/rng.hpp"
#include "scout/sensor.hpp"
#include "scout/training.hpp"
#include "scout/verify.hpp"
#include "scout/version.hpp"
#include "scout/worldgen.hpp"

namespace fs = std::filesystem;
using namespace scout;

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

// Lane tag for per-split worldgen seeds; the derived seed lands in the file
// header, so regenerating from the header reproduces the file exactly.
constexpr uint64_t kSplitLane = 0x53504c49;

// Every run dumps its full option state (defaults included) before working;
// feeding the block back through --config reproduces the run.
void print_effective_config(const CLI::App& cmd) {
  std::cout << "# effective config [" << cmd.get_name() << "]\n"
            << cmd.config_to_str(true, false) << std::flush;
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

Variant variant_for_budget(double budget) {
  return std::isfinite(budget) ? Variant::Budgeted : Variant::Unconstrained;
}

// CLI takes the field of view in degrees so the default (360) echoes and
// re-parses exactly; 360 converts to the library's two-pi bit-for-bit.
double fov_radians(double degrees) { return degrees / 180.0 * kPi; }

struct WorldgenArgs {
  GeneratorConfig cfg;
  int train_count = 100;
  int test_count = 100;
  int val_count = 20;
  uint64_t seed = 7;
  std::string out = "data";
  std::string encoding = "json";
};

DatasetEncoding encoding_from_string(const std::string& s) {
  if (s == "json") return DatasetEncoding::Json;
  if (s == "binary") return DatasetEncoding::Binary;
  throw ConfigError("unknown encoding '" + s + "' (expected json or binary)");
}

int run_worldgen(const WorldgenArgs& a) {
  validate_generator(a.cfg);
  DatasetEncoding enc = encoding_from_string(a.encoding);
  fs::create_directories(a.out);
  const char* ext = enc == DatasetEncoding::Json ? ".worlds.json" : ".worlds.bin";
  struct Plan {
    Split split;
    int count;
  };
  const Plan plan[] = {{Split::Train, a.train_count},
                       {Split::Test, a.test_count},
                       {Split::Validation, a.val_count}};
  for (const Plan& p : plan) {
    if (p.count <= 0) continue;
    uint64_t split_seed =
        mix_stream({a.seed, kSplitLane, static_cast<uint64_t>(p.split)});
    WorldDataset ds = generate_dataset(a.cfg, p.count, split_seed, p.split);
    fs::path path = fs::path(a.out) / (to_string(p.split) + ext);
    save_dataset(ds, path.string(), enc);
    std::cout << "wrote " << path.string() << " (" << p.count << " worlds, seed "
              << split_seed << ")\n";
  }
  return 0;
}

struct TrainArgs {
  TrainConfig cfg;
  std::string algo = "reward-agg";
  std::string alpha_schedule = "classic";
  double fov_deg = 360.0;
  std::string train_path;
  std::string val_path;
  std::string out = "run";
};

AlphaSchedule::Kind schedule_from_string(const std::string& s) {
  if (s == "classic") return AlphaSchedule::Kind::Classic;
  if (s == "exponential") return AlphaSchedule::Kind::Exponential;
  throw ConfigError("unknown alpha schedule '" + s +
                    "' (expected classic or exponential)");
}

int run_train(const TrainArgs& a) {
  TrainConfig cfg = a.cfg;
  cfg.algorithm = algorithm_from_string(a.algo);
  cfg.alpha.kind = schedule_from_string(a.alpha_schedule);
  cfg.sensor.fov = fov_radians(a.fov_deg);
  cfg.problem.variant = variant_for_budget(cfg.problem.budget);
  cfg.threads = resolve_threads(cfg.threads);
  validate_train_config(cfg);
  WorldDataset train_worlds = load_dataset(a.train_path);
  WorldDataset val_worlds = load_dataset(a.val_path);
  fs::create_directories(a.out);

  TrainResult result = train(cfg, train_worlds, val_worlds);

  fs::path out(a.out);
  save_model(result.policy, (out / "model.json").string());
  write_report_csv(result.report, (out / "report.csv").string());
  write_report_text(result.report, (out / "report.txt").string());
  const auto& iters = result.report.iterations;
  std::cout << "trained " << to_string(cfg.algorithm) << ": "
            << result.report.total_examples << " examples over " << iters.size()
            << " iterations, selected iteration "
            << result.report.selected_iteration << " (val mean reward "
            << format_double(
                   iters.empty()
                       ? 0.0
                       : iters[static_cast<size_t>(
                                   result.report.selected_iteration - 1)]
                             .val_mean_reward)
            << ")\n"
            << "wrote " << (out / "model.json").string() << "\n"
            << "wrote " << (out / "report.csv").string() << "\n"
            << "wrote " << (out / "report.txt").string() << "\n";
  return 0;
}

struct EvalArgs {
  std::vector<std::string> policies;
  std::string worlds_path;
  std::string out = "eval";
  ProblemSpec problem;
  SensorConfig sensor;
  double fov_deg = 360.0;
  double lambda = -1.0;  // < 0 resolves to 0.05 budgeted, 0 unconstrained
  uint64_t seed = 7;
  int threads = 0;
};

int run_eval(const EvalArgs& a) {
  ProblemSpec spec = a.problem;
  spec.variant = variant_for_budget(spec.budget);
  validate_problem(spec);
  SensorConfig sensor = a.sensor;
  sensor.fov = fov_radians(a.fov_deg);
  validate_sensor(sensor);
  double lambda = a.lambda;
  if (lambda < 0.0) lambda = spec.variant == Variant::Budgeted ? 0.05 : 0.0;
  int threads = resolve_threads(a.threads);

  WorldDataset ds = load_dataset(a.worlds_path);
  fs::create_directories(a.out);
  fs::path out(a.out);

  std::vector<EvalSummary> summaries;
  std::set<std::string> used_labels;
  bool first = true;
  for (const std::string& name : a.policies) {
    std::unique_ptr<Policy> policy = make_policy(name, lambda);
    std::string label = policy->name();
    for (int k = 2; used_labels.count(label) != 0; ++k) {
      label = policy->name() + "-" + std::to_string(k);
    }
    used_labels.insert(label);

    EvalResult result = evaluate(*policy, ds, spec, sensor, a.seed, threads);
    result.summary.policy = label;
    for (Trajectory& traj : result.trajectories) traj.policy = label;

    fs::create_directories(out / label);
    write_curve_csv(result.summary, (out / label / "curve.csv").string());
    write_trajectories_jsonl(result.trajectories,
                             (out / "trajectories.jsonl").string(), !first);
    first = false;
    std::cout << "policy " << label << ": final mean "
              << format_double(result.summary.final_mean) << " +/- "
              << format_double(result.summary.final_ci_half) << " (n="
              << result.summary.n << ", "
              << format_double(result.summary.wall_clock_s) << "s)\n";
    summaries.push_back(std::move(result.summary));
  }
  write_final_csv(summaries, (out / "final.csv").string());
  std::cout << "wrote " << (out / "final.csv").string() << "\n"
            << "wrote " << (out / "trajectories.jsonl").string() << "\n";
  return 0;
}

struct VerifyArgs {
  std::string suite = "all";
  int count = 50;
  uint64_t seed = 7;
};

int run_verify(const VerifyArgs& a) {
  std::vector<VerifySuiteResult> results = run_verify_suites(a.suite, a.count, a.seed);
  print_verify_results(results, std::cout);
  return all_passed(results) ? 0 : 1;
}

std::string version_text() {
  std::string s = "scout ";
  s += kToolVersion;
  s += "\nworld-format ";
  s += std::to_string(kWorldFormatMajor) + "." + std::to_string(kWorldFormatMinor);
  s += "\nmodel-format ";
  s += std::to_string(kModelFormatMajor) + "." + std::to_string(kModelFormatMinor);
  return s;
}

// Strict config-file support per subcommand: keys mirror long option names,
// unknown keys are rejected, command-line flags win over file values.
void enable_config(CLI::App* cmd) {
  cmd->option_defaults()->always_capture_default(true);
  cmd->set_config("--config", "", "Read options from a TOML/INI file")
      ->check(CLI::ExistingFile);
  cmd->allow_config_extras(false);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scout: adaptive scanning on 2D occupancy grids (datasets, "
               "imitation training, evaluation, verification)"};
  app.set_version_flag("--version", version_text());
  app.require_subcommand(1);

  WorldgenArgs wg;
  CLI::App* wg_cmd = app.add_subcommand(
      "worldgen", "Generate train/test/validation world datasets");
  enable_config(wg_cmd);
  wg_cmd->add_option("--generator", wg.cfg.name,
                     "World family: parallel-lines, distributed-blocks, "
                     "poisson-forest");
  wg_cmd->add_option("--width", wg.cfg.dims.width, "Grid width in cells");
  wg_cmd->add_option("--height", wg.cfg.dims.height, "Grid height in cells");
  wg_cmd->add_option("--resolution", wg.cfg.resolution, "Cell edge length (m)");
  wg_cmd->add_option("--nodes", wg.cfg.node_count, "Nodes sampled per world");
  wg_cmd->add_option("--count", wg.train_count, "Worlds in the train split");
  wg_cmd->add_option("--test-count", wg.test_count, "Worlds in the test split");
  wg_cmd->add_option("--val-count", wg.val_count,
                     "Worlds in the validation split");
  wg_cmd->add_option("--seed", wg.seed, "Master seed; split seeds derive from it");
  wg_cmd->add_option("--out", wg.out, "Output directory (created if missing)");
  wg_cmd->add_option("--encoding", wg.encoding, "Dataset encoding: json, binary");
  wg_cmd->add_option("--line-min-length", wg.cfg.lines.min_length,
                     "parallel-lines: shortest segment (m)");
  wg_cmd->add_option("--line-max-length", wg.cfg.lines.max_length,
                     "parallel-lines: longest segment (m)");
  wg_cmd->add_option("--line-min-sep", wg.cfg.lines.min_separation,
                     "parallel-lines: smallest separation (m)");
  wg_cmd->add_option("--line-max-sep", wg.cfg.lines.max_separation,
                     "parallel-lines: largest separation (m)");
  wg_cmd->add_option("--min-blocks", wg.cfg.blocks.min_blocks,
                     "distributed-blocks: fewest rectangles");
  wg_cmd->add_option("--max-blocks", wg.cfg.blocks.max_blocks,
                     "distributed-blocks: most rectangles");
  wg_cmd->add_option("--block-min-half", wg.cfg.blocks.min_half_extent,
                     "distributed-blocks: smallest half-extent (cells)");
  wg_cmd->add_option("--block-max-half", wg.cfg.blocks.max_half_extent,
                     "distributed-blocks: largest half-extent (cells)");
  wg_cmd->add_option("--margin-fraction", wg.cfg.blocks.margin_fraction,
                     "distributed-blocks: border band holding block centers");
  wg_cmd->add_option("--intensity", wg.cfg.forest.intensity,
                     "poisson-forest: expected disks per square meter");
  wg_cmd->add_option("--disk-min-radius", wg.cfg.forest.min_radius,
                     "poisson-forest: smallest disk radius (m)");
  wg_cmd->add_option("--disk-max-radius", wg.cfg.forest.max_radius,
                     "poisson-forest: largest disk radius (m)");

  TrainArgs tr;
  CLI::App* tr_cmd =
      app.add_subcommand("train", "Train a scanning policy by imitation");
  enable_config(tr_cmd);
  tr_cmd->add_option("--algo", tr.algo,
                     "Trainer: reward-ft, qval-ft, reward-agg, qval-agg");
  tr_cmd->add_option("--train", tr.train_path, "Training world dataset")
      ->required()
      ->check(CLI::ExistingFile);
  tr_cmd->add_option("--val", tr.val_path, "Validation world dataset")
      ->required()
      ->check(CLI::ExistingFile);
  tr_cmd->add_option("--out", tr.out, "Output directory (created if missing)");
  tr_cmd->add_option("--iters", tr.cfg.iterations,
                     "Aggregation rounds (forward training uses --horizon)");
  tr_cmd->add_option("--episodes", tr.cfg.episodes_per_iter,
                     "Episodes rolled per iteration");
  tr_cmd->add_option("--labels-per-state", tr.cfg.labels_per_state,
                     "Random actions labeled per collected state");
  tr_cmd->add_option("--alpha-schedule", tr.alpha_schedule,
                     "Oracle roll-in mixing: classic, exponential");
  tr_cmd->add_option("--alpha-decay", tr.cfg.alpha.decay,
                     "Decay rate for the exponential schedule");
  tr_cmd->add_option("--horizon", tr.cfg.problem.horizon, "Actions per episode");
  tr_cmd->add_option("--budget", tr.cfg.problem.budget,
                     "Travel budget (m); finite implies the budgeted variant");
  tr_cmd->add_option("--rays", tr.cfg.sensor.num_rays, "Rays per scan");
  tr_cmd->add_option("--range", tr.cfg.sensor.max_range, "Sensor range (m)");
  tr_cmd->add_option("--fov-deg", tr.fov_deg, "Field of view (degrees)");
  tr_cmd->add_option("--trees", tr.cfg.forest.num_trees, "Forest size");
  tr_cmd->add_option("--max-depth", tr.cfg.forest.max_depth,
                     "Tree depth cap (<= 0 unlimited)");
  tr_cmd->add_option("--min-samples-leaf", tr.cfg.forest.min_samples_leaf,
                     "Smallest leaf size");
  tr_cmd->add_option("--feature-fraction", tr.cfg.forest.feature_fraction,
                     "Features tried per split (<= 0 picks sqrt(d)/d)");
  tr_cmd->add_option("--seed", tr.cfg.seed, "Master training seed");
  tr_cmd->add_option("--threads", tr.cfg.threads,
                     "Worker threads (0 = all cores); results independent");

  EvalArgs ev;
  CLI::App* ev_cmd =
      app.add_subcommand("eval", "Evaluate policies on a test dataset");
  enable_config(ev_cmd);
  ev_cmd->add_option("--worlds", ev.worlds_path, "Test world dataset")
      ->required()
      ->check(CLI::ExistingFile);
  ev_cmd
      ->add_option("--policy", ev.policies,
                   "Policy name (random, lowest-id, oracle-greedy, oracle-gcb, "
                   "average-entropy, rear-side-voxel, occlusion-aware, "
                   "unknown-count) or a model file path; repeatable")
      ->required();
  ev_cmd->add_option("--out", ev.out, "Output directory (created if missing)");
  ev_cmd->add_option("--horizon", ev.problem.horizon, "Actions per episode");
  ev_cmd->add_option("--budget", ev.problem.budget,
                     "Travel budget (m); finite implies the budgeted variant");
  ev_cmd->add_option("--lambda", ev.lambda,
                     "Heuristic motion penalty (< 0 picks 0.05 budgeted, "
                     "0 unconstrained)");
  ev_cmd->add_option("--rays", ev.sensor.num_rays, "Rays per scan");
  ev_cmd->add_option("--range", ev.sensor.max_range, "Sensor range (m)");
  ev_cmd->add_option("--fov-deg", ev.fov_deg, "Field of view (degrees)");
  ev_cmd->add_option("--seed", ev.seed, "Base seed for episode streams");
  ev_cmd->add_option("--threads", ev.threads,
                     "Worker threads (0 = all cores); results independent");

  VerifyArgs vf;
  CLI::App* vf_cmd = app.add_subcommand(
      "verify", "Run the exact reference suites and print a pass/fail table");
  enable_config(vf_cmd);
  vf_cmd->add_option("--suite", vf.suite,
                     "submodularity, lemma1, lemma2, greedy-ratio, posterior, "
                     "or all");
  vf_cmd->add_option("--count", vf.count, "Instances per suite");
  vf_cmd->add_option("--seed", vf.seed, "Master suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (wg_cmd->parsed()) {
      print_effective_config(*wg_cmd);
      return run_worldgen(wg);
    }
    if (tr_cmd->parsed()) {
      print_effective_config(*tr_cmd);
      return run_train(tr);
    }
    if (ev_cmd->parsed()) {
      print_effective_config(*ev_cmd);
      return run_eval(ev);
    }
    if (vf_cmd->parsed()) {
      print_effective_config(*vf_cmd);
      return run_verify(vf);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
