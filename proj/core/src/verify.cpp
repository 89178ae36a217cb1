#include "scout/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "scout/errors.hpp"
#include "scout/eval.hpp"
#include "scout/reference.hpp"
#include "scout/rng.hpp"

namespace scout {

namespace {

constexpr double kGapTol = 1e-9;
constexpr double kSumTol = 1e-12;
// 1 - 1/e, the near-optimality constant for greedy coverage.
const double kGreedyRatio = 1.0 - std::exp(-1.0);

void record(VerifySuiteResult& r, bool ok, double gap, uint64_t seed) {
  ++r.checks;
  r.worst_gap = std::max(r.worst_gap, gap);
  if (!ok) {
    if (r.failures == 0) r.first_failing_seed = seed;
    ++r.failures;
  }
}

// A <= B <= all nodes, drawn by prefix splits of a shuffled id list.
VerifySuiteResult run_submodularity(int count, uint64_t seed) {
  VerifySuiteResult r{"submodularity"};
  for (int i = 0; i < count; ++i) {
    uint64_t s = mix_stream({seed, 0x5355424d, static_cast<uint64_t>(i)});
    TinyEnsemble ens = make_tiny_ensemble(s);
    const CoverageIndex& index = ens.indices.front();
    Pcg32 rng(s, 0x545249);

    std::vector<int> ids;
    for (int id = 0; id < ens.nodes.size(); ++id) {
      if (id != ens.nodes.start_id) ids.push_back(id);
    }
    rng.shuffle(ids);
    int v = ids.back();
    ids.pop_back();
    int b_len = static_cast<int>(rng.bounded(static_cast<uint32_t>(ids.size() + 1)));
    int a_len = static_cast<int>(rng.bounded(static_cast<uint32_t>(b_len + 1)));

    std::vector<int> small = {ens.nodes.start_id};
    std::vector<int> large = {ens.nodes.start_id};
    for (int k = 0; k < b_len; ++k) {
      if (k < a_len) small.push_back(ids[static_cast<size_t>(k)]);
      large.push_back(ids[static_cast<size_t>(k)]);
    }

    CoverageState sa = state_for_path(small, index, ens.nodes);
    CoverageState sb = state_for_path(large, index, ens.nodes);
    int gain_small = marginal_gain_cells(v, sa, index);
    int gain_large = marginal_gain_cells(v, sb, index);
    bool ok = gain_small >= gain_large && gain_large >= 0 &&
              sb.covered.count() >= sa.covered.count();
    record(r, ok, 0.0, s);
  }
  return r;
}

VerifySuiteResult run_lemma1(int count, uint64_t seed) {
  VerifySuiteResult r{"lemma1"};
  for (int i = 0; i < count; ++i) {
    uint64_t s = mix_stream({seed, 0x4c454d31, static_cast<uint64_t>(i)});
    TinyEnsemble ens = make_tiny_ensemble(s);

    LowestIdPolicy lowest;
    HeuristicPolicy entropy(HeuristicConfig{HeuristicMetric::AverageEntropy, 0.0});
    RandomPolicy random;
    Policy* rollins[] = {&lowest, &entropy, &random};
    for (Policy* rollin : rollins) {
      Lemma1Scan scan = lemma1_scan(ens, *rollin, s, OracleKind::Greedy);
      record(r, scan.max_gap <= kGapTol, scan.max_gap, s);
    }
  }
  return r;
}

VerifySuiteResult run_lemma2(int count, uint64_t seed) {
  VerifySuiteResult r{"lemma2"};
  for (int i = 0; i < count; ++i) {
    uint64_t s = mix_stream({seed, 0x4c454d32, static_cast<uint64_t>(i)});
    TinyEnsemble ens = make_tiny_ensemble(s);
    double greedy = hallucinating_policy_value(ens, OracleKind::Greedy, 1);
    double optimal = optimal_adaptive_value(ens);
    double bound = kGreedyRatio * optimal;
    bool ok = greedy >= bound - kSumTol;
    record(r, ok, std::max(0.0, bound - greedy), s);
  }
  return r;
}

VerifySuiteResult run_greedy_ratio(int count, uint64_t seed) {
  VerifySuiteResult r{"greedy-ratio"};
  for (int i = 0; i < count; ++i) {
    uint64_t s = mix_stream({seed, 0x47524154, static_cast<uint64_t>(i)});
    TinyEnsemble ens = make_tiny_ensemble(s);
    // Known-world check: greedy path vs exhaustive optimum, world 0.
    const CoverageIndex& index = ens.indices.front();
    CoverageState state = initial_state(index, ens.nodes);
    int base = state.covered.count();
    for (int t = 0; t < ens.spec.horizon; ++t) {
      if (feasible_actions(state, ens.nodes, ens.spec).empty()) break;
      apply_action(state, greedy_step(state, index, ens.nodes, ens.spec), index,
                   ens.nodes);
    }
    double greedy_gain = static_cast<double>(state.covered.count() - base) /
                         index.denominator;
    BruteForceResult best = brute_force_path(index, ens.nodes, ens.spec);
    double bound = kGreedyRatio * best.gain;
    bool ok = greedy_gain >= bound - kSumTol;
    record(r, ok, std::max(0.0, bound - greedy_gain), s);
  }
  return r;
}

VerifySuiteResult run_posterior(int count, uint64_t seed) {
  VerifySuiteResult r{"posterior"};
  for (int i = 0; i < count; ++i) {
    uint64_t s = mix_stream({seed, 0x504f5354, static_cast<uint64_t>(i)});
    TinyEnsemble ens = make_tiny_ensemble(s);
    int truth = static_cast<int>(s % static_cast<uint64_t>(ens.size()));

    Episode ep(ens.worlds[static_cast<size_t>(truth)], ens.nodes,
               ens.indices[static_cast<size_t>(truth)], ens.sensor, ens.spec);
    RandomPolicy policy;
    policy.begin_episode(s);
    bool ok = true;
    double worst = 0.0;
    for (;;) {
      std::vector<double> w = exact_posterior(ens, ep.belief());
      double sum = 0.0;
      double support_weight = -1.0;
      for (double x : w) {
        sum += x;
        if (x > 0.0) {
          if (support_weight < 0.0) support_weight = x;
          if (x != support_weight) ok = false;  // uniform over the support
        }
      }
      worst = std::max(worst, std::abs(sum - 1.0));
      if (w[static_cast<size_t>(truth)] == 0.0) ok = false;
      if (std::abs(sum - 1.0) > kSumTol) ok = false;
      if (ep.done()) break;
      StepContext ctx{ep.state(),    ep.belief(), ens.indices[static_cast<size_t>(truth)],
                      ens.nodes,     ens.spec,    ens.sensor,
                      ep.feasible(), ep.t_next(), ep.steps_remaining()};
      ep.step(policy.act(ctx));
    }
    record(r, ok, worst, s);
  }
  return r;
}

}  // namespace

std::vector<VerifySuiteResult> run_verify_suites(const std::string& suite,
                                                 int count, uint64_t seed) {
  if (count < 1) throw ConfigError("verify count must be >= 1");
  std::vector<VerifySuiteResult> results;
  bool all = suite == "all";
  bool known = all;
  if (all || suite == "submodularity") {
    results.push_back(run_submodularity(count, seed));
    known = true;
  }
  if (all || suite == "lemma1") {
    results.push_back(run_lemma1(count, seed));
    known = true;
  }
  if (all || suite == "lemma2") {
    results.push_back(run_lemma2(count, seed));
    known = true;
  }
  if (all || suite == "greedy-ratio") {
    results.push_back(run_greedy_ratio(count, seed));
    known = true;
  }
  if (all || suite == "posterior") {
    results.push_back(run_posterior(count, seed));
    known = true;
  }
  if (!known) throw ConfigError("unknown verify suite: " + suite);
  return results;
}

void print_verify_results(const std::vector<VerifySuiteResult>& results,
                          std::ostream& out) {
  out << "suite            checks  failures  worst_gap\n";
  for (const VerifySuiteResult& r : results) {
    out << std::left << std::setw(17) << r.suite << std::setw(8) << r.checks
        << std::setw(10) << r.failures << format_double(r.worst_gap);
    if (r.failures > 0) out << "  first_failing_seed=" << r.first_failing_seed;
    out << (r.failures == 0 ? "  PASS" : "  FAIL") << '\n';
  }
}

bool all_passed(const std::vector<VerifySuiteResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const VerifySuiteResult& r) { return r.failures == 0; });
}

}  // namespace scout
