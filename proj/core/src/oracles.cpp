#include "scout/oracles.hpp"

#include "scout/errors.hpp"

namespace scout {

int greedy_step(const CoverageState& s, const CoverageIndex& index,
                const NodeSet& nodes, const ProblemSpec& spec) {
  std::vector<int> feasible = feasible_actions(s, nodes, spec);
  if (feasible.empty()) throw NoFeasibleActionError("greedy oracle has no feasible action");
  int best = feasible.front();
  int best_gain = -1;
  for (int id : feasible) {
    int gain = marginal_gain_cells(id, s, index);
    if (gain > best_gain) {
      best_gain = gain;
      best = id;
    }
  }
  return best;
}

namespace {

// Ratio compare without division: gain_a / len_a > gain_b / len_b. A zero
// length with positive gain dominates everything else.
bool better_ratio(int gain_a, double len_a, int gain_b, double len_b) {
  return static_cast<double>(gain_a) * len_b > static_cast<double>(gain_b) * len_a;
}

}  // namespace

OraclePlan gcb_plan(const CoverageState& s, const CoverageIndex& index,
                    const NodeSet& nodes, const ProblemSpec& spec,
                    int steps_remaining) {
  if (steps_remaining < 0) throw ConfigError("steps_remaining must be >= 0");
  if (feasible_actions(s, nodes, spec).empty()) {
    throw NoFeasibleActionError("cost-benefit oracle has no feasible action");
  }

  OraclePlan plan;
  CoverageState sim = s;
  int plan_gain_cells = 0;
  for (int step = 0; step < steps_remaining; ++step) {
    std::vector<int> feasible = feasible_actions(sim, nodes, spec);
    int best = -1;
    int best_gain = 0;
    double best_len = 0.0;
    for (int id : feasible) {
      int gain = marginal_gain_cells(id, sim, index);
      double len = node_distance(nodes, sim.current, id);
      if (best < 0 || better_ratio(gain, len, best_gain, best_len)) {
        best = id;
        best_gain = gain;
        best_len = len;
      }
    }
    if (best < 0 || best_gain == 0) break;
    plan.nodes.push_back(best);
    plan.gains.push_back(static_cast<double>(best_gain) / index.denominator);
    plan.total_cost += best_len;
    plan_gain_cells += best_gain;
    apply_action(sim, best, index, nodes);
  }

  // Classic cost-benefit safeguard: a single high-gain node can beat the
  // whole ratio-greedy route.
  if (steps_remaining > 0) {
    std::vector<int> feasible = feasible_actions(s, nodes, spec);
    int single = -1;
    int single_gain = -1;
    for (int id : feasible) {
      int gain = marginal_gain_cells(id, s, index);
      if (gain > single_gain) {
        single_gain = gain;
        single = id;
      }
    }
    if (single >= 0 && single_gain > plan_gain_cells) {
      OraclePlan alt;
      alt.nodes = {single};
      alt.gains = {static_cast<double>(single_gain) / index.denominator};
      alt.total_cost = node_distance(nodes, s.current, single);
      return alt;
    }
  }
  return plan;
}

int oracle_act(OracleKind kind, const CoverageState& s, const CoverageIndex& index,
               const NodeSet& nodes, const ProblemSpec& spec, int steps_remaining) {
  if (kind == OracleKind::Greedy) return greedy_step(s, index, nodes, spec);
  OraclePlan plan = gcb_plan(s, index, nodes, spec, steps_remaining);
  if (!plan.nodes.empty()) return plan.nodes.front();
  return feasible_actions(s, nodes, spec).front();
}

double q_value_to_go(OracleKind kind, const CoverageState& s,
                     const CoverageIndex& index, const NodeSet& nodes,
                     const ProblemSpec& spec, int action, int steps_remaining) {
  if (steps_remaining < 1) throw ConfigError("q_value_to_go needs steps_remaining >= 1");
  CoverageState sim = s;
  double total = reward(sim, index, action);
  apply_action(sim, action, index, nodes);
  for (int k = 1; k < steps_remaining; ++k) {
    if (feasible_actions(sim, nodes, spec).empty()) break;
    int a = oracle_act(kind, sim, index, nodes, spec, steps_remaining - k);
    total += reward(sim, index, a);
    apply_action(sim, a, index, nodes);
  }
  return total;
}

}  // namespace scout
