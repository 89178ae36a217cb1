#pragma once

#include <vector>

#include "scout/utility.hpp"

namespace scout {

// Clairvoyant oracles: planners that read the hidden world through a
// CoverageIndex. They supply imitation targets; deployed policies never
// touch them.
enum class OracleKind { Greedy, Gcb };

// Single greedy step: unvisited feasible node with the largest marginal
// coverage (exact cell counts); lowest id wins ties. Throws
// NoFeasibleActionError when nothing is feasible.
int greedy_step(const CoverageState& s, const CoverageIndex& index,
                const NodeSet& nodes, const ProblemSpec& spec);

// Multi-step route from a cost-benefit planner.
struct OraclePlan {
  std::vector<int> nodes;       // in execution order, no duplicates
  std::vector<double> gains;    // marginal coverage of each step
  double total_cost = 0.0;      // travel along the plan, within budget
};

// Cost-benefit route: repeatedly appends the feasible node maximizing
// marginal gain per unit travel (ratios compared exactly by cross
// multiplication), stopping at the horizon, the budget, or zero gain. The
// result is checked against the best single node by total gain; the
// singleton replaces the route only when strictly better. An empty plan
// means no feasible step gains anything.
OraclePlan gcb_plan(const CoverageState& s, const CoverageIndex& index,
                    const NodeSet& nodes, const ProblemSpec& spec,
                    int steps_remaining);

// Oracle action for the current state: the greedy step, or the first node
// of a fresh cost-benefit route (falling back to the lowest feasible id
// when the route is empty).
int oracle_act(OracleKind kind, const CoverageState& s, const CoverageIndex& index,
               const NodeSet& nodes, const ProblemSpec& spec, int steps_remaining);

// Reward-to-go of taking `action` now and following the oracle for the
// remaining steps (the cost-benefit oracle replans after every move).
// `steps_remaining` counts the action itself and must be >= 1.
double q_value_to_go(OracleKind kind, const CoverageState& s,
                     const CoverageIndex& index, const NodeSet& nodes,
                     const ProblemSpec& spec, int action, int steps_remaining);

}  // namespace scout
