#pragma once

#include <memory>
#include <span>
#include <string>

#include "scout/baselines.hpp"
#include "scout/belief.hpp"
#include "scout/learner.hpp"
#include "scout/oracles.hpp"
#include "scout/rng.hpp"
#include "scout/utility.hpp"

namespace scout {

// Everything a policy may look at when choosing the next node. Belief-based
// policies read `belief`; clairvoyant oracles read `index` (the hidden
// world). `t` is the 1-based index of the action about to be taken.
struct StepContext {
  const CoverageState& state;
  const Belief& belief;
  const CoverageIndex& index;
  const NodeSet& nodes;
  const ProblemSpec& spec;
  const SensorConfig& sensor;
  std::span<const int> feasible;  // ascending, never empty
  int t = 1;
  int steps_remaining = 1;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  // Called once before each episode; stochastic policies reseed here.
  virtual void begin_episode(uint64_t /*seed*/) {}
  virtual int act(const StepContext& ctx) = 0;
  // Evaluation clones one policy per worker thread.
  virtual std::unique_ptr<Policy> clone() const = 0;
};

// Uniform over the feasible set.
class RandomPolicy final : public Policy {
 public:
  std::string name() const override { return "random"; }
  void begin_episode(uint64_t seed) override { rng_ = Pcg32(seed, 0x52414e44); }
  int act(const StepContext& ctx) override {
    return ctx.feasible[rng_.bounded(static_cast<uint32_t>(ctx.feasible.size()))];
  }
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<RandomPolicy>(*this);
  }

 private:
  Pcg32 rng_;
};

// Always the smallest feasible id; a trivially deterministic belief policy.
class LowestIdPolicy final : public Policy {
 public:
  std::string name() const override { return "lowest-id"; }
  int act(const StepContext& ctx) override { return ctx.feasible.front(); }
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<LowestIdPolicy>(*this);
  }
};

class HeuristicPolicy final : public Policy {
 public:
  explicit HeuristicPolicy(HeuristicConfig cfg) : cfg_(cfg) {}
  std::string name() const override { return to_string(cfg_.metric); }
  int act(const StepContext& ctx) override {
    return heuristic_act(cfg_, ctx.belief, ctx.state, ctx.nodes, ctx.spec,
                         ctx.sensor, ctx.feasible);
  }
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<HeuristicPolicy>(*this);
  }

 private:
  HeuristicConfig cfg_;
};

class LearntPolicy final : public Policy {
 public:
  LearntPolicy(LearntPolicyModel model, std::string name)
      : model_(std::move(model)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  const LearntPolicyModel& model() const { return model_; }
  int act(const StepContext& ctx) override {
    return policy_act(model_, ctx.belief, ctx.state, ctx.nodes, ctx.spec,
                      ctx.sensor, ctx.feasible, ctx.t);
  }
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<LearntPolicy>(*this);
  }

 private:
  LearntPolicyModel model_;
  std::string name_;
};

// Builds a policy from a CLI-facing name (random, lowest-id, oracle-greedy,
// oracle-gcb, the four heuristics) or, failing those, a model file path.
// `motion_penalty` applies to heuristic policies only.
std::unique_ptr<Policy> make_policy(const std::string& name, double motion_penalty);

// Clairvoyant upper-reference policies; they read the hidden world.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(OracleKind kind) : kind_(kind) {}
  std::string name() const override {
    return kind_ == OracleKind::Greedy ? "oracle-greedy" : "oracle-gcb";
  }
  int act(const StepContext& ctx) override {
    return oracle_act(kind_, ctx.state, ctx.index, ctx.nodes, ctx.spec,
                      ctx.steps_remaining);
  }
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<OraclePolicy>(*this);
  }

 private:
  OracleKind kind_;
};

}  // namespace scout
