#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scout/belief.hpp"

namespace scout {

struct RegressionExample {
  FeatureVector x{};
  double y = 0.0;
  double weight = 1.0;
};

struct RegressionDataset {
  std::vector<RegressionExample> examples;

  int size() const { return static_cast<int>(examples.size()); }
  void append(const RegressionDataset& other);
};

struct ForestHyperparams {
  int num_trees = 50;
  int max_depth = 12;          // <= 0 means unlimited
  int min_samples_leaf = 5;
  double feature_fraction = 0.0;  // <= 0 picks sqrt(d)/d automatically
  bool bootstrap = true;

  bool operator==(const ForestHyperparams&) const = default;
};

void validate_hyperparams(const ForestHyperparams& h);

// Min/max rescaling fitted on the first training batch and frozen for every
// later refit, so aggregated iterations share one input scale.
struct FeatureNormalization {
  std::array<double, kFeatureCount> shift{};
  std::array<double, kFeatureCount> scale{};  // 1 where the batch was constant

  FeatureVector apply(const FeatureVector& x) const;
  bool operator==(const FeatureNormalization&) const = default;
};

FeatureNormalization fit_normalization(const RegressionDataset& data);

// One tree, flattened. feature < 0 marks a leaf; interior nodes route
// x[feature] <= threshold to `left`, else `right`.
struct TreeNode {
  int16_t feature = -1;
  double threshold = 0.0;
  int32_t left = -1;
  int32_t right = -1;
  double value = 0.0;

  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at 0

  double predict(const FeatureVector& x) const;
  bool operator==(const Tree&) const = default;
};

struct ForestModel {
  ForestHyperparams hyperparams;
  FeatureNormalization normalization;
  uint64_t seed = 0;
  std::vector<Tree> trees;

  bool operator==(const ForestModel&) const = default;
};

// Fits a forest on raw features. When `frozen` is given it is stored and
// applied instead of fitting fresh normalization. Deterministic in (data,
// hyperparams, seed); per-tree randomness comes from child streams, so tree
// construction order cannot change results. Throws EmptyDatasetError on an
// empty dataset.
ForestModel fit_forest(const RegressionDataset& data, const ForestHyperparams& h,
                       uint64_t seed, const FeatureNormalization* frozen = nullptr);

// Mean over trees; per-tree outputs are summed in sorted order so the result
// is invariant to tree permutation.
double predict(const ForestModel& model, const FeatureVector& x);

// Policy wrapper: one model for stationary policies, one per timestep for
// the forward-trained non-stationary family.
struct LearntPolicyModel {
  std::vector<ForestModel> models;
  bool stationary = true;
  int horizon = 0;  // length of `models` when non-stationary

  const ForestModel& model_for(int t) const;  // t is 1-based
  bool operator==(const LearntPolicyModel&) const = default;
};

// Argmax of predicted score over `feasible` (ascending, first maximum).
int policy_act(const LearntPolicyModel& policy, const Belief& belief,
               const CoverageState& state, const NodeSet& nodes,
               const ProblemSpec& spec, const SensorConfig& sensor,
               std::span<const int> feasible, int t);

// Versioned JSON model container: format version, feature schema, forest
// hyperparameters, normalization, seed, flattened trees. Loading rejects a
// newer format (FormatError) and any feature schema that differs from the
// current extractor (SchemaMismatchError).
void save_model(const LearntPolicyModel& policy, const std::string& path);
LearntPolicyModel load_model(const std::string& path);

}  // namespace scout
