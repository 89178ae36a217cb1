#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "scout/errors.hpp"
#include "scout/learner.hpp"
#include "scout/rng.hpp"

using namespace scout;

namespace {

FeatureVector random_features(Pcg32& rng) {
  FeatureVector x{};
  for (double& v : x) v = rng.next_double();
  return x;
}

RegressionDataset random_dataset(Pcg32& rng, int n) {
  RegressionDataset d;
  for (int i = 0; i < n; ++i) {
    RegressionExample e;
    e.x = random_features(rng);
    e.y = rng.uniform(-2.0, 2.0);
    d.examples.push_back(e);
  }
  return d;
}

// Depth-unlimited memorization setup: single-sample leaves, identical trees.
ForestHyperparams memorizing_params(int num_trees) {
  ForestHyperparams h;
  h.num_trees = num_trees;
  h.max_depth = 0;
  h.min_samples_leaf = 1;
  h.feature_fraction = 1.0;
  h.bootstrap = false;
  return h;
}

}  // namespace

TEST_SUITE("learner") {

TEST_CASE("hyperparameter validation") {
  ForestHyperparams h;
  CHECK_NOTHROW(validate_hyperparams(h));
  h.num_trees = 0;
  CHECK_THROWS_AS(validate_hyperparams(h), ConfigError);
  h = ForestHyperparams{};
  h.min_samples_leaf = 0;
  CHECK_THROWS_AS(validate_hyperparams(h), ConfigError);
  h = ForestHyperparams{};
  h.feature_fraction = 1.5;
  CHECK_THROWS_AS(validate_hyperparams(h), ConfigError);
}

TEST_CASE("normalization maps the batch range onto [0,1] and freezes") {
  RegressionDataset d;
  for (double v : {2.0, 4.0, 6.0}) {
    RegressionExample e;
    e.x[0] = v;
    e.x[1] = 7.0;  // constant column
    e.y = v;
    d.examples.push_back(e);
  }
  FeatureNormalization norm = fit_normalization(d);
  FeatureVector probe{};
  probe[0] = 4.0;
  probe[1] = 7.0;
  FeatureVector out = norm.apply(probe);
  CHECK(out[0] == 0.5);
  CHECK(out[1] == 0.0);  // constant column: shifted to zero, scale 1
  probe[0] = 2.0;
  CHECK(norm.apply(probe)[0] == 0.0);
  probe[0] = 6.0;
  CHECK(norm.apply(probe)[0] == 1.0);

  // Frozen normalization is stored verbatim by later fits.
  Pcg32 rng(1, 0);
  RegressionDataset big = random_dataset(rng, 50);
  ForestModel m = fit_forest(big, ForestHyperparams{}, 3, &norm);
  CHECK(m.normalization == norm);
}

TEST_CASE("constant targets predict the constant everywhere") {
  RegressionDataset d;
  Pcg32 rng(2, 0);
  for (int i = 0; i < 40; ++i) {
    RegressionExample e;
    e.x = random_features(rng);
    e.y = 0.37;
    d.examples.push_back(e);
  }
  ForestModel m = fit_forest(d, ForestHyperparams{}, 11);
  for (int i = 0; i < 20; ++i) {
    CHECK(predict(m, random_features(rng)) == doctest::Approx(0.37).epsilon(1e-12));
  }
}

TEST_CASE("a one-feature step function is learned exactly") {
  RegressionDataset d;
  Pcg32 rng(3, 0);
  for (int i = 0; i < 100; ++i) {
    RegressionExample e;
    e.x = random_features(rng);
    e.x[0] = (i % 2 == 0) ? rng.uniform(0.0, 0.45) : rng.uniform(0.55, 1.0);
    e.y = e.x[0] < 0.5 ? 0.0 : 1.0;
    d.examples.push_back(e);
  }
  ForestHyperparams h;
  h.num_trees = 4;
  h.max_depth = 4;
  h.min_samples_leaf = 1;
  h.feature_fraction = 1.0;
  h.bootstrap = false;
  ForestModel m = fit_forest(d, h, 5);

  FeatureVector probe{};
  for (double v : {0.1, 0.3, 0.44}) {
    probe[0] = v;
    CHECK(predict(m, probe) == 0.0);
  }
  for (double v : {0.56, 0.7, 0.99}) {
    probe[0] = v;
    CHECK(predict(m, probe) == 1.0);
  }
}

TEST_CASE("depth-unlimited single-sample leaves memorize training data") {
  Pcg32 rng(4, 0);
  RegressionDataset d = random_dataset(rng, 64);

  // One tree: every training row lands in its own leaf whose value is the
  // row target itself, so prediction is bit-exact and the MSE is zero.
  ForestModel single = fit_forest(d, memorizing_params(1), 7);
  double mse = 0.0;
  for (const RegressionExample& e : d.examples) {
    double p = predict(single, e.x);
    CHECK(p == e.y);
    mse += (p - e.y) * (p - e.y);
  }
  CHECK(mse == 0.0);

  // Several identical trees: averaging equal leaf values can round in the
  // last bits, nothing more.
  ForestModel forest = fit_forest(d, memorizing_params(8), 7);
  for (const RegressionExample& e : d.examples) {
    CHECK(predict(forest, e.x) == doctest::Approx(e.y).epsilon(1e-14));
  }
}

TEST_CASE("prediction stays within the training target range") {
  Pcg32 rng(5, 0);
  RegressionDataset d = random_dataset(rng, 80);
  double lo = 1e300;
  double hi = -1e300;
  for (const auto& e : d.examples) {
    lo = std::min(lo, e.y);
    hi = std::max(hi, e.y);
  }
  ForestModel m = fit_forest(d, ForestHyperparams{}, 9);
  for (int i = 0; i < 50; ++i) {
    double p = predict(m, random_features(rng));
    CHECK(p >= lo - 1e-12);
    CHECK(p <= hi + 1e-12);
  }
}

TEST_CASE("fitting is deterministic and tree order cannot matter") {
  Pcg32 rng(6, 0);
  RegressionDataset d = random_dataset(rng, 60);
  ForestHyperparams h;
  h.num_trees = 7;
  ForestModel a = fit_forest(d, h, 13);
  ForestModel b = fit_forest(d, h, 13);
  CHECK(a == b);

  ForestModel c = fit_forest(d, h, 14);
  CHECK(!(a == c));

  // Reversing the tree vector leaves predictions bit-identical (sorted sum).
  ForestModel rev = a;
  std::reverse(rev.trees.begin(), rev.trees.end());
  for (int i = 0; i < 40; ++i) {
    FeatureVector x = random_features(rng);
    CHECK(predict(rev, x) == predict(a, x));
  }
}

TEST_CASE("weights tilt leaf means toward heavy examples") {
  // Two examples in one inevitable leaf: weighted mean 0.75.
  RegressionDataset d;
  RegressionExample a;
  a.x[0] = 0.5;
  a.y = 1.0;
  a.weight = 3.0;
  RegressionExample b;
  b.x[0] = 0.5;
  b.y = 0.0;
  b.weight = 1.0;
  d.examples = {a, b};
  ForestHyperparams h;
  h.num_trees = 1;
  h.min_samples_leaf = 1;
  h.bootstrap = false;
  h.feature_fraction = 1.0;
  ForestModel m = fit_forest(d, h, 1);
  FeatureVector probe{};
  probe[0] = 0.5;
  CHECK(predict(m, probe) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("empty dataset refuses to fit") {
  RegressionDataset d;
  CHECK_THROWS_AS(fit_forest(d, ForestHyperparams{}, 1), EmptyDatasetError);
}

TEST_CASE("model_for picks the stationary model or the timestep model") {
  Pcg32 rng(8, 0);
  RegressionDataset d = random_dataset(rng, 30);
  ForestHyperparams h;
  h.num_trees = 2;

  LearntPolicyModel stationary;
  stationary.models.push_back(fit_forest(d, h, 1));
  stationary.stationary = true;
  CHECK(&stationary.model_for(1) == &stationary.models[0]);
  CHECK(&stationary.model_for(9) == &stationary.models[0]);

  LearntPolicyModel forward;
  forward.stationary = false;
  forward.horizon = 3;
  for (uint64_t s = 1; s <= 3; ++s) forward.models.push_back(fit_forest(d, h, s));
  CHECK(&forward.model_for(1) == &forward.models[0]);
  CHECK(&forward.model_for(3) == &forward.models[2]);
  // Beyond-horizon queries reuse the last model.
  CHECK(&forward.model_for(7) == &forward.models[2]);
}

TEST_CASE("argmax of the policy is invariant to a constant leaf offset") {
  Pcg32 rng(9, 0);
  RegressionDataset d = random_dataset(rng, 60);
  ForestHyperparams h;
  h.num_trees = 5;
  LearntPolicyModel policy;
  policy.models.push_back(fit_forest(d, h, 21));
  policy.stationary = true;

  LearntPolicyModel shifted = policy;
  for (Tree& tree : shifted.models[0].trees) {
    for (TreeNode& n : tree.nodes) {
      if (n.feature < 0) n.value += 1000.0;
    }
  }

  Belief b = make_belief(8, 8, 1.0);
  NodeSet ns;
  for (int i = 0; i < 5; ++i) {
    ns.nodes.push_back({i, 0.5 + i * 1.5, 0.5 + (i % 3), 0.4 * i});
  }
  ns.start_id = 0;
  CoverageState s;
  s.visited = {0};
  s.visited_mask.assign(5, 0);
  s.visited_mask[0] = 1;
  s.current = 0;
  s.covered = CellSet(64);
  ProblemSpec spec;
  SensorConfig sensor;
  sensor.num_rays = 8;
  sensor.max_range = 2.0;
  std::vector<int> feasible{1, 2, 3, 4};

  for (int t = 1; t <= 3; ++t) {
    CHECK(policy_act(policy, b, s, ns, spec, sensor, feasible, t) ==
          policy_act(shifted, b, s, ns, spec, sensor, feasible, t));
  }
  CHECK_THROWS_AS(policy_act(policy, b, s, ns, spec, sensor, {}, 1),
                  NoFeasibleActionError);
}

}  // TEST_SUITE
