#include "scout/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scout/errors.hpp"
#include "scout/rng.hpp"

namespace scout {

void RegressionDataset::append(const RegressionDataset& other) {
  examples.insert(examples.end(), other.examples.begin(), other.examples.end());
}

void validate_hyperparams(const ForestHyperparams& h) {
  if (h.num_trees < 1) throw ConfigError("num_trees must be >= 1");
  if (h.min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
  if (h.feature_fraction > 1.0) throw ConfigError("feature_fraction must be <= 1");
}

FeatureVector FeatureNormalization::apply(const FeatureVector& x) const {
  FeatureVector out{};
  for (int i = 0; i < kFeatureCount; ++i) {
    out[static_cast<size_t>(i)] =
        (x[static_cast<size_t>(i)] - shift[static_cast<size_t>(i)]) /
        scale[static_cast<size_t>(i)];
  }
  return out;
}

FeatureNormalization fit_normalization(const RegressionDataset& data) {
  if (data.examples.empty()) throw EmptyDatasetError("cannot fit normalization on empty data");
  FeatureNormalization n;
  FeatureVector lo = data.examples.front().x;
  FeatureVector hi = data.examples.front().x;
  for (const RegressionExample& e : data.examples) {
    for (int i = 0; i < kFeatureCount; ++i) {
      lo[static_cast<size_t>(i)] = std::min(lo[static_cast<size_t>(i)], e.x[static_cast<size_t>(i)]);
      hi[static_cast<size_t>(i)] = std::max(hi[static_cast<size_t>(i)], e.x[static_cast<size_t>(i)]);
    }
  }
  for (int i = 0; i < kFeatureCount; ++i) {
    n.shift[static_cast<size_t>(i)] = lo[static_cast<size_t>(i)];
    double span = hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)];
    n.scale[static_cast<size_t>(i)] = span > 0.0 ? span : 1.0;
  }
  return n;
}

double Tree::predict(const FeatureVector& x) const {
  int i = 0;
  while (nodes[static_cast<size_t>(i)].feature >= 0) {
    const TreeNode& n = nodes[static_cast<size_t>(i)];
    i = x[static_cast<size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<size_t>(i)].value;
}

namespace {

struct TreeBuilder {
  const std::vector<FeatureVector>& xs;
  const std::vector<double>& ys;
  const std::vector<double>& ws;
  const ForestHyperparams& h;
  int k_features;
  Pcg32& rng;
  std::vector<TreeNode> nodes;
  std::vector<int> scratch;  // feature id pool for subsampling

  // Candidate features for one node: k distinct ids, examined in ascending
  // order so split ties resolve to the lowest feature.
  std::vector<int> sample_features() {
    for (int i = 0; i < kFeatureCount; ++i) scratch[static_cast<size_t>(i)] = i;
    std::vector<int> picked(static_cast<size_t>(k_features));
    for (int i = 0; i < k_features; ++i) {
      uint32_t j = i + rng.bounded(static_cast<uint32_t>(kFeatureCount - i));
      std::swap(scratch[static_cast<size_t>(i)], scratch[static_cast<size_t>(j)]);
      picked[static_cast<size_t>(i)] = scratch[static_cast<size_t>(i)];
    }
    std::sort(picked.begin(), picked.end());
    return picked;
  }

  int build(std::vector<int>& idx, int lo, int hi, int depth) {
    int me = static_cast<int>(nodes.size());
    nodes.emplace_back();

    int n = hi - lo;
    double sw = 0.0, swy = 0.0, swy2 = 0.0;
    for (int i = lo; i < hi; ++i) {
      int j = idx[static_cast<size_t>(i)];
      double w = ws[static_cast<size_t>(j)];
      double y = ys[static_cast<size_t>(j)];
      sw += w;
      swy += w * y;
      swy2 += w * y * y;
    }
    double mean = swy / sw;
    double sse = swy2 - swy * swy / sw;

    bool can_split = n >= 2 * h.min_samples_leaf && sse > 0.0 &&
                     (h.max_depth <= 0 || depth < h.max_depth);
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = 0.0;
    if (can_split) {
      std::vector<std::pair<double, int>> order(static_cast<size_t>(n));
      for (int f : sample_features()) {
        for (int i = 0; i < n; ++i) {
          int j = idx[static_cast<size_t>(lo + i)];
          order[static_cast<size_t>(i)] = {xs[static_cast<size_t>(j)][static_cast<size_t>(f)], j};
        }
        std::sort(order.begin(), order.end());
        double wl = 0.0, wyl = 0.0, wy2l = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
          int j = order[static_cast<size_t>(i)].second;
          double w = ws[static_cast<size_t>(j)];
          double y = ys[static_cast<size_t>(j)];
          wl += w;
          wyl += w * y;
          wy2l += w * y * y;
          double v = order[static_cast<size_t>(i)].first;
          double v_next = order[static_cast<size_t>(i + 1)].first;
          if (!(v < v_next)) continue;
          int nl = i + 1;
          int nr = n - nl;
          if (nl < h.min_samples_leaf || nr < h.min_samples_leaf) continue;
          double wr = sw - wl;
          double sse_l = wy2l - wyl * wyl / wl;
          double sse_r = (swy2 - wy2l) - (swy - wyl) * (swy - wyl) / wr;
          double gain = sse - sse_l - sse_r;
          if (gain > best_gain) {
            best_gain = gain;
            best_feature = f;
            best_threshold = (v + v_next) / 2.0;
          }
        }
      }
    }

    if (best_feature < 0) {
      nodes[static_cast<size_t>(me)].feature = -1;
      nodes[static_cast<size_t>(me)].value = mean;
      return me;
    }

    auto goes_left = [&](int j) {
      return xs[static_cast<size_t>(j)][static_cast<size_t>(best_feature)] <= best_threshold;
    };
    auto mid_it = std::stable_partition(idx.begin() + lo, idx.begin() + hi, goes_left);
    int mid = static_cast<int>(mid_it - idx.begin());

    nodes[static_cast<size_t>(me)].feature = static_cast<int16_t>(best_feature);
    nodes[static_cast<size_t>(me)].threshold = best_threshold;
    int l = build(idx, lo, mid, depth + 1);
    int r = build(idx, mid, hi, depth + 1);
    nodes[static_cast<size_t>(me)].left = l;
    nodes[static_cast<size_t>(me)].right = r;
    return me;
  }
};

}  // namespace

ForestModel fit_forest(const RegressionDataset& data, const ForestHyperparams& h,
                       uint64_t seed, const FeatureNormalization* frozen) {
  if (data.examples.empty()) throw EmptyDatasetError("cannot fit forest on empty data");
  validate_hyperparams(h);

  ForestModel model;
  model.hyperparams = h;
  model.seed = seed;
  model.normalization = frozen ? *frozen : fit_normalization(data);

  int n = data.size();
  std::vector<FeatureVector> xs(static_cast<size_t>(n));
  std::vector<double> ys(static_cast<size_t>(n));
  std::vector<double> ws(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const RegressionExample& e = data.examples[static_cast<size_t>(i)];
    xs[static_cast<size_t>(i)] = model.normalization.apply(e.x);
    ys[static_cast<size_t>(i)] = e.y;
    ws[static_cast<size_t>(i)] = e.weight;
  }

  int k = h.feature_fraction <= 0.0
              ? static_cast<int>(std::lround(std::sqrt(static_cast<double>(kFeatureCount))))
              : static_cast<int>(std::lround(h.feature_fraction * kFeatureCount));
  k = std::clamp(k, 1, kFeatureCount);

  model.trees.reserve(static_cast<size_t>(h.num_trees));
  for (int ti = 0; ti < h.num_trees; ++ti) {
    Pcg32 rng = child_rng(seed, {0x7472u, static_cast<uint64_t>(ti)});
    std::vector<int> idx(static_cast<size_t>(n));
    if (h.bootstrap) {
      for (int i = 0; i < n; ++i) {
        idx[static_cast<size_t>(i)] = static_cast<int>(rng.bounded(static_cast<uint32_t>(n)));
      }
    } else {
      for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    }
    TreeBuilder b{xs, ys, ws, h, k, rng, {}, std::vector<int>(kFeatureCount)};
    b.build(idx, 0, n, 0);
    model.trees.push_back(Tree{std::move(b.nodes)});
  }
  return model;
}

double predict(const ForestModel& model, const FeatureVector& x) {
  FeatureVector z = model.normalization.apply(x);
  std::vector<double> outs;
  outs.reserve(model.trees.size());
  for (const Tree& t : model.trees) outs.push_back(t.predict(z));
  std::sort(outs.begin(), outs.end());
  double sum = 0.0;
  for (double v : outs) sum += v;
  return sum / static_cast<double>(model.trees.size());
}

const ForestModel& LearntPolicyModel::model_for(int t) const {
  if (models.empty()) throw ConfigError("policy holds no models");
  if (stationary) return models.front();
  // Timesteps beyond the trained horizon reuse the last model.
  int i = std::clamp(t - 1, 0, static_cast<int>(models.size()) - 1);
  return models[static_cast<size_t>(i)];
}

int policy_act(const LearntPolicyModel& policy, const Belief& belief,
               const CoverageState& state, const NodeSet& nodes,
               const ProblemSpec& spec, const SensorConfig& sensor,
               std::span<const int> feasible, int t) {
  if (feasible.empty()) throw NoFeasibleActionError("learnt policy has no feasible action");
  const ForestModel& model = policy.model_for(t);
  int best = feasible.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (int id : feasible) {
    FeatureVector x = extract_features(belief, state, id, nodes, spec, sensor);
    double score = predict(model, x);
    if (score > best_score) {
      best_score = score;
      best = id;
    }
  }
  return best;
}

}  // namespace scout
