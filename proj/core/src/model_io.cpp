#include <fstream>

#include <nlohmann/json.hpp>

#include "scout/errors.hpp"
#include "scout/learner.hpp"
#include "scout/version.hpp"

namespace scout {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json forest_to_json(const ForestModel& m) {
  ordered_json j;
  j["seed"] = m.seed;
  j["hyperparams"] = {
      {"num_trees", m.hyperparams.num_trees},
      {"max_depth", m.hyperparams.max_depth},
      {"min_samples_leaf", m.hyperparams.min_samples_leaf},
      {"feature_fraction", m.hyperparams.feature_fraction},
      {"bootstrap", m.hyperparams.bootstrap},
  };
  j["normalization"] = {
      {"shift", m.normalization.shift},
      {"scale", m.normalization.scale},
  };
  ordered_json trees = ordered_json::array();
  for (const Tree& t : m.trees) {
    ordered_json jt;
    std::vector<int> feature, left, right;
    std::vector<double> threshold, value;
    for (const TreeNode& n : t.nodes) {
      feature.push_back(n.feature);
      threshold.push_back(n.threshold);
      left.push_back(n.left);
      right.push_back(n.right);
      value.push_back(n.value);
    }
    jt["feature"] = feature;
    jt["threshold"] = threshold;
    jt["left"] = left;
    jt["right"] = right;
    jt["value"] = value;
    trees.push_back(std::move(jt));
  }
  j["trees"] = std::move(trees);
  return j;
}

ForestModel forest_from_json(const ordered_json& j) {
  ForestModel m;
  m.seed = j.at("seed").get<uint64_t>();
  const auto& h = j.at("hyperparams");
  m.hyperparams.num_trees = h.at("num_trees").get<int>();
  m.hyperparams.max_depth = h.at("max_depth").get<int>();
  m.hyperparams.min_samples_leaf = h.at("min_samples_leaf").get<int>();
  m.hyperparams.feature_fraction = h.at("feature_fraction").get<double>();
  m.hyperparams.bootstrap = h.at("bootstrap").get<bool>();
  const auto& norm = j.at("normalization");
  auto shift = norm.at("shift").get<std::vector<double>>();
  auto scale = norm.at("scale").get<std::vector<double>>();
  if (shift.size() != kFeatureCount || scale.size() != kFeatureCount) {
    throw FormatError("model normalization arrays have the wrong length");
  }
  std::copy(shift.begin(), shift.end(), m.normalization.shift.begin());
  std::copy(scale.begin(), scale.end(), m.normalization.scale.begin());

  for (const auto& jt : j.at("trees")) {
    auto feature = jt.at("feature").get<std::vector<int>>();
    auto threshold = jt.at("threshold").get<std::vector<double>>();
    auto left = jt.at("left").get<std::vector<int>>();
    auto right = jt.at("right").get<std::vector<int>>();
    auto value = jt.at("value").get<std::vector<double>>();
    size_t n = feature.size();
    if (threshold.size() != n || left.size() != n || right.size() != n ||
        value.size() != n || n == 0) {
      throw FormatError("model tree arrays are inconsistent");
    }
    Tree t;
    t.nodes.resize(n);
    for (size_t i = 0; i < n; ++i) {
      TreeNode& node = t.nodes[i];
      if (feature[i] < -1 || feature[i] >= kFeatureCount) {
        throw FormatError("model tree feature id out of range");
      }
      node.feature = static_cast<int16_t>(feature[i]);
      node.threshold = threshold[i];
      node.value = value[i];
      if (feature[i] >= 0) {
        if (left[i] < 0 || right[i] < 0 || left[i] >= static_cast<int>(n) ||
            right[i] >= static_cast<int>(n)) {
          throw FormatError("model tree child index out of range");
        }
      }
      node.left = left[i];
      node.right = right[i];
    }
    m.trees.push_back(std::move(t));
  }
  if (m.trees.empty()) throw FormatError("model holds no trees");
  return m;
}

}  // namespace

void save_model(const LearntPolicyModel& policy, const std::string& path) {
  if (policy.models.empty()) throw ConfigError("refusing to save a policy with no models");
  ordered_json j;
  j["format"] = "scout-model";
  j["format_version"] = {{"major", kModelFormatMajor}, {"minor", kModelFormatMinor}};
  j["feature_schema"] = {{"version", kFeatureSchemaVersion}, {"names", feature_names()}};
  j["kind"] = policy.stationary ? "stationary" : "per-timestep";
  j["horizon"] = policy.horizon;
  ordered_json models = ordered_json::array();
  for (const ForestModel& m : policy.models) models.push_back(forest_to_json(m));
  j["models"] = std::move(models);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open model file for writing: " + path);
  out << j.dump(1) << '\n';
  if (!out) throw IoError("failed writing model file: " + path);
}

LearntPolicyModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw FormatError(std::string("model file is not valid JSON: ") + e.what());
  }

  try {
    if (j.at("format").get<std::string>() != "scout-model") {
      throw FormatError("not a model file");
    }
    const auto& v = j.at("format_version");
    int major = v.at("major").get<int>();
    int minor = v.at("minor").get<int>();
    if (major != kModelFormatMajor || minor > kModelFormatMinor) {
      throw FormatError("unsupported model format version");
    }
    const auto& schema = j.at("feature_schema");
    bool names_match = schema.at("names").get<std::vector<std::string>>() ==
                       std::vector<std::string>(feature_names().begin(), feature_names().end());
    if (schema.at("version").get<int>() != kFeatureSchemaVersion || !names_match) {
      throw SchemaMismatchError("model feature schema does not match this build");
    }

    LearntPolicyModel policy;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "stationary") {
      policy.stationary = true;
    } else if (kind == "per-timestep") {
      policy.stationary = false;
    } else {
      throw FormatError("unknown model kind: " + kind);
    }
    policy.horizon = j.at("horizon").get<int>();
    for (const auto& jm : j.at("models")) policy.models.push_back(forest_from_json(jm));
    if (policy.models.empty()) throw FormatError("model file holds no models");
    if (!policy.stationary &&
        policy.horizon != static_cast<int>(policy.models.size())) {
      throw FormatError("per-timestep model count does not match horizon");
    }
    return policy;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("model file failed validation: ") + e.what());
  }
}

}  // namespace scout
