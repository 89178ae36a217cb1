#include "scout/policy.hpp"

#include <filesystem>

#include "scout/errors.hpp"

namespace scout {

// Named policies understood by the eval surface; anything else is read as a
// model file path.
std::unique_ptr<Policy> make_policy(const std::string& name, double motion_penalty) {
  if (name == "random") return std::make_unique<RandomPolicy>();
  if (name == "lowest-id") return std::make_unique<LowestIdPolicy>();
  if (name == "oracle-greedy") return std::make_unique<OraclePolicy>(OracleKind::Greedy);
  if (name == "oracle-gcb") return std::make_unique<OraclePolicy>(OracleKind::Gcb);
  if (name == "average-entropy" || name == "rear-side-voxel" ||
      name == "occlusion-aware" || name == "unknown-count") {
    return std::make_unique<HeuristicPolicy>(
        HeuristicConfig{heuristic_from_string(name), motion_penalty});
  }
  LearntPolicyModel model = load_model(name);
  std::string label = std::filesystem::path(name).stem().string();
  if (label.empty()) label = "learnt";
  return std::make_unique<LearntPolicy>(std::move(model), std::move(label));
}

}  // namespace scout
