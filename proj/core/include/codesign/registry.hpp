#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codesign/design_space.hpp"
#include "codesign/robot_model.hpp"

namespace codesign {

struct RegistryProvenance {
  std::uint64_t seed = 0;
  std::string config_hash;  // hex, from the run configuration
  std::string tool = "codesign";
  RangeSet ranges = default_ranges();
};

/// Indexed pool of constructible designs; ids are dense 0..N-1.
class ModelRegistry {
 public:
  ModelRegistry() = default;
  ModelRegistry(std::vector<RobotModel> models, RegistryProvenance provenance);

  int size() const { return static_cast<int>(models_.size()); }
  const RobotModel& get(int model_id) const;  // throws IdOutOfRange
  const std::vector<RobotModel>& models() const { return models_; }
  const RegistryProvenance& provenance() const { return provenance_; }

 private:
  std::vector<RobotModel> models_;
  RegistryProvenance provenance_;
};

/// JSON-lines: one provenance header line, then one model per line.
/// Numeric fields round-trip bit-exactly.
void registry_save(const ModelRegistry& registry, const std::string& path);
ModelRegistry registry_load(const std::string& path);  // throws MalformedFile with line number

}  // namespace codesign
