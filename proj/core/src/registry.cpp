#include "codesign/registry.hpp"

#include <fstream>

#include <json.hpp>

namespace codesign {

using nlohmann::json;

namespace {

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json mat_to_json_rowmajor(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  }
  return arr;
}

Eigen::Vector3d json_to_vec3(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

Eigen::MatrixXd json_to_mat_rowmajor(const json& j, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = j.at(r * cols + c).get<double>();
  }
  return m;
}

}  // namespace

ModelRegistry::ModelRegistry(std::vector<RobotModel> models, RegistryProvenance provenance)
    : models_(std::move(models)), provenance_(std::move(provenance)) {}

const RobotModel& ModelRegistry::get(int model_id) const {
  if (model_id < 0 || model_id >= size()) {
    throw IdOutOfRange("model id " + std::to_string(model_id) + " outside registry of " +
                       std::to_string(size()));
  }
  return models_[model_id];
}

void registry_save(const ModelRegistry& registry, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);

  json header;
  header["type"] = "model_registry";
  header["version"] = 1;
  header["seed"] = registry.provenance().seed;
  header["config_hash"] = registry.provenance().config_hash;
  header["tool"] = registry.provenance().tool;
  header["count"] = registry.size();
  json ranges = json::array();
  for (const ParameterRange& r : registry.provenance().ranges) {
    ranges.push_back({{"name", r.name}, {"min", r.min}, {"max", r.max}, {"step", r.step}});
  }
  header["ranges"] = ranges;
  out << header.dump() << '\n';

  for (const RobotModel& m : registry.models()) {
    json rec;
    rec["id"] = m.model_id;
    json params;
    for (int i = 0; i < kNumGeometricParams; ++i) params[geometric_param_names()[i]] = m.params[i];
    rec["params"] = params;
    rec["mass"] = m.mass;
    rec["com"] = vec3_to_json(m.com);
    rec["inertia"] = mat_to_json_rowmajor(m.inertia);
    rec["delta_s_max"] = m.delta_s_max;
    json thrusters = json::array();
    for (const Thruster& t : m.thrusters) {
      thrusters.push_back({{"r", vec3_to_json(t.r)},
                           {"a", vec3_to_json(t.a)},
                           {"t_min", t.t_min},
                           {"t_max", t.t_max},
                           {"omega_n", t.omega_n},
                           {"zeta", t.zeta},
                           {"n_joints", static_cast<int>(t.dr_ds.cols())},
                           {"dr_ds", mat_to_json_rowmajor(t.dr_ds)},
                           {"da_ds", mat_to_json_rowmajor(t.da_ds)}});
    }
    rec["thrusters"] = thrusters;
    out << rec.dump() << '\n';
  }
}

ModelRegistry registry_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);

  std::string line;
  int line_no = 0;
  RegistryProvenance prov;
  std::vector<RobotModel> models;
  int expected = -1;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw MalformedFile(path, line_no, e.what());
    }
    try {
      if (!header_seen) {
        header_seen = true;
        if (rec.value("type", "") != "model_registry") {
          throw MalformedFile(path, line_no, "missing model_registry header");
        }
        prov.seed = rec.at("seed").get<std::uint64_t>();
        prov.config_hash = rec.value("config_hash", "");
        prov.tool = rec.value("tool", "");
        expected = rec.at("count").get<int>();
        const json& ranges = rec.at("ranges");
        for (int i = 0; i < kNumGeometricParams; ++i) {
          prov.ranges[i] = {ranges.at(i).at("name").get<std::string>(), ranges.at(i).at("min"),
                            ranges.at(i).at("max"), ranges.at(i).at("step")};
        }
        continue;
      }
      RobotModel m;
      m.model_id = rec.at("id").get<int>();
      for (int i = 0; i < kNumGeometricParams; ++i) {
        m.params[i] = rec.at("params").at(geometric_param_names()[i]).get<double>();
      }
      m.mass = rec.at("mass").get<double>();
      m.com = json_to_vec3(rec.at("com"));
      m.inertia = json_to_mat_rowmajor(rec.at("inertia"), 3, 3);
      m.delta_s_max = rec.at("delta_s_max").get<double>();
      for (const json& tj : rec.at("thrusters")) {
        Thruster t;
        t.r = json_to_vec3(tj.at("r"));
        t.a = json_to_vec3(tj.at("a"));
        t.t_min = tj.at("t_min").get<double>();
        t.t_max = tj.at("t_max").get<double>();
        t.omega_n = tj.at("omega_n").get<double>();
        t.zeta = tj.at("zeta").get<double>();
        const int n_joints = tj.at("n_joints").get<int>();
        t.dr_ds = json_to_mat_rowmajor(tj.at("dr_ds"), 3, n_joints);
        t.da_ds = json_to_mat_rowmajor(tj.at("da_ds"), 3, n_joints);
        m.thrusters.push_back(std::move(t));
      }
      if (m.model_id != static_cast<int>(models.size())) {
        throw MalformedFile(path, line_no, "model ids must be dense and ordered");
      }
      models.push_back(std::move(m));
    } catch (const json::exception& e) {
      throw MalformedFile(path, line_no, e.what());
    }
  }
  if (expected >= 0 && expected != static_cast<int>(models.size())) {
    throw MalformedFile(path, line_no, "header count " + std::to_string(expected) + " != " +
                                           std::to_string(models.size()) + " records");
  }
  return ModelRegistry(std::move(models), std::move(prov));
}

}  // namespace codesign
