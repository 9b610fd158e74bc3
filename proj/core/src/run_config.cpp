#include "codesign/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "codesign/rng.hpp"

namespace codesign {

using nlohmann::json;

GaConfig RunConfig::ga_config() const {
  GaConfig ga_cfg;
  ga_cfg.population = ga.population;
  ga_cfg.generations = ga.generations;
  ga_cfg.crossover_prob = ga.crossover_prob;
  ga_cfg.mutation_prob = ga.mutation_prob;
  ga_cfg.sbx_eta = ga.sbx_eta;
  ga_cfg.pm_eta = ga.pm_eta;
  ga_cfg.weight_bounds = ga.weight_bounds;
  ga_cfg.seed = seed;
  ga_cfg.k = clustering.k;
  return ga_cfg;
}

EvaluationConfig RunConfig::evaluation_config() const {
  EvaluationConfig eval;
  eval.penalty = penalty;
  eval.mpc = mpc;
  return eval;
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.base = default_base_spec();
  // Five-gate closed circuit inside a 10 x 10 x 3 m volume; endpoints at rest.
  auto gate = [](double x, double y, double z, double cx, double cy, double cz, double speed) {
    Waypoint w;
    w.position = {x, y, z};
    w.direction_cue = Eigen::Vector3d(cx, cy, cz).normalized();
    w.dwell_speed = speed;
    return w;
  };
  const double cruise = cfg.trajectory.cruise_speed;
  cfg.trajectory.waypoints = {
      gate(0, 0, 1.2, 1, 0, 0, 0.0),
      gate(4, 1, 1.8, 1, 1, 0, cruise),
      gate(6, 5, 2.4, 0, 1, 0, cruise),
      gate(3, 8, 1.8, -1, 0.5, 0, cruise),
      gate(-1, 4, 1.5, 0, -1, 0, cruise),
      gate(0, 0, 1.2, 1, -1, 0, 0.0),
  };
  return cfg;
}

namespace {

json vec3(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }
Eigen::Vector3d vec3_from(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json mat3(const Eigen::Matrix3d& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  return a;
}

Eigen::Matrix3d mat3_from(const json& j) {
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = j.at(r * 3 + c).get<double>();
  return m;
}

json to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;

  json design;
  json ranges = json::array();
  for (const ParameterRange& r : cfg.design.ranges) {
    ranges.push_back({{"name", r.name}, {"min", r.min}, {"max", r.max}, {"step", r.step}});
  }
  design["ranges"] = ranges;
  design["n_models"] = cfg.design.n_models;
  design["hover_margin"] = cfg.design.feasibility.hover_margin;
  design["com_box"] = vec3(cfg.design.feasibility.com_box);
  j["design_space"] = design;

  json base;
  base["base_mass"] = cfg.base.base_mass;
  base["base_com"] = vec3(cfg.base.base_com);
  base["base_inertia"] = mat3(cfg.base.base_inertia);
  base["delta_s_max"] = cfg.base.delta_s_max;
  json prims = json::array();
  for (const LinkPrimitive& p : cfg.base.primitives) {
    prims.push_back({{"param", p.param},
                     {"shape", p.shape == PrimitiveShape::Box ? "box" : "cylinder"},
                     {"density", p.density},
                     {"dims", json::array({p.dims.x(), p.dims.y()})},
                     {"base_point", vec3(p.base_point)},
                     {"axis", vec3(p.axis)}});
  }
  base["primitives"] = prims;
  json thrusters = json::array();
  for (const ThrusterSpec& t : cfg.base.thrusters) {
    std::string role = t.role == ThrusterRole::Jetpack ? "jetpack"
                       : t.role == ThrusterRole::LeftArm ? "left_arm"
                                                         : "right_arm";
    thrusters.push_back({{"role", role},
                         {"mount", vec3(t.mount)},
                         {"direction", vec3(t.direction)},
                         {"t_min", t.t_min},
                         {"t_max", t.t_max},
                         {"omega_n", t.omega_n},
                         {"zeta", t.zeta},
                         {"tilt_sign", t.tilt_sign}});
  }
  base["thrusters"] = thrusters;
  json joints = json::array();
  for (const JointSpec& jt : cfg.base.joints) {
    joints.push_back({{"name", jt.name},
                      {"axis", vec3(jt.axis)},
                      {"pivot", vec3(jt.pivot)},
                      {"thruster_index", jt.thruster_index}});
  }
  base["joints"] = joints;
  j["base_robot"] = base;

  j["clustering"] = {{"k", cfg.clustering.k},
                     {"restarts", cfg.clustering.kmeans.restarts},
                     {"max_iter", cfg.clustering.kmeans.max_iter},
                     {"tol", cfg.clustering.kmeans.tol}};

  json traj;
  traj["dt"] = cfg.trajectory.dt;
  traj["cruise_speed"] = cfg.trajectory.cruise_speed;
  json wps = json::array();
  for (const Waypoint& w : cfg.trajectory.waypoints) {
    wps.push_back({{"position", vec3(w.position)},
                   {"direction_cue", vec3(w.direction_cue)},
                   {"dwell_speed", w.dwell_speed}});
  }
  traj["waypoints"] = wps;
  j["trajectory"] = traj;

  j["mpc"] = {{"horizon", cfg.mpc.horizon},
              {"dt", cfg.mpc.dt},
              {"relinearize_every", cfg.mpc.relinearize_every},
              {"discretization", cfg.mpc.discretization == Discretization::Euler ? "euler" : "zoh"},
              {"qp_max_iter", cfg.mpc.qp.max_iter},
              {"qp_tol", cfg.mpc.qp.tol},
              {"error_threshold", cfg.mpc.error_threshold}};

  json weights;
  const char* names[8] = {"w_x", "w_l", "w_phi", "w_omega", "w_ex", "w_ephi", "w_ds", "w_uth"};
  for (int i = 0; i < 8; ++i) weights[names[i]] = cfg.default_weights[i];
  j["default_weights"] = weights;

  j["evaluation"] = {{"penalty", cfg.penalty}};

  json bounds = json::array();
  for (const auto& [lo, hi] : cfg.ga.weight_bounds) bounds.push_back(json::array({lo, hi}));
  j["nsga2"] = {{"population", cfg.ga.population},
                {"generations", cfg.ga.generations},
                {"crossover_prob", cfg.ga.crossover_prob},
                {"mutation_prob", cfg.ga.mutation_prob},
                {"sbx_eta", cfg.ga.sbx_eta},
                {"pm_eta", cfg.ga.pm_eta},
                {"weight_log10_bounds", bounds}};
  return j;
}

RunConfig from_json(const json& j) {
  RunConfig cfg = default_run_config();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();

  if (j.contains("design_space")) {
    const json& d = j.at("design_space");
    if (d.contains("ranges")) {
      const json& ranges = d.at("ranges");
      for (int i = 0; i < kNumGeometricParams; ++i) {
        cfg.design.ranges[i] = {ranges.at(i).at("name").get<std::string>(), ranges.at(i).at("min"),
                                ranges.at(i).at("max"), ranges.at(i).at("step")};
      }
    }
    cfg.design.n_models = d.value("n_models", cfg.design.n_models);
    cfg.design.feasibility.hover_margin = d.value("hover_margin", cfg.design.feasibility.hover_margin);
    if (d.contains("com_box")) cfg.design.feasibility.com_box = vec3_from(d.at("com_box"));
  }

  if (j.contains("base_robot")) {
    const json& b = j.at("base_robot");
    BaseRobotSpec base;
    base.base_mass = b.at("base_mass").get<double>();
    base.base_com = vec3_from(b.at("base_com"));
    base.base_inertia = mat3_from(b.at("base_inertia"));
    base.delta_s_max = b.value("delta_s_max", 0.2);
    for (const json& p : b.at("primitives")) {
      LinkPrimitive prim;
      prim.param = p.at("param").get<std::string>();
      prim.shape = p.at("shape").get<std::string>() == "box" ? PrimitiveShape::Box : PrimitiveShape::Cylinder;
      prim.density = p.at("density").get<double>();
      prim.dims = {p.at("dims").at(0).get<double>(), p.at("dims").at(1).get<double>()};
      prim.base_point = vec3_from(p.at("base_point"));
      prim.axis = vec3_from(p.at("axis"));
      base.primitives.push_back(prim);
    }
    for (const json& t : b.at("thrusters")) {
      ThrusterSpec spec;
      const std::string role = t.at("role").get<std::string>();
      spec.role = role == "jetpack" ? ThrusterRole::Jetpack
                  : role == "left_arm" ? ThrusterRole::LeftArm
                                       : ThrusterRole::RightArm;
      spec.mount = vec3_from(t.at("mount"));
      spec.direction = vec3_from(t.at("direction"));
      spec.t_min = t.at("t_min").get<double>();
      spec.t_max = t.at("t_max").get<double>();
      spec.omega_n = t.at("omega_n").get<double>();
      spec.zeta = t.at("zeta").get<double>();
      spec.tilt_sign = t.value("tilt_sign", 0);
      base.thrusters.push_back(spec);
    }
    for (const json& jt : b.at("joints")) {
      JointSpec joint;
      joint.name = jt.at("name").get<std::string>();
      joint.axis = vec3_from(jt.at("axis"));
      joint.pivot = vec3_from(jt.at("pivot"));
      joint.thruster_index = jt.at("thruster_index").get<int>();
      base.joints.push_back(joint);
    }
    cfg.base = base;
  }

  if (j.contains("clustering")) {
    const json& c = j.at("clustering");
    cfg.clustering.k = c.value("k", cfg.clustering.k);
    cfg.clustering.kmeans.restarts = c.value("restarts", cfg.clustering.kmeans.restarts);
    cfg.clustering.kmeans.max_iter = c.value("max_iter", cfg.clustering.kmeans.max_iter);
    cfg.clustering.kmeans.tol = c.value("tol", cfg.clustering.kmeans.tol);
  }

  if (j.contains("trajectory")) {
    const json& t = j.at("trajectory");
    cfg.trajectory.dt = t.value("dt", cfg.trajectory.dt);
    cfg.trajectory.cruise_speed = t.value("cruise_speed", cfg.trajectory.cruise_speed);
    if (t.contains("waypoints")) {
      cfg.trajectory.waypoints.clear();
      for (const json& w : t.at("waypoints")) {
        Waypoint wp;
        wp.position = vec3_from(w.at("position"));
        wp.direction_cue = vec3_from(w.at("direction_cue")).normalized();
        wp.dwell_speed = w.at("dwell_speed").get<double>();
        cfg.trajectory.waypoints.push_back(wp);
      }
    }
  }

  if (j.contains("mpc")) {
    const json& m = j.at("mpc");
    cfg.mpc.horizon = m.value("horizon", cfg.mpc.horizon);
    cfg.mpc.dt = m.value("dt", cfg.mpc.dt);
    cfg.mpc.relinearize_every = m.value("relinearize_every", cfg.mpc.relinearize_every);
    if (m.contains("discretization")) {
      cfg.mpc.discretization =
          m.at("discretization").get<std::string>() == "zoh" ? Discretization::ZeroOrderHold
                                                             : Discretization::Euler;
    }
    cfg.mpc.qp.max_iter = m.value("qp_max_iter", cfg.mpc.qp.max_iter);
    cfg.mpc.qp.tol = m.value("qp_tol", cfg.mpc.qp.tol);
    cfg.mpc.error_threshold = m.value("error_threshold", cfg.mpc.error_threshold);
  }

  if (j.contains("default_weights")) {
    const json& w = j.at("default_weights");
    const char* names[8] = {"w_x", "w_l", "w_phi", "w_omega", "w_ex", "w_ephi", "w_ds", "w_uth"};
    for (int i = 0; i < 8; ++i) {
      if (w.contains(names[i])) cfg.default_weights[i] = w.at(names[i]).get<double>();
    }
  }

  if (j.contains("evaluation")) cfg.penalty = j.at("evaluation").value("penalty", cfg.penalty);

  if (j.contains("nsga2")) {
    const json& g = j.at("nsga2");
    cfg.ga.population = g.value("population", cfg.ga.population);
    cfg.ga.generations = g.value("generations", cfg.ga.generations);
    cfg.ga.crossover_prob = g.value("crossover_prob", cfg.ga.crossover_prob);
    cfg.ga.mutation_prob = g.value("mutation_prob", cfg.ga.mutation_prob);
    cfg.ga.sbx_eta = g.value("sbx_eta", cfg.ga.sbx_eta);
    cfg.ga.pm_eta = g.value("pm_eta", cfg.ga.pm_eta);
    if (g.contains("weight_log10_bounds")) {
      const json& bounds = g.at("weight_log10_bounds");
      for (int i = 0; i < 8; ++i) {
        cfg.ga.weight_bounds[i] = {bounds.at(i).at(0).get<double>(), bounds.at(i).at(1).get<double>()};
      }
    }
  }
  return cfg;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MalformedFile(path, 1, e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw MalformedFile(path, 1, e.what());
  }
}

void save_run_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << to_json(config).dump(2) << '\n';
}

std::string config_hash(const RunConfig& config) {
  const std::string dump = to_json(config).dump();
  std::ostringstream hex;
  hex << std::hex << fnv1a64(dump);
  return hex.str();
}

}  // namespace codesign
