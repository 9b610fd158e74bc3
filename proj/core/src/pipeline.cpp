#include "codesign/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "codesign/plots.hpp"

namespace codesign {

namespace fs = std::filesystem;

std::filesystem::path RunPaths::front_gen(int generation) const {
  char name[32];
  std::snprintf(name, sizeof(name), "front_gen_%04d.csv", generation);
  return dir / name;
}

RunLock::RunLock(const RunPaths& paths) : path_(paths.lock()) {
  fs::create_directories(paths.dir);
  std::ofstream probe;
  if (fs::exists(path_)) {
    throw RunLocked("run directory " + paths.dir.string() + " is locked by another invocation");
  }
  probe.open(path_, std::ios::out | std::ios::binary);
  if (!probe) throw Error("cannot create lock file " + path_.string());
  probe << "locked\n";
}

RunLock::~RunLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

namespace {

std::string provenance_line(const RunConfig& config) {
  return "config_hash=" + config_hash(config) + " seed=" + std::to_string(config.seed);
}

std::string fmt_double(double v) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void check_hash(const std::string& found, const RunConfig& config, const std::string& what) {
  if (found != config_hash(config)) {
    throw ProvenanceMismatch(what + " was produced under config hash " + found +
                             ", current config hashes to " + config_hash(config));
  }
}

void write_front_csv(const fs::path& path, const std::vector<EvalRecord>& front,
                     const RunConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "# " << provenance_line(config) << "\n";
  out << "candidate_id,model_id,centroid_index,w_x,w_l,w_phi,w_omega,w_ex,w_ephi,w_ds,w_uth,"
         "mse_total,energy,rank\n";
  for (const EvalRecord& r : front) {
    out << r.candidate_id << ',' << r.model_id << ',' << r.centroid_index;
    for (double w : r.weights) out << ',' << fmt_double(w);
    out << ',' << fmt_double(r.objectives.mse_total) << ',' << fmt_double(r.objectives.energy)
        << ",0\n";
  }
}

}  // namespace

GenerateSummary cmd_generate(const RunConfig& config, const RunPaths& paths) {
  RunLock lock(paths);
  const int wanted = config.design.n_models;
  config.base.validate();

  GenerateSummary summary;
  std::vector<RobotModel> feasible;
  int request = wanted;
  // The filter may discard samples; widen the draw until enough designs pass.
  for (int attempt = 0; attempt < 16 && static_cast<int>(feasible.size()) < wanted; ++attempt) {
    feasible.clear();
    summary.discarded = 0;
    const std::vector<GeometricParams> samples =
        sample_parameter_grid(config.design.ranges, request, config.seed);
    for (const GeometricParams& params : samples) {
      RobotModel model = build_model(params, config.base);
      if (!feasibility_filter(model, config.base, config.design.feasibility)) {
        ++summary.discarded;
        continue;
      }
      if (static_cast<int>(feasible.size()) < wanted) {
        model.model_id = static_cast<int>(feasible.size());
        feasible.push_back(std::move(model));
      }
    }
    if (static_cast<int>(feasible.size()) < wanted) {
      request += std::max(wanted - static_cast<int>(feasible.size()), request / 4);
    }
  }
  if (static_cast<int>(feasible.size()) < wanted) {
    throw GridExhausted("could not collect " + std::to_string(wanted) + " feasible models");
  }

  RegistryProvenance prov;
  prov.seed = config.seed;
  prov.config_hash = config_hash(config);
  prov.ranges = config.design.ranges;
  registry_save(ModelRegistry(std::move(feasible), prov), paths.models().string());
  summary.generated = wanted;
  return summary;
}

ClusterSummary cmd_cluster(const RunConfig& config, const RunPaths& paths) {
  RunLock lock(paths);
  const ModelRegistry registry = registry_load(paths.models().string());
  check_hash(registry.provenance().config_hash, config, "models file");

  std::vector<Eigen::VectorXd> points;
  points.reserve(registry.size());
  for (const RobotModel& m : registry.models()) {
    points.push_back(normalize(m.params, config.design.ranges));
  }
  ClusterSet clusters = kmeans(points, config.clustering.k, config.seed, config.clustering.kmeans);
  clusters.centroid_model_ids = snap_centroids(clusters.means, registry, config.design.ranges);
  clusters.spread = cluster_spread(clusters, registry);

  ClusterFile file;
  file.clusters = std::move(clusters);
  file.seed = config.seed;
  file.config_hash = config_hash(config);
  clusters_save(file, paths.clusters().string());

  return {file.clusters.k, file.clusters.inertia};
}

TrajectorySummary cmd_trajectory(const RunConfig& config, const RunPaths& paths) {
  RunLock lock(paths);
  const std::vector<double> durations =
      durations_from_speed(config.trajectory.waypoints, config.trajectory.cruise_speed,
                           config.trajectory.dt);
  const ReferenceTrajectory trajectory =
      build_trajectory(config.trajectory.waypoints, durations, config.trajectory.dt);
  save_trajectory_csv(trajectory, paths.trajectory().string(), provenance_line(config));
  return {trajectory.duration(), static_cast<int>(trajectory.samples().size())};
}

std::vector<EvalRecord> load_eval_ledger(const std::string& path, const std::string& expected_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::vector<EvalRecord> records;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw MalformedFile(path, line_no, e.what());
      }
      if (j.value("type", "") != "eval_ledger") throw MalformedFile(path, line_no, "missing ledger header");
      if (!expected_hash.empty() && j.value("config_hash", "") != expected_hash) {
        throw ProvenanceMismatch("evaluation ledger hash " + j.value("config_hash", "") +
                                 " does not match " + expected_hash);
      }
      continue;
    }
    records.push_back(eval_record_from_json(line, path, line_no));
  }
  return records;
}

std::vector<EvalRecord> front_of_records(const std::vector<EvalRecord>& records) {
  std::vector<Individual> individuals(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    individuals[i].objectives = records[i].objectives;
    individuals[i].candidate_id = records[i].candidate_id;
  }
  const std::vector<Individual> front = pareto_front(individuals);
  std::map<std::int64_t, const EvalRecord*> by_id;
  for (const EvalRecord& r : records) by_id[r.candidate_id] = &r;
  std::vector<EvalRecord> out;
  out.reserve(front.size());
  for (const Individual& ind : front) out.push_back(*by_id.at(ind.candidate_id));
  return out;
}

OptimizeSummary cmd_optimize(const RunConfig& config, const RunPaths& paths, int jobs, bool resume) {
  RunLock lock(paths);
  const std::string hash = config_hash(config);

  const ModelRegistry registry = registry_load(paths.models().string());
  check_hash(registry.provenance().config_hash, config, "models file");
  const ClusterFile cluster_file = clusters_load(paths.clusters().string());
  check_hash(cluster_file.config_hash, config, "clusters file");
  std::string traj_prov;
  const ReferenceTrajectory trajectory = load_trajectory_csv(paths.trajectory().string(), &traj_prov);
  if (traj_prov.find("config_hash=" + hash) == std::string::npos) {
    throw ProvenanceMismatch("trajectory file provenance '" + traj_prov + "' does not match " + hash);
  }

  const ClusterSet& clusters = cluster_file.clusters;
  const EvaluationConfig eval_config = config.evaluation_config();
  const GaConfig ga = config.ga_config();
  if (ga.k != static_cast<int>(clusters.centroid_model_ids.size())) {
    throw ProvenanceMismatch("configured k does not match the clusters file");
  }

  // Resume: ledger records keyed by candidate id; determinism makes ids stable.
  std::map<std::int64_t, EvalRecord> cache;
  if (resume && fs::exists(paths.evals())) {
    for (const EvalRecord& r : load_eval_ledger(paths.evals().string(), hash)) {
      cache[r.candidate_id] = r;
    }
  }

  std::ofstream ledger;
  if (resume && fs::exists(paths.evals())) {
    ledger.open(paths.evals(), std::ios::binary | std::ios::app);
  } else {
    cache.clear();
    ledger.open(paths.evals(), std::ios::binary | std::ios::trunc);
    nlohmann::json header;
    header["type"] = "eval_ledger";
    header["version"] = 1;
    header["config_hash"] = hash;
    header["seed"] = config.seed;
    ledger << header.dump() << '\n';
  }
  if (!ledger) throw Error("cannot open " + paths.evals().string());

  OptimizeSummary summary;
  const int worker_count = std::max(1, jobs);

  BatchEvaluator evaluator = [&](const std::vector<std::pair<std::int64_t, Genome>>& batch,
                                 int generation) {
    std::vector<Objectives> results(batch.size());
    std::vector<char> fresh(batch.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= batch.size()) break;
        const auto& [id, genome] = batch[i];
        if (auto it = cache.find(id); it != cache.end()) {
          results[i] = it->second.objectives;
          continue;
        }
        Candidate candidate{genome.centroid_gene, genome.to_weights()};
        results[i] = evaluate_candidate(candidate, clusters, registry, trajectory, eval_config);
        fresh[i] = 1;
      }
    };
    if (worker_count == 1 || batch.size() <= 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      const int spawn = std::min<std::size_t>(worker_count, batch.size());
      threads.reserve(spawn);
      for (int t = 0; t < spawn; ++t) threads.emplace_back(worker);
      for (std::thread& t : threads) t.join();
    }
    // Ledger lines appended in candidate order regardless of worker timing.
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (!fresh[i]) {
        ++summary.reused;
        continue;
      }
      const auto& [id, genome] = batch[i];
      EvalRecord record;
      record.candidate_id = id;
      record.generation = generation;
      record.centroid_index = genome.centroid_gene;
      record.model_id = clusters.centroid_model_ids[genome.centroid_gene];
      const ControlWeights w = genome.to_weights();
      for (int d = 0; d < 8; ++d) record.weights[d] = w[d];
      record.objectives = results[i];
      ledger << eval_record_to_json(record) << '\n';
    }
    ledger.flush();
    summary.evaluations += static_cast<int>(batch.size());
    return results;
  };

  Rng init_rng(derive_seed(config.seed, "nsga2-init"));
  const std::vector<Genome> initial = initial_population(ga, init_rng);
  const EvolveResult evolved = evolve(ga, evaluator, initial);
  ledger.close();

  // Per-generation rank-0 snapshots and the archive-wide final front.
  const std::vector<EvalRecord> all_records = load_eval_ledger(paths.evals().string(), hash);
  std::map<std::int64_t, const EvalRecord*> by_id;
  for (const EvalRecord& r : all_records) by_id[r.candidate_id] = &r;
  for (std::size_t g = 0; g < evolved.generation_fronts.size(); ++g) {
    std::vector<EvalRecord> snapshot;
    for (const Individual& ind : evolved.generation_fronts[g]) {
      snapshot.push_back(*by_id.at(ind.candidate_id));
    }
    write_front_csv(paths.front_gen(static_cast<int>(g + 1)), snapshot, config);
  }

  const std::vector<EvalRecord> final_front = front_of_records(all_records);
  write_front_csv(paths.pareto(), final_front, config);
  summary.front_size = static_cast<int>(final_front.size());
  return summary;
}

PlotSummary cmd_plot(const RunConfig& config, const RunPaths& paths) {
  RunLock lock(paths);
  const std::string hash = config_hash(config);
  const std::vector<EvalRecord> archive = load_eval_ledger(paths.evals().string(), hash);
  if (archive.empty()) throw MalformedFile(paths.evals().string(), 1, "empty evaluation archive");

  std::vector<EvalRecord> front;
  try {
    front = front_of_records(archive);
  } catch (const EmptyFeasibleSet&) {
    front.clear();  // degenerate plots still render
  }

  fs::create_directories(paths.plots_dir());
  PlotSummary summary;
  auto write = [&](const std::string& name, const std::string& svg) {
    const fs::path path = paths.plots_dir() / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "<!-- " << provenance_line(config) << " -->\n" << svg;
    summary.files.push_back(path.string());
  };
  write("pareto_scatter.svg", render_archive_scatter(archive, front));
  write("scatter_by_model.svg", render_model_scatter(archive));
  write("model_contributions.svg", render_model_contributions(front));
  return summary;
}

void cmd_all(const RunConfig& config, const RunPaths& paths, int jobs, bool resume) {
  cmd_generate(config, paths);
  cmd_cluster(config, paths);
  cmd_trajectory(config, paths);
  cmd_optimize(config, paths, jobs, resume);
  cmd_plot(config, paths);
}

}  // namespace codesign
