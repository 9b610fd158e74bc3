#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "codesign/run_config.hpp"

namespace codesign {

struct RunPaths {
  std::filesystem::path dir;

  std::filesystem::path models() const { return dir / "models.jsonl"; }
  std::filesystem::path clusters() const { return dir / "clusters.json"; }
  std::filesystem::path trajectory() const { return dir / "trajectory.csv"; }
  std::filesystem::path evals() const { return dir / "evals.jsonl"; }
  std::filesystem::path pareto() const { return dir / "pareto.csv"; }
  std::filesystem::path front_gen(int generation) const;
  std::filesystem::path plots_dir() const { return dir / "plots"; }
  std::filesystem::path lock() const { return dir / ".codesign.lock"; }
};

/// One CLI invocation owns a run directory; created exclusively, removed on
/// destruction. Throws RunLocked if another process holds it.
class RunLock {
 public:
  explicit RunLock(const RunPaths& paths);
  ~RunLock();
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path path_;
};

struct GenerateSummary {
  int generated = 0;   // feasible models in the registry
  int discarded = 0;   // filtered by the feasibility rules
};

GenerateSummary cmd_generate(const RunConfig& config, const RunPaths& paths);

struct ClusterSummary {
  int k = 0;
  double inertia = 0.0;
};

ClusterSummary cmd_cluster(const RunConfig& config, const RunPaths& paths);

struct TrajectorySummary {
  double duration = 0.0;
  int samples = 0;
};

TrajectorySummary cmd_trajectory(const RunConfig& config, const RunPaths& paths);

struct OptimizeSummary {
  int evaluations = 0;
  int reused = 0;       // ledger hits under --resume
  int front_size = 0;
};

OptimizeSummary cmd_optimize(const RunConfig& config, const RunPaths& paths, int jobs = 1,
                             bool resume = false);

struct PlotSummary {
  std::vector<std::string> files;
};

PlotSummary cmd_plot(const RunConfig& config, const RunPaths& paths);

/// Full Algorithm-1 style pipeline: generate, cluster, trajectory, optimize, plot.
void cmd_all(const RunConfig& config, const RunPaths& paths, int jobs = 1, bool resume = false);

/// Ledger-facing helpers shared by cmd_optimize, cmd_plot and the tests.
std::vector<EvalRecord> load_eval_ledger(const std::string& path, const std::string& expected_hash);
std::vector<EvalRecord> front_of_records(const std::vector<EvalRecord>& records);

}  // namespace codesign
