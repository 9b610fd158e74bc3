#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "codesign/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitEmptyResult = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "run";
  std::int64_t seed = -1;
  int jobs = 1;
  bool resume = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_jobs = false) {
  cmd->add_option("--config", args.config_path, "Run configuration file (JSON)");
  cmd->add_option("--out", args.out_dir, "Run directory for artifacts");
  cmd->add_option("--seed", args.seed, "Master seed override");
  if (with_jobs) {
    cmd->add_option("--jobs", args.jobs, "Parallel evaluation workers")->check(CLI::PositiveNumber);
    cmd->add_flag("--resume", args.resume, "Reuse ledgered evaluations from a previous run");
  }
}

codesign::RunConfig resolve_config(const CommonArgs& args) {
  codesign::RunConfig config =
      args.config_path.empty() ? codesign::default_run_config() : codesign::load_run_config(args.config_path);
  if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-design pipeline: morphology sampling, clustering, flight simulation and "
               "bi-objective optimization"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* generate = app.add_subcommand("generate", "Sample the design grid into a model registry");
  CLI::App* cluster = app.add_subcommand("cluster", "Reduce the registry to k centroid models");
  CLI::App* trajectory = app.add_subcommand("trajectory", "Emit the min-jerk reference trajectory");
  CLI::App* optimize = app.add_subcommand("optimize", "Run the NSGA-II design/weights search");
  CLI::App* plot = app.add_subcommand("plot", "Render SVG views of the evaluation archive");
  CLI::App* all = app.add_subcommand("all", "Run the full pipeline");
  add_common(generate, args);
  add_common(cluster, args);
  add_common(trajectory, args);
  add_common(optimize, args, true);
  add_common(plot, args);
  add_common(all, args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    const codesign::RunConfig config = resolve_config(args);
    codesign::RunPaths paths{args.out_dir};

    if (generate->parsed()) {
      const auto summary = codesign::cmd_generate(config, paths);
      std::printf("registry: %d models (%d discarded by the feasibility filter)\n", summary.generated,
                  summary.discarded);
      std::printf("wrote %s\n", paths.models().c_str());
    } else if (cluster->parsed()) {
      const auto summary = codesign::cmd_cluster(config, paths);
      std::printf("clusters: k=%d, inertia=%.6g\n", summary.k, summary.inertia);
      std::printf("wrote %s\n", paths.clusters().c_str());
    } else if (trajectory->parsed()) {
      const auto summary = codesign::cmd_trajectory(config, paths);
      std::printf("trajectory: %.1f s, %d samples\n", summary.duration, summary.samples);
      std::printf("wrote %s\n", paths.trajectory().c_str());
    } else if (optimize->parsed()) {
      const auto summary = codesign::cmd_optimize(config, paths, args.jobs, args.resume);
      std::printf("optimize: %d evaluations (%d reused), final front holds %d candidates\n",
                  summary.evaluations, summary.reused, summary.front_size);
      std::printf("wrote %s\n", paths.pareto().c_str());
    } else if (plot->parsed()) {
      const auto summary = codesign::cmd_plot(config, paths);
      for (const std::string& file : summary.files) std::printf("wrote %s\n", file.c_str());
    } else if (all->parsed()) {
      codesign::cmd_all(config, paths, args.jobs, args.resume);
      std::printf("pipeline complete in %s\n", paths.dir.c_str());
    }
  } catch (const codesign::EmptyFeasibleSet& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitEmptyResult;
  } catch (const codesign::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
  return kExitOk;
}
