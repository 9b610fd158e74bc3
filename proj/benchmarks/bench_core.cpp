#include <benchmark/benchmark.h>

#include "codesign/clustering.hpp"
#include "codesign/mpc.hpp"
#include "codesign/run_config.hpp"

using namespace codesign;

namespace {

const RunConfig& config() {
  static const RunConfig cfg = default_run_config();
  return cfg;
}

const RobotModel& baseline_model() {
  static const RobotModel model = build_model(GeometricParams{}, config().base);
  return model;
}

void BM_SampleParameterGrid(benchmark::State& state) {
  const RangeSet ranges = default_ranges();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_parameter_grid(ranges, n, 42));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleParameterGrid)->Arg(500)->Arg(5000);

void BM_BuildModel(benchmark::State& state) {
  const auto samples = sample_parameter_grid(default_ranges(), 64, 7);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_model(samples[i++ % samples.size()], config().base));
  }
}
BENCHMARK(BM_BuildModel);

void BM_FeasibilityFilter(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(feasibility_filter(baseline_model(), config().base));
  }
}
BENCHMARK(BM_FeasibilityFilter);

void BM_Kmeans(benchmark::State& state) {
  Rng rng(3);
  std::vector<Eigen::VectorXd> points;
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
    Eigen::VectorXd p(8);
    for (int d = 0; d < 8; ++d) p[d] = rng.uniform();
    points.push_back(p);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(kmeans(points, static_cast<int>(state.range(1)), 5));
  }
}
BENCHMARK(BM_Kmeans)->Args({500, 20})->Args({5000, 100});

void BM_Linearize(benchmark::State& state) {
  const RobotModel& model = baseline_model();
  const HoverPoint hover = hover_thrust(model);
  FlightState op = FlightState::zero(model.num_thrusters());
  op.thrust = hover.thrust;
  ControlInput in = ControlInput::zero(model.num_joints(), model.num_thrusters());
  in.u_th = hover.throttle;
  for (auto _ : state) {
    benchmark::DoNotOptimize(linearize(model, op, in, ReferenceSample{}, 0.1));
  }
}
BENCHMARK(BM_Linearize);

void BM_MpcStep(benchmark::State& state) {
  const RobotModel& model = baseline_model();
  const HoverPoint hover = hover_thrust(model);
  FlightState st = FlightState::zero(model.num_thrusters());
  st.thrust = hover.thrust;
  st.x_com.z() = -0.05;  // small regulation task
  ControlInput in = ControlInput::zero(model.num_joints(), model.num_thrusters());
  in.u_th = hover.throttle;
  const LinearizedModel lin = linearize(model, st, in, ReferenceSample{}, 0.1);
  const std::vector<ReferenceSample> window(10);
  const MpcConfig cfg = config().mpc;
  std::optional<Eigen::VectorXd> warm;
  for (auto _ : state) {
    const MpcStepResult step = mpc_step(model, lin, ControlWeights{}, st, window, in.u_th, warm, cfg);
    warm = step.qp.solution;
    benchmark::DoNotOptimize(step.input);
  }
}
BENCHMARK(BM_MpcStep);

void BM_ClosedLoopHover(benchmark::State& state) {
  std::vector<Waypoint> wp(2);
  wp[0].position = wp[1].position = Eigen::Vector3d(0, 0, 1.0);
  const ReferenceTrajectory traj = build_trajectory(wp, {5.0}, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_closed_loop(baseline_model(), ControlWeights{}, traj, config().mpc));
  }
}
BENCHMARK(BM_ClosedLoopHover);

}  // namespace

BENCHMARK_MAIN();
