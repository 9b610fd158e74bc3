// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <unistd.h>

#include "codesign/pipeline.hpp"
#include "codesign/plots.hpp"

using namespace codesign;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, const char* label, bool pass, const std::string& detail) {
  std::printf("[%s] %2d. %-22s %s\n", pass ? "PASS" : "FAIL", criterion, label, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("codesign_accept_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// ---------------------------------------------------------------- criterion 1

void criterion_sampling() {
  RunConfig cfg = default_run_config();
  cfg.design.n_models = 5000;
  cfg.seed = 42;

  TempDir dir("sampling");
  RunPaths paths{dir.path};
  const double t0 = now_seconds();
  const GenerateSummary summary = cmd_generate(cfg, paths);
  const double elapsed = now_seconds() - t0;

  const ModelRegistry registry = registry_load(paths.models().string());
  bool ok = registry.size() == 5000 && summary.generated == 5000;

  std::set<std::array<double, 8>> unique;
  bool on_grid = true;
  for (const RobotModel& m : registry.models()) {
    std::array<double, 8> key{};
    for (int d = 0; d < 8; ++d) {
      key[d] = m.params[d];
      const ParameterRange& r = cfg.design.ranges[d];
      const double steps = (m.params[d] - r.min) / r.step;
      if (m.params[d] < r.min - 1e-12 || m.params[d] > r.max + 1e-12 ||
          std::abs(steps - std::round(steps)) > 1e-9) {
        on_grid = false;
      }
    }
    unique.insert(key);
  }
  ok = ok && on_grid && unique.size() == 5000;

  // Latin property of the pre-snap draw for the same (n, seed).
  Rng rng(derive_seed(cfg.seed, "ulh"));
  const Eigen::MatrixXd unit = latin_hypercube_unit(5000, kNumGeometricParams, rng);
  bool latin = true;
  for (int d = 0; d < kNumGeometricParams && latin; ++d) {
    std::set<int> strata;
    for (int i = 0; i < 5000; ++i) strata.insert(static_cast<int>(unit(i, d) * 5000));
    latin = strata.size() == 5000;
  }
  ok = ok && latin && elapsed < 60.0;

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%d unique on-grid models, latin=%s, discarded=%d, %.1f s (< 60 s)",
                static_cast<int>(unique.size()), latin ? "yes" : "no", summary.discarded, elapsed);
  report(1, "sampling protocol", ok, detail);
}

// ---------------------------------------------------------------- criterion 2

double brute_force_inertia(const std::vector<Eigen::VectorXd>& points, int k) {
  const int n = static_cast<int>(points.size());
  long total = 1;
  for (int i = 0; i < n; ++i) total *= k;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> assign(n);
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = 0; i < n; ++i) {
      assign[i] = static_cast<int>(c % k);
      c /= k;
    }
    std::vector<Eigen::VectorXd> sums(k, Eigen::VectorXd::Zero(points.front().size()));
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums[assign[i]] += points[i];
      ++counts[assign[i]];
    }
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      inertia += (points[i] - sums[assign[i]] / counts[assign[i]]).squaredNorm();
    }
    best = std::min(best, inertia);
  }
  return best;
}

void criterion_clustering() {
  Rng rng(7);
  int within = 0, monotone = 0;
  const int instances = 200;
  double worst_ratio = 0.0;
  for (int t = 0; t < instances; ++t) {
    const int n = 3 + rng.uniform_index(6);  // 3..8 points
    const int k = 1 + rng.uniform_index(3);  // 1..3
    const int dim = 1 + rng.uniform_index(4);
    std::vector<Eigen::VectorXd> points;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd p(dim);
      for (int d = 0; d < dim; ++d) p[d] = rng.uniform();
      points.push_back(p);
    }
    int distinct = 0;
    {
      std::set<std::vector<double>> s;
      for (const auto& p : points) s.insert(std::vector<double>(p.data(), p.data() + p.size()));
      distinct = static_cast<int>(s.size());
    }
    const int k_eff = std::min(k, distinct);
    const ClusterSet set = kmeans(points, k_eff, 5000 + t);
    const double optimal = brute_force_inertia(points, k_eff);
    const double ratio = optimal > 1e-15 ? set.inertia / optimal : 1.0;
    worst_ratio = std::max(worst_ratio, ratio);
    if (set.inertia <= 1.05 * optimal + 1e-12) ++within;
    bool mono = true;
    for (std::size_t i = 1; i < set.inertia_history.size(); ++i) {
      mono = mono && set.inertia_history[i] <= set.inertia_history[i - 1] + 1e-12;
    }
    if (mono) ++monotone;
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail), "%d/%d within 5%% of optimal (worst ratio %.4f), %d/%d monotone",
                within, instances, worst_ratio, monotone, instances);
  report(2, "clustering oracle", within == instances && monotone == instances, detail);
}

// ---------------------------------------------------------------- criterion 3

void criterion_trajectory() {
  bool ok = true;
  Rng rng(11);

  // Boundary conditions to 1e-9 on random segments.
  for (int t = 0; t < 50; ++t) {
    Eigen::Vector3d p0, p1, v0, v1, a0, a1;
    for (int i = 0; i < 3; ++i) {
      p0[i] = rng.normal();
      p1[i] = rng.normal();
      v0[i] = rng.normal();
      v1[i] = rng.normal();
      a0[i] = rng.normal();
      a1[i] = rng.normal();
    }
    const double T = 0.5 + 3.0 * rng.uniform();
    const QuinticSegment seg = min_jerk_segment(p0, p1, v0, v1, a0, a1, T);
    ok = ok && (seg.position(0) - p0).norm() < 1e-9 && (seg.position(T) - p1).norm() < 1e-9 &&
         (seg.velocity(0) - v0).norm() < 1e-9 && (seg.velocity(T) - v1).norm() < 1e-9 &&
         (seg.acceleration(0) - a0).norm() < 1e-9 && (seg.acceleration(T) - a1).norm() < 1e-9;
  }

  // Rest-to-rest peak speed 15 dp / (8 T), relative 1e-9.
  double peak_rel_err = 0.0;
  for (int t = 0; t < 20; ++t) {
    Eigen::Vector3d p1;
    for (int i = 0; i < 3; ++i) p1[i] = rng.normal();
    const double T = 0.5 + 2.0 * rng.uniform();
    const QuinticSegment seg = min_jerk_segment(Eigen::Vector3d::Zero(), p1, Eigen::Vector3d::Zero(),
                                                Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(),
                                                Eigen::Vector3d::Zero(), T);
    const double expected = 15.0 * p1.norm() / (8.0 * T);
    peak_rel_err = std::max(peak_rel_err, std::abs(seg.velocity(T / 2).norm() - expected) / expected);
  }
  ok = ok && peak_rel_err < 1e-9;

  // C2 continuity at junctions of a multi-waypoint plan.
  std::vector<Waypoint> wp(4);
  wp[0].position = {0, 0, 1};
  wp[1].position = {2, 1, 1.5};
  wp[1].direction_cue = Eigen::Vector3d(1, 1, 0).normalized();
  wp[1].dwell_speed = 0.9;
  wp[2].position = {4, 3, 1.2};
  wp[2].direction_cue = {0, 1, 0};
  wp[2].dwell_speed = 0.7;
  wp[3].position = {5, 5, 1.0};
  std::vector<QuinticSegment> segs;
  const std::vector<double> durations = {2.2, 1.9, 2.7};
  for (int i = 0; i < 3; ++i) {
    segs.push_back(min_jerk_segment(
        wp[i].position, wp[i + 1].position, wp[i].dwell_speed * wp[i].direction_cue.normalized(),
        wp[i + 1].dwell_speed * wp[i + 1].direction_cue.normalized(), Eigen::Vector3d::Zero(),
        Eigen::Vector3d::Zero(), durations[i]));
  }
  double junction_err = 0.0;
  for (int i = 0; i + 1 < 3; ++i) {
    const double T = durations[i];
    junction_err = std::max(junction_err, (segs[i].position(T) - segs[i + 1].position(0)).norm());
    junction_err = std::max(junction_err, (segs[i].velocity(T) - segs[i + 1].velocity(0)).norm());
    junction_err = std::max(junction_err, (segs[i].acceleration(T) - segs[i + 1].acceleration(0)).norm());
  }
  ok = ok && junction_err < 1e-9;

  char detail[160];
  std::snprintf(detail, sizeof(detail), "boundaries 1e-9, peak rel err %.2e, junction err %.2e",
                peak_rel_err, junction_err);
  report(3, "trajectory math", ok, detail);
}

// ---------------------------------------------------------------- criterion 4

void criterion_linearization() {
  const RunConfig cfg = default_run_config();
  const auto samples = sample_parameter_grid(cfg.design.ranges, 10, 77);
  Rng rng(13);
  ReferenceSample ref;
  double worst = 0.0;
  int points_checked = 0;
  for (const GeometricParams& params : samples) {
    const RobotModel model = build_model(params, cfg.base);
    const HoverPoint hover = hover_thrust(model);
    for (int t = 0; t < 20; ++t) {
      FlightState op = FlightState::zero(model.num_thrusters());
      op.x_com = {rng.normal(), rng.normal(), 2.0 + 0.5 * rng.normal()};
      op.l = 2.0 * Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal());
      op.phi = 0.25 * Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal());
      op.w = 0.5 * Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal());
      op.thrust = hover.thrust;
      for (int k = 0; k < model.num_thrusters(); ++k) {
        op.thrust[k] = std::clamp(op.thrust[k] * (0.8 + 0.4 * rng.uniform()),
                                  model.thrusters[k].t_min, model.thrusters[k].t_max);
        op.thrust_rate[k] = 5.0 * rng.normal();
      }
      ControlInput in = ControlInput::zero(model.num_joints(), model.num_thrusters());
      for (int j = 0; j < model.num_joints(); ++j) in.delta_s[j] = 0.1 * rng.normal();
      in.u_th = hover.throttle;

      const LinearizedModel lin = linearize(model, op, in, ref, 0.1);

      // Richardson-extrapolated oracle at a different base step.
      const int n_p = model.num_thrusters();
      const int n_j = model.num_joints();
      const Eigen::VectorXd x0 = op.to_vector();
      const Eigen::VectorXd u0 = in.to_vector();
      auto f = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        return dynamics(FlightState::from_vector(x, n_p), ControlInput::from_vector(u, n_j, n_p),
                        model, ref)
            .to_vector();
      };
      auto column = [&](int idx, double h, bool wrt_state) {
        Eigen::VectorXd hi = wrt_state ? x0 : u0, lo = hi;
        hi[idx] += h;
        lo[idx] -= h;
        return wrt_state ? Eigen::VectorXd((f(hi, u0) - f(lo, u0)) / (2 * h))
                         : Eigen::VectorXd((f(x0, hi) - f(x0, lo)) / (2 * h));
      };
      Eigen::MatrixXd a_oracle(x0.size(), x0.size()), b_oracle(x0.size(), u0.size());
      for (int i = 0; i < x0.size(); ++i) {
        const double h = 1e-4 * std::max(1.0, std::abs(x0[i]));
        a_oracle.col(i) = (4.0 * column(i, h / 2, true) - column(i, h, true)) / 3.0;
      }
      for (int i = 0; i < u0.size(); ++i) {
        const double h = 1e-4 * std::max(1.0, std::abs(u0[i]));
        b_oracle.col(i) = (4.0 * column(i, h / 2, false) - column(i, h, false)) / 3.0;
      }
      const double a_err =
          (lin.A - a_oracle).cwiseAbs().maxCoeff() / std::max(1.0, a_oracle.cwiseAbs().maxCoeff());
      const double b_err =
          (lin.B - b_oracle).cwiseAbs().maxCoeff() / std::max(1.0, b_oracle.cwiseAbs().maxCoeff());
      worst = std::max({worst, a_err, b_err});
      ++points_checked;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail), "%d operating points over 10 models, worst rel err %.2e",
                points_checked, worst);
  report(4, "linearization", worst < 1e-4 && points_checked == 200, detail);
}

// ---------------------------------------------------------------- criterion 5

Eigen::VectorXd coordinate_descent(const QpProblem& qp) {
  const int n = qp.size();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n).cwiseMax(qp.lower).cwiseMin(qp.upper);
  double prev = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < 100000; ++sweep) {
    for (int i = 0; i < n; ++i) {
      const double hii = qp.hessian(i, i);
      const double slope = qp.gradient[i] + qp.hessian.row(i).dot(z) - hii * z[i];
      z[i] = hii > 0.0 ? std::clamp(-slope / hii, qp.lower[i], qp.upper[i])
                       : (slope > 0.0 ? qp.lower[i] : slope < 0.0 ? qp.upper[i] : z[i]);
    }
    const double obj = 0.5 * z.dot(qp.hessian * z) + qp.gradient.dot(z);
    if (prev - obj < 1e-15 * (1.0 + std::abs(prev))) break;
    prev = obj;
  }
  return z;
}

void criterion_qp() {
  Rng rng(99);
  int optimal = 0, kkt_ok = 0, oracle_ok = 0;
  const int instances = 100;
  for (int t = 0; t < instances; ++t) {
    const int n = 2 + rng.uniform_index(39);
    const int m = 1 + rng.uniform_index(n);
    Eigen::MatrixXd factor(m, n);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < n; ++c) factor(r, c) = rng.normal();
    }
    QpProblem qp;
    qp.hessian = factor.transpose() * factor;
    if (rng.uniform() < 0.5) qp.hessian += (0.1 + rng.uniform()) * Eigen::MatrixXd::Identity(n, n);
    qp.gradient.resize(n);
    qp.lower.resize(n);
    qp.upper.resize(n);
    for (int i = 0; i < n; ++i) {
      qp.gradient[i] = 3.0 * rng.normal();
      const double a = 2.0 * rng.normal(), b = 2.0 * rng.normal();
      qp.lower[i] = std::min(a, b);
      qp.upper[i] = std::max(a, b);
    }
    QpSettings settings;
    settings.max_iter = 20000;
    const QpSolution sol = solve_qp(qp, {}, settings);
    if (sol.status != QpStatus::Optimal) continue;
    ++optimal;
    if (kkt_satisfied(qp, sol.solution, 1e-6)) ++kkt_ok;
    const Eigen::VectorXd oracle = coordinate_descent(qp);
    const double oracle_obj = 0.5 * oracle.dot(qp.hessian * oracle) + qp.gradient.dot(oracle);
    if (std::abs(sol.objective - oracle_obj) <= 1e-5 * std::max(1.0, std::abs(oracle_obj))) {
      ++oracle_ok;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail), "%d/%d optimal, %d KKT-certified, %d oracle-matched", optimal,
                instances, kkt_ok, oracle_ok);
  report(5, "qp certification", optimal == instances && kkt_ok == optimal && oracle_ok == optimal,
         detail);
}

// ---------------------------------------------------------------- criterion 6

void criterion_objectives() {
  std::vector<Eigen::Vector3d> ref(10, Eigen::Vector3d(1, 2, 3));
  std::vector<Eigen::Vector3d> off = ref;
  for (auto& p : off) p += Eigen::Vector3d(3, 4, 0);
  const double mse = tracking_mse(off, ref);
  const bool mse_ok = std::abs(mse - std::sqrt(337.0)) <= 1e-12 * std::sqrt(337.0);

  const double e_alt = energy({5.0, -5.0, 5.0, -5.0}, 0.1);
  const bool alt_ok = e_alt == 2.0;

  const double e_const = energy(std::vector<double>(10, 10.0), 0.1);
  const bool const_ok = std::abs(e_const - 10.0) < 1e-12;

  char detail[160];
  std::snprintf(detail, sizeof(detail), "sqrt(337) err %.2e, alternating %.17g J, dt=0.1 sum %.17g J",
                std::abs(mse - std::sqrt(337.0)), e_alt, e_const);
  report(6, "objective formulas", mse_ok && alt_ok && const_ok, detail);
}

// ---------------------------------------------------------------- criterion 7

void criterion_constraint_gate() {
  const RunConfig cfg = default_run_config();
  const RobotModel model = build_model(GeometricParams{}, cfg.base);

  std::vector<Waypoint> wp(3);
  wp[0].position = {0, 0, 1};
  wp[1].position = {0, 0, 1};
  wp[2].position = {10, 0, 1};
  const ReferenceTrajectory teleport = build_trajectory(wp, {2.0, 0.1}, 0.1);
  const SimResult sim = simulate_closed_loop(model, ControlWeights{}, teleport, cfg.mpc);

  // The reference jumps inside (2.0, 2.1]; the gate must trip at the first
  // sample whose reference is out of reach, with the log ending right there.
  int first_offending = -1;
  for (int k = 0; k <= static_cast<int>(teleport.duration() / 0.1); ++k) {
    if ((teleport.at(k * 0.1).x_ref - Eigen::Vector3d(0, 0, 1)).norm() > cfg.mpc.error_threshold) {
      first_offending = k;
      break;
    }
  }
  const bool ok = sim.failed && sim.failure_reason == FailureReason::ErrorThreshold &&
                  first_offending > 0 && sim.steps_completed == first_offending &&
                  static_cast<int>(sim.states.size()) == first_offending;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "failed=%s reason=%s at step %d (first offending %d)",
                sim.failed ? "yes" : "no", to_string(sim.failure_reason), sim.steps_completed,
                first_offending);
  report(7, "constraint gate", ok, detail);
}

// ---------------------------------------------------------------- criterion 8

void criterion_nsga2() {
  Rng rng(123);
  bool sort_ok = true, front_ok = true;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + rng.uniform_index(63);
    std::vector<Individual> pop(n);
    for (int i = 0; i < n; ++i) {
      pop[i].objectives.mse_total = rng.uniform_index(10);
      pop[i].objectives.energy = rng.uniform_index(10);
      pop[i].objectives.feasible = rng.uniform() < 0.85;
      pop[i].candidate_id = i;
    }

    // Peeling oracle for the fronts.
    std::vector<bool> taken(n, false);
    std::vector<std::vector<int>> oracle;
    int remaining = n;
    while (remaining > 0) {
      std::vector<int> front;
      for (int i = 0; i < n; ++i) {
        if (taken[i]) continue;
        bool dominated = false;
        for (int j = 0; j < n && !dominated; ++j) {
          if (!taken[j] && j != i) dominated = dominates(pop[j].objectives, pop[i].objectives);
        }
        if (!dominated) front.push_back(i);
      }
      for (int i : front) taken[i] = true;
      remaining -= static_cast<int>(front.size());
      oracle.push_back(std::move(front));
    }
    const auto fast = non_dominated_sort(pop);
    if (fast.size() != oracle.size()) {
      sort_ok = false;
    } else {
      for (std::size_t f = 0; f < fast.size(); ++f) {
        if (std::set<int>(fast[f].begin(), fast[f].end()) !=
            std::set<int>(oracle[f].begin(), oracle[f].end())) {
          sort_ok = false;
        }
      }
    }

    // Feasible non-dominated filter oracle.
    std::set<std::int64_t> expected;
    bool any_feasible = false;
    for (const Individual& a : pop) {
      if (!a.objectives.feasible) continue;
      any_feasible = true;
      bool dominated = false;
      for (const Individual& b : pop) {
        if (b.objectives.feasible && dominates(b.objectives, a.objectives)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) expected.insert(a.candidate_id);
    }
    if (any_feasible) {
      std::set<std::int64_t> got;
      for (const Individual& i : pareto_front(pop)) got.insert(i.candidate_id);
      front_ok = front_ok && got == expected;
    }
  }

  // Operator statistics at the configured rates.
  GaConfig cfg;
  cfg.k = 1009;
  cfg.population = 16;
  Genome g;
  for (int i = 0; i < 8; ++i) g.weight_genes[i] = -1.0 + 0.5 * i;
  g.centroid_gene = 500;
  double mutated_genes = 0.0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    const Genome m = mutate(g, rng, cfg);
    for (int i = 0; i < 8; ++i) mutated_genes += m.weight_genes[i] != g.weight_genes[i] ? 1 : 0;
    mutated_genes += m.centroid_gene != g.centroid_gene ? 1 : 0;
  }
  const double expected_mutations = mutated_genes / draws;
  const bool mutation_ok = std::abs(expected_mutations - 0.99) <= 0.02;

  Genome h = g;
  for (int i = 0; i < 8; ++i) h.weight_genes[i] += 0.37;
  int fired = 0;
  for (int t = 0; t < draws; ++t) fired += crossover(g, h, rng, cfg).fired ? 1 : 0;
  const double crossover_rate = static_cast<double>(fired) / draws;
  const bool crossover_ok = std::abs(crossover_rate - 0.90) <= 0.01;

  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "1000 archives sorted/filtered %s, mutations/genome %.4f (0.99 +/- 0.02), crossover "
                "rate %.4f (0.90 +/- 0.01)",
                sort_ok && front_ok ? "exactly" : "WRONG", expected_mutations, crossover_rate);
  report(8, "nsga-ii correctness", sort_ok && front_ok && mutation_ok && crossover_ok, detail);
}

// ---------------------------------------------------------------- criterion 9

void criterion_synthetic_front() {
  GaConfig cfg;
  cfg.population = 16;
  cfg.generations = 10;
  cfg.seed = 12;
  cfg.k = 4;

  BatchEvaluator evaluate = [](const std::vector<std::pair<std::int64_t, Genome>>& batch, int) {
    std::vector<Objectives> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const double z = batch[i].second.weight_genes[0];
      out[i].mse_total = z * z;
      out[i].energy = (z - 2.0) * (z - 2.0);
      out[i].feasible = true;
    }
    return out;
  };

  const double t0 = now_seconds();
  Rng init_rng(derive_seed(cfg.seed, "nsga2-init"));
  const EvolveResult result = evolve(cfg, evaluate, initial_population(cfg, init_rng));
  const double elapsed = now_seconds() - t0;

  double worst = 0.0;
  const auto front = pareto_front(result.archive);
  for (const Individual& i : front) {
    double best = std::numeric_limits<double>::infinity();
    for (double z = 0.0; z <= 2.0 + 1e-12; z += 1e-4) {
      const double dx = i.objectives.mse_total - z * z;
      const double dy = i.objectives.energy - (z - 2.0) * (z - 2.0);
      best = std::min(best, std::hypot(dx, dy));
    }
    worst = std::max(worst, best);
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail), "front of %d, worst distance %.4f (< 0.05), %.2f s (< 10 s)",
                static_cast<int>(front.size()), worst, elapsed);
  report(9, "synthetic front recovery", !front.empty() && worst < 0.05 && elapsed < 10.0, detail);
}

// --------------------------------------------------------------- criterion 10

void criterion_desk_scale() {
  RunConfig cfg = default_run_config();
  cfg.seed = 7;
  cfg.design.n_models = 500;
  cfg.clustering.k = 20;
  cfg.ga.population = 16;
  cfg.ga.generations = 12;
  cfg.ga.crossover_prob = 0.90;
  cfg.ga.mutation_prob = 0.11;

  const double t0 = now_seconds();
  TempDir dir_a("desk_a");
  RunPaths paths_a{dir_a.path};
  cmd_generate(cfg, paths_a);
  cmd_cluster(cfg, paths_a);
  cmd_trajectory(cfg, paths_a);
  const OptimizeSummary opt = cmd_optimize(cfg, paths_a, 1, false);
  const double elapsed = now_seconds() - t0;

  const auto archive = load_eval_ledger(paths_a.evals().string(), config_hash(cfg));
  bool ok = opt.front_size >= 1 && archive.size() == 16 * 13;

  const auto front = front_of_records(archive);
  int feasible_front = 0;
  bool undominated = true;
  for (const EvalRecord& m : front) {
    if (m.objectives.feasible) ++feasible_front;
    for (const EvalRecord& other : archive) {
      if (other.objectives.feasible && dominates(other.objectives, m.objectives)) {
        undominated = false;
      }
    }
  }
  ok = ok && feasible_front == static_cast<int>(front.size()) && undominated;

  // Rerun with parallel evaluation: byte-identical artifacts.
  TempDir dir_b("desk_b");
  RunPaths paths_b{dir_b.path};
  cmd_generate(cfg, paths_b);
  cmd_cluster(cfg, paths_b);
  cmd_trajectory(cfg, paths_b);
  cmd_optimize(cfg, paths_b, 4, false);
  const bool identical = slurp(paths_a.models()) == slurp(paths_b.models()) &&
                         slurp(paths_a.clusters()) == slurp(paths_b.clusters()) &&
                         slurp(paths_a.trajectory()) == slurp(paths_b.trajectory()) &&
                         slurp(paths_a.evals()) == slurp(paths_b.evals()) &&
                         slurp(paths_a.pareto()) == slurp(paths_b.pareto());
  ok = ok && identical && elapsed < 600.0;

  int archive_feasible = 0;
  for (const EvalRecord& r : archive) archive_feasible += r.objectives.feasible ? 1 : 0;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "front %d (all feasible, undominated), %d/%d evals feasible, jobs-invariant=%s, "
                "%.0f s (< 600 s)",
                opt.front_size, archive_feasible, static_cast<int>(archive.size()),
                identical ? "yes" : "no", elapsed);
  report(10, "desk-scale end-to-end", ok, detail);
}

// --------------------------------------------------------------- criterion 11

void criterion_hover_sanity() {
  const RunConfig cfg = default_run_config();
  const RobotModel model = build_model(GeometricParams{}, cfg.base);
  std::vector<Waypoint> wp(2);
  wp[0].position = wp[1].position = Eigen::Vector3d(0, 0, 1.0);
  const ReferenceTrajectory hover = build_trajectory(wp, {10.0}, 0.1);
  const SimResult sim = simulate_closed_loop(model, cfg.default_weights, hover, cfg.mpc);

  double max_err = 0.0;
  for (std::size_t i = 0; i < sim.states.size(); ++i) {
    max_err = std::max(max_err, (sim.states[i].x_com - hover.at(sim.times[i]).x_ref).norm());
  }
  const double e = sim.states.empty() ? 1e9 : energy(power_trace(sim, model), cfg.mpc.dt);
  const bool ok = !sim.failed && sim.steps_completed == 100 && max_err < 0.05 && std::abs(e) < 0.5;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "max position error %.2e m (< 0.05), energy %.3f J (< 0.5)",
                max_err, e);
  report(11, "hover sanity", ok, detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_sampling();
  criterion_clustering();
  criterion_trajectory();
  criterion_linearization();
  criterion_qp();
  criterion_objectives();
  criterion_constraint_gate();
  criterion_nsga2();
  criterion_synthetic_front();
  criterion_desk_scale();
  criterion_hover_sanity();
  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
  return failures == 0 ? 0 : 1;
}
