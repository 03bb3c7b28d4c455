// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "infogather/experiments.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "infogather/errors.h"
#include "infogather/trajopt.h"

namespace infogather {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::mt19937_64 SeededRng(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream),
                    static_cast<uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Eigen::Vector3d Position(const Eigen::VectorXd& x) { return x.head<3>(); }

bool InAnyRegion(const CostField& field, double x, double y) {
  for (const CostRegion& r : field.regions) {
    if (r.Contains(x, y)) return true;
  }
  return false;
}

double MaxSafetyRadius(const ScenarioConfig& config) {
  double d = 0.0;
  for (const RobotConfig& r : config.robots) d = std::max(d, r.safety_radius);
  return d;
}

Eigen::VectorXd IntegratorState(const UnicycleState& s, int order) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3 * order);
  x.head<3>() << s.x, s.y, s.altitude;
  return x;
}

ControllerParams MakeControllerParams(const ScenarioConfig& config,
                                      const RobotConfig& robot) {
  const ControllerConfig& k = config.controller;
  ControllerParams p;
  p.spec.order = k.order;
  p.barrier.safety_radius = robot.safety_radius;
  p.barrier.z_scale = k.z_scale;
  p.barrier.k_eta = PolePlaceKeta(k.poles);
  p.beta = k.beta;
  p.responsibility = k.responsibility;
  p.box.input = k.input_limit;
  p.box.velocity = k.velocity_limit;
  p.box.velocity_gain = k.velocity_gain;
  if (k.arena_limits) {
    p.box.position_min = Eigen::Vector3d(config.arena.min.x(),
                                         config.arena.min.y(), -1e6);
    p.box.position_max = Eigen::Vector3d(config.arena.max.x(),
                                         config.arena.max.y(), 1e6);
  }
  return p;
}

// Minimum pairwise barrier value, with the larger safety radius per pair.
double MinPairwiseH(std::span<const Eigen::VectorXd> x,
                    std::span<const ControllerParams> params) {
  double min_h = kInf;
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = i + 1; j < x.size(); ++j) {
      BarrierSpec pair = params[i].barrier;
      pair.safety_radius = std::max(params[i].barrier.safety_radius,
                                    params[j].barrier.safety_radius);
      min_h = std::min(min_h, BarrierH(Position(x[i]), Position(x[j]), pair));
    }
  }
  return min_h;
}

Eigen::Vector3d BrakeInput(const Eigen::VectorXd& x,
                           const ControllerParams& params) {
  if (params.spec.order != 2) return Eigen::Vector3d::Zero();
  Eigen::Vector3d u = -params.box.velocity_gain * x.segment<3>(3);
  if (params.box.input.has_value()) {
    u = u.cwiseMax(-*params.box.input).cwiseMin(*params.box.input);
  }
  return u;
}

struct ControlStats {
  double effort = 0.0;  // sum over robots of the integral of |u|^2
  double min_h = kInf;
  int64_t infeasible = 0;
  double max_abs_u = 0.0;
};

// Integrates every robot through one LQR segment with the safety filter.
void SimulateSegment(std::vector<Eigen::VectorXd>& x,
                     std::span<const LqrSegment> segments, double t0,
                     double duration, double dt,
                     std::span<const ControllerParams> params,
                     std::vector<Eigen::Vector3d>& last_u,
                     std::vector<std::vector<int>>& warm,
                     ControlStats& stats) {
  const int n = static_cast<int>(x.size());
  const int steps = static_cast<int>(std::lround(duration / dt));
  stats.min_h = std::min(stats.min_h, MinPairwiseH(x, params));
  std::vector<Eigen::Vector3d> u_lqr(n);
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    for (int i = 0; i < n; ++i) {
      u_lqr[i] = LqrControl(x[i], t, segments[i], last_u[i]).u;
    }
    const SafetyStepResult res =
        DecentralizedSafetyStep(x, u_lqr, params, warm);
    warm = res.active_sets;
    for (int i = 0; i < n; ++i) {
      Eigen::Vector3d u = res.u[i];
      if (res.status[i] != QpStatus::kOptimal) {
        ++stats.infeasible;
        u = BrakeInput(x[i], params[i]);
      }
      x[i] = IntegrateRk4(params[i].spec, x[i], u, dt);
      stats.effort += u.squaredNorm() * dt;
      stats.max_abs_u = std::max(stats.max_abs_u, u.cwiseAbs().maxCoeff());
      last_u[i] = u;
    }
    stats.min_h = std::min(stats.min_h, MinPairwiseH(x, params));
  }
}

void EkfUpdate(const UnicycleState& pose, const SensorModel& sensor, int off,
               const Eigen::Vector2d& truth, std::mt19937_64& rng,
               Belief& belief) {
  std::optional<SensorLinearization> seen;
  std::optional<SensorLinearization> lin;
  SensorModel wide = sensor;
  wide.max_range = kInf;
  wide.fov = 2.0 * kPi;
  try {
    seen = LinearizeSensor(pose, sensor, truth);
    if (!seen.has_value()) return;
    lin = LinearizeSensor(pose, wide, belief.mean.segment<2>(off));
  } catch (const DegenerateGeometryError&) {
    return;
  }
  const int dz = sensor.measurement_dim();
  std::normal_distribution<double> normal;
  Eigen::VectorXd z = seen->predicted;
  for (int r = 0; r < dz; ++r) z(r) += std::sqrt(seen->noise(r, r)) * normal(rng);
  Eigen::VectorXd innovation = z - lin->predicted;
  if (sensor.kind != SensorKind::kRange) {
    innovation(dz - 1) = WrapAngle(innovation(dz - 1));
  }
  const int n = static_cast<int>(belief.mean.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dz, n);
  h.middleCols(off, 2) = lin->jacobian;
  const Eigen::MatrixXd& v = seen->noise;
  const Eigen::MatrixXd s = h * belief.cov * h.transpose() + v;
  const Eigen::MatrixXd gain =
      s.llt().solve(h * belief.cov).transpose();  // P H^T S^-1
  belief.mean += gain * innovation;
  const Eigen::MatrixXd ikh = Eigen::MatrixXd::Identity(n, n) - gain * h;
  belief.cov = ikh * belief.cov * ikh.transpose() + gain * v * gain.transpose();
  belief.cov = 0.5 * (belief.cov + belief.cov.transpose());
}

struct TrackingErrors {
  double rmse = 0.0;
  double filter_rmse = 0.0;
};

TrackingErrors Errors(const WorldState& w) {
  TrackingErrors e;
  const int blocks = w.targets.num_blocks();
  if (blocks == 0) return e;
  for (int b = 0; b < blocks; ++b) {
    const int off = w.targets.offset(b);
    e.rmse += (w.truth.segment<2>(off) - w.belief.mean.segment<2>(off))
                  .squaredNorm();
    e.filter_rmse += w.belief.cov(off, off) + w.belief.cov(off + 1, off + 1);
  }
  e.rmse = std::sqrt(e.rmse / blocks);
  e.filter_rmse = std::sqrt(e.filter_rmse / blocks);
  return e;
}

std::string AssignmentString(const std::vector<TrajectoryId>& set, int robots) {
  std::ostringstream out;
  for (int i = 0; i < robots; ++i) {
    if (i) out << ' ';
    out << i << ':';
    auto it = std::find_if(set.begin(), set.end(),
                           [&](const TrajectoryId& id) { return id.robot == i; });
    if (it == set.end()) {
      out << '-';
    } else {
      out << it->index;
    }
  }
  return out.str();
}

PlannerVariant VariantFromConfig(const PlannerConfig& p) {
  return {p.algorithm, p.options, p.cd_order};
}

double WallSeconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

WorldState InitialWorld(const ScenarioConfig& config, std::mt19937_64& rng) {
  WorldState w;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  const Eigen::Vector2d lo = config.arena.min;
  const Eigen::Vector2d span = config.arena.max - config.arena.min;
  const double margin = 0.1;
  auto sample_xy = [&] {
    return Eigen::Vector2d(lo.x() + span.x() * (margin + (1 - 2 * margin) * unit(rng)),
                           lo.y() + span.y() * (margin + (1 - 2 * margin) * unit(rng)));
  };

  const double clearance = 2.0 * MaxSafetyRadius(config) + 0.5;
  for (const RobotConfig& r : config.robots) {
    UnicycleState s = r.initial;
    if (config.spawn.robots) {
      bool placed = false;
      for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
        const Eigen::Vector2d p = sample_xy();
        if (config.spawn.avoid_regions &&
            InAnyRegion(config.field, p.x(), p.y())) {
          continue;
        }
        placed = std::all_of(w.poses.begin(), w.poses.end(),
                             [&](const UnicycleState& o) {
                               return (o.position() - p).norm() >= clearance;
                             });
        s.x = p.x();
        s.y = p.y();
      }
      if (!placed) throw ConfigError("could not place robots in the arena");
      s.theta = WrapAngle(2.0 * kPi * unit(rng));
    }
    w.poses.push_back(s);
    w.x.push_back(IntegratorState(s, config.controller.order));
  }

  std::vector<TargetBlock> blocks;
  std::vector<Eigen::VectorXd> truth;
  std::vector<Eigen::VectorXd> mean;
  std::vector<double> variances;
  for (const TargetConfig& t : config.targets) {
    Eigen::VectorXd y = t.truth;
    Eigen::VectorXd m = t.prior_mean;
    if (config.spawn.targets) {
      y.head<2>() = sample_xy();
      if (t.kind == TargetKind::kDoubleIntegrator) {
        const double heading = 2.0 * kPi * unit(rng);
        y.tail<2>() << config.spawn.target_speed * std::cos(heading),
            config.spawn.target_speed * std::sin(heading);
      }
      m = y;
    }
    for (int k = 0; k < 2; ++k) {
      m(k) += config.spawn.prior_offset_std * normal(rng);
    }
    if (t.kind == TargetKind::kStatic) {
      blocks.push_back(StaticTargetBlock(t.noise));
      variances.insert(variances.end(), 2, t.position_std * t.position_std);
    } else {
      blocks.push_back(DoubleIntegratorBlock(config.planner.tau, t.noise));
      variances.insert(variances.end(), 2, t.position_std * t.position_std);
      variances.insert(variances.end(), 2, t.velocity_std * t.velocity_std);
    }
    truth.push_back(y);
    mean.push_back(m);
  }
  w.targets = TargetModel(std::move(blocks));
  const int dim = w.targets.dim();
  w.truth.resize(dim);
  w.belief.mean.resize(dim);
  for (size_t b = 0; b < truth.size(); ++b) {
    const int off = w.targets.offset(static_cast<int>(b));
    w.truth.segment(off, truth[b].size()) = truth[b];
    w.belief.mean.segment(off, mean[b].size()) = mean[b];
  }
  w.belief.cov = Eigen::Map<const Eigen::VectorXd>(variances.data(), dim)
                     .asDiagonal();
  return w;
}

double PlannedLqrEnergy(const ReferencePlan& plan, int order) {
  IntegratorSpec spec{order};
  double total = 0.0;
  for (size_t k = 0; k + 1 < plan.waypoints.size(); ++k) {
    const int kk = static_cast<int>(k);
    LqrSegment seg{spec, Eigen::Matrix3d::Identity(), plan.time(kk + 1),
                   plan.waypoints[k + 1]};
    total += LqrEnergy(seg, plan.waypoints[k], plan.time(kk));
  }
  return total;
}

PlanningInstance BuildPlanningInstance(const ScenarioConfig& config,
                                       const WorldState& world) {
  const PlannerConfig& pc = config.planner;
  const int order = config.controller.order;
  OracleContext ctx =
      OracleContext::Create(world.targets, world.belief, pc.horizon, 0.0);
  const std::vector<Eigen::VectorXd> means =
      PredictedMeans(world.targets, world.belief.mean, pc.horizon);

  PlanningInstance inst;
  auto ground = std::make_shared<GroundSet>();
  for (size_t i = 0; i < config.robots.size(); ++i) {
    const RobotConfig& robot = config.robots[i];
    const double weight = robot.cost.weight;
    SearchProblem problem;
    problem.robot = static_cast<int>(i);
    problem.initial = world.poses[i];
    problem.primitives = robot.primitives;
    problem.sensor = robot.sensor;
    problem.tau = pc.tau;
    problem.arena = config.arena;
    if (pc.energy_model == EnergyModel::kTable) {
      problem.energy = [&robot, &config](std::span<const MotionPrimitive> u,
                                         std::span<const UnicycleState> s) {
        return TrajectoryEnergy(u, s, robot.cost, config.field);
      };
    } else {
      const Eigen::VectorXd x0 = world.x[i];
      problem.energy = [x0, order, weight, tau = pc.tau](
                           std::span<const MotionPrimitive> u,
                           std::span<const UnicycleState> s) {
        const ReferencePlan plan =
            MakeReferencePlan(s, u, x0, order, 0.0, tau);
        return weight * PlannedLqrEnergy(plan, order);
      };
    }
    std::vector<CandidateTrajectory> cands =
        GenerateCandidates(problem, ctx, means, pc.prune);
    double bound = 0.0;
    if (robot.cost_bound.has_value()) {
      bound = *robot.cost_bound;
    } else if (pc.energy_model == EnergyModel::kTable) {
      bound = robot.cost.DefaultCostBound(pc.horizon);
    } else if (weight > 0.0) {
      for (const CandidateTrajectory& c : cands) {
        bound = std::max(bound, c.energy / weight);
      }
    }
    inst.weights.push_back(weight);
    inst.cost_bounds.push_back(bound);
    ground->push_back(std::move(cands));
  }
  ctx.offset = OracleOffset(inst.weights, inst.cost_bounds);
  inst.ctx = std::make_shared<const OracleContext>(std::move(ctx));
  inst.ground = std::move(ground);
  return inst;
}

std::string PlannerVariant::Name() const {
  switch (algorithm) {
    case Algorithm::kCls:
    case Algorithm::kDls: {
      std::string name = algorithm == Algorithm::kCls ? "cls" : "dls";
      if (!options.lazy) name += "-nolazy";
      if (!options.warm_start) name += "-nowarm";
      return name;
    }
    case Algorithm::kCd:
      switch (cd_order) {
        case CdOrdering::kIndex: return "cd-index";
        case CdOrdering::kReverseIndex: return "cd-reverse";
        case CdOrdering::kWeightAscending: return "cd-weight-asc";
        case CdOrdering::kWeightDescending: return "cd-weight-desc";
      }
  }
  return "unknown";
}

PlanResult RunPlanner(const PlanningInstance& instance,
                      const PlannerVariant& variant,
                      const DlsNetworkOptions& network) {
  switch (variant.algorithm) {
    case Algorithm::kDls:
      return Dls(instance.ctx, instance.ground, variant.options, network);
    case Algorithm::kCls: {
      Oracle oracle(instance.ctx, instance.ground);
      return Cls(oracle, variant.options);
    }
    case Algorithm::kCd: {
      Oracle oracle(instance.ctx, instance.ground);
      const std::vector<int> order = CdOrder(variant.cd_order, instance.weights);
      return CoordinateDescent(oracle, order);
    }
  }
  throw ConfigError("unknown algorithm");
}

RunOutput RunTrackingSim(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.Validate();
  std::mt19937_64 rng = SeededRng(config.seed, 0);
  WorldState world = InitialWorld(config, rng);
  const int n = static_cast<int>(config.robots.size());
  const int order = config.controller.order;
  const double tau = config.planner.tau;
  const double dt = config.controller.dt;

  std::vector<ControllerParams> params;
  for (const RobotConfig& r : config.robots) {
    params.push_back(MakeControllerParams(config, r));
  }

  RunOutput out;
  out.table = MetricsTable(
      {"step", "time", "replan", "mi", "energy", "objective", "oracle_calls",
       "exchanges", "min_h", "effort", "qp_infeasible", "rmse", "filter_rmse"});
  std::vector<Eigen::Vector3d> last_u(n, Eigen::Vector3d::Zero());
  std::vector<std::vector<int>> warm(n);
  const PlannerVariant variant = VariantFromConfig(config.planner);

  int step = 0;
  int replan = 0;
  double t = 0.0;
  double objective_sum = 0.0;
  double min_h_run = kInf;
  int64_t infeasible_run = 0;
  while (step < config.mission_steps) {
    const PlanningInstance inst = BuildPlanningInstance(config, world);
    DlsNetworkOptions network = config.network;
    network.seed = config.seed * 1000003ull + static_cast<uint64_t>(replan);
    const PlanResult plan = RunPlanner(inst, variant, network);
    const Oracle oracle(inst.ctx, inst.ground);
    const double mi = oracle.MutualInformation(plan.solution);
    const double energy = oracle.Energy(plan.solution);
    const double objective = plan.value - inst.ctx->offset;
    objective_sum += objective;

    std::vector<std::vector<UnicycleState>> states(n);
    std::vector<ReferencePlan> refs(n);
    for (int i = 0; i < n; ++i) {
      std::vector<MotionPrimitive> controls(config.planner.horizon);
      states[i].assign(config.planner.horizon + 1, world.poses[i]);
      for (const TrajectoryId& id : plan.solution) {
        if (id.robot != i) continue;
        const CandidateTrajectory& c = oracle.Candidate(id);
        controls = c.controls;
        states[i] = c.states;
      }
      refs[i] = MakeReferencePlan(states[i], controls, world.x[i], order, t, tau);
    }

    const int execute = std::min(config.replan_period,
                                 config.mission_steps - step);
    for (int k = 0; k < execute; ++k) {
      std::vector<LqrSegment> segments;
      for (int i = 0; i < n; ++i) {
        segments.push_back({params[i].spec, Eigen::Matrix3d::Identity(),
                            refs[i].time(k + 1), refs[i].waypoints[k + 1]});
      }
      ControlStats stats;
      SimulateSegment(world.x, segments, t, tau, dt, params, last_u, warm,
                      stats);
      t = refs[0].time(k + 1);
      for (int i = 0; i < n; ++i) {
        world.poses[i].x = world.x[i](0);
        world.poses[i].y = world.x[i](1);
        world.poses[i].altitude = world.x[i](2);
        world.poses[i].theta = states[i][k + 1].theta;
      }
      world.truth = SimulateTargetStep(world.truth, world.targets, rng);
      world.belief = PredictBelief(world.belief, world.targets);
      for (int i = 0; i < n; ++i) {
        for (int b = 0; b < world.targets.num_blocks(); ++b) {
          if (!world.targets.block(b).has_position) continue;
          const int off = world.targets.offset(b);
          EkfUpdate(world.poses[i], config.robots[i].sensor, off,
                    world.truth.segment<2>(off), rng, world.belief);
        }
      }
      const TrackingErrors err = Errors(world);
      min_h_run = std::min(min_h_run, stats.min_h);
      infeasible_run += stats.infeasible;
      ++step;
      out.table.AddRow({int64_t{step}, t, int64_t{replan}, mi, energy,
                        objective, plan.oracle_calls, plan.exchange_rounds,
                        n > 1 ? stats.min_h : std::nan(""), stats.effort,
                        stats.infeasible, err.rmse, err.filter_rmse});
    }
    ++replan;
  }
  const TrackingErrors final_err = Errors(world);
  out.summary = {{"scenario", config.name},
                 {"algorithm", variant.Name()},
                 {"replans", int64_t{replan}},
                 {"mean_objective", objective_sum / replan},
                 {"min_h", n > 1 ? min_h_run : std::nan("")},
                 {"qp_infeasible", infeasible_run},
                 {"final_rmse", final_err.rmse},
                 {"final_filter_rmse", final_err.filter_rmse},
                 {"wall_time_s", WallSeconds(start)}};
  return out;
}

RunOutput RunPlan(const ScenarioConfig& config, const PlannerVariant& variant) {
  const auto start = std::chrono::steady_clock::now();
  config.Validate();
  std::mt19937_64 rng = SeededRng(config.seed, 0);
  const WorldState world = InitialWorld(config, rng);
  const PlanningInstance inst = BuildPlanningInstance(config, world);
  DlsNetworkOptions network = config.network;
  network.seed = config.seed * 1000003ull;
  const PlanResult plan = RunPlanner(inst, variant, network);
  const Oracle oracle(inst.ctx, inst.ground);
  int64_t n_ground = 0;
  for (const auto& m : *inst.ground) n_ground += static_cast<int64_t>(m.size());

  RunOutput out;
  out.table = MetricsTable(
      {"algo", "lazy", "warm_start", "alpha", "g", "objective", "mi", "energy",
       "oracle_calls", "evaluations", "exchanges", "handoffs", "messages",
       "network_time", "n_ground", "assignment"});
  out.table.AddRow(
      {variant.Name(), int64_t{variant.options.lazy},
       int64_t{variant.options.warm_start}, variant.options.alpha, plan.value,
       plan.value - inst.ctx->offset, oracle.MutualInformation(plan.solution),
       oracle.Energy(plan.solution), plan.oracle_calls, plan.oracle_evaluations,
       plan.exchange_rounds, plan.handoffs, plan.messages, plan.network_time,
       n_ground,
       AssignmentString(plan.solution, static_cast<int>(config.robots.size()))});
  out.summary = {{"scenario", config.name},
                 {"offset", inst.ctx->offset},
                 {"wall_time_s", WallSeconds(start)}};
  return out;
}

RunOutput RunSphereBenchmark(const ScenarioConfig& config,
                             const SphereOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (options.robots < 1 || options.trials < 0 || !(options.radius > 0.0) ||
      !(options.duration > 0.0) || options.beta < 0.0 || options.noise < 0.0) {
    throw ConfigError("invalid sphere benchmark options");
  }
  config.Validate();
  const int n = options.robots;
  const RobotConfig& base = config.robots.front();
  ControllerParams p = MakeControllerParams(config, base);
  p.beta = options.beta;
  const std::vector<ControllerParams> params(n, p);
  const double dt = config.controller.dt;
  const int order = config.controller.order;

  struct Trial {
    double final_error = 0.0;
    ControlStats stats;
  };
  std::vector<Trial> trials(options.trials);
  ParallelFor(options.trials, [&](int trial) {
    std::mt19937_64 rng = SeededRng(options.seed, static_cast<uint64_t>(trial) + 1);
    std::normal_distribution<double> normal;
    auto noisy = [&](const Eigen::Vector3d& v) {
      return Eigen::Vector3d(v.x() + options.noise * normal(rng),
                             v.y() + options.noise * normal(rng),
                             v.z() + options.noise * normal(rng));
    };
    std::vector<Eigen::VectorXd> x(n, Eigen::VectorXd::Zero(3 * order));
    std::vector<Eigen::VectorXd> goal(n, Eigen::VectorXd::Zero(3 * order));
    for (int attempt = 0;; ++attempt) {
      if (attempt == 10000) throw ConfigError("could not spawn sphere robots");
      for (int i = 0; i < n; ++i) {
        Eigen::Vector3d dir(normal(rng), normal(rng), normal(rng));
        dir /= std::max(dir.norm(), 1e-12);
        x[i].head<3>() = noisy(options.radius * dir);
        goal[i].head<3>() = noisy(-options.radius * dir);
      }
      if (n == 1 || (MinPairwiseH(x, params) >= 0.0 &&
                     MinPairwiseH(goal, params) >= 0.0)) {
        break;
      }
    }
    std::vector<LqrSegment> segments;
    for (int i = 0; i < n; ++i) {
      segments.push_back(
          {p.spec, Eigen::Matrix3d::Identity(), options.duration, goal[i]});
    }
    std::vector<Eigen::Vector3d> last_u(n, Eigen::Vector3d::Zero());
    std::vector<std::vector<int>> warm(n);
    Trial& result = trials[trial];
    SimulateSegment(x, segments, 0.0, options.duration, dt, params, last_u,
                    warm, result.stats);
    for (int i = 0; i < n; ++i) {
      result.final_error += (x[i].head<3>() - goal[i].head<3>()).norm() / n;
    }
  });

  RunOutput out;
  out.table = MetricsTable({"trial", "robots", "beta", "final_error", "effort",
                            "min_h", "infeasible_steps", "feasible",
                            "max_abs_u"});
  int64_t feasible = 0;
  double error_sum = 0.0;
  double effort_sum = 0.0;
  double min_h = kInf;
  for (int k = 0; k < options.trials; ++k) {
    const Trial& tr = trials[k];
    const bool ok = tr.stats.infeasible == 0;
    if (ok) {
      ++feasible;
      error_sum += tr.final_error;
      effort_sum += tr.stats.effort;
      min_h = std::min(min_h, tr.stats.min_h);
    }
    out.table.AddRow({int64_t{k}, int64_t{n}, options.beta, tr.final_error,
                      tr.stats.effort, n > 1 ? tr.stats.min_h : std::nan(""),
                      tr.stats.infeasible, int64_t{ok}, tr.stats.max_abs_u});
  }
  const double denom = feasible > 0 ? static_cast<double>(feasible) : std::nan("");
  out.summary = {{"trials", int64_t{options.trials}},
                 {"feasible_trials", feasible},
                 {"mean_final_error", error_sum / denom},
                 {"mean_effort", effort_sum / denom},
                 {"min_h", n > 1 ? min_h : std::nan("")},
                 {"wall_time_s", WallSeconds(start)}};
  return out;
}

RunOutput RunBenchNet(const BenchNetOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (options.robots < 1 || options.trials < 0 || options.delay_ms < 0.0) {
    throw ConfigError("invalid bench-net options");
  }
  ScenarioConfig base = Preset("hil-net-bench");
  const RobotConfig proto = base.robots.front();
  base.robots.assign(options.robots, proto);
  base.network.delay = {DelayKind::kNormal, options.delay_ms * 1e-3,
                        options.delay_ms * 0.2e-3};

  std::vector<PlannerVariant> variants;
  for (bool lazy : {true, false}) {
    for (bool warm : {true, false}) {
      PlannerVariant v;
      v.options.lazy = lazy;
      v.options.warm_start = warm;
      variants.push_back(v);
    }
  }
  variants.push_back({Algorithm::kCd, {}, CdOrdering::kIndex});

  const int nv = static_cast<int>(variants.size());
  std::vector<std::vector<Cell>> rows(options.trials * nv);
  ParallelFor(options.trials, [&](int trial) {
    ScenarioConfig config = base;
    config.seed = options.seed + static_cast<uint64_t>(trial);
    std::mt19937_64 rng = SeededRng(config.seed, 0);
    const WorldState world = InitialWorld(config, rng);
    const PlanningInstance inst = BuildPlanningInstance(config, world);
    for (int v = 0; v < nv; ++v) {
      DlsNetworkOptions network = config.network;
      network.seed = config.seed * 1000003ull;
      const PlanResult plan = RunPlanner(inst, variants[v], network);
      rows[trial * nv + v] = {int64_t{trial},
                              static_cast<int64_t>(config.seed),
                              variants[v].Name(),
                              plan.value,
                              plan.value - inst.ctx->offset,
                              plan.oracle_calls,
                              plan.oracle_evaluations,
                              plan.exchange_rounds,
                              plan.messages,
                              plan.handoffs,
                              plan.network_time};
    }
  });
  RunOutput out;
  out.table = MetricsTable({"trial", "seed", "variant", "g", "objective",
                            "oracle_calls", "evaluations", "exchanges",
                            "messages", "handoffs", "network_time"});
  for (auto& row : rows) out.table.AddRow(std::move(row));
  out.summary = {{"robots", int64_t{options.robots}},
                 {"delay_ms", options.delay_ms},
                 {"trials", int64_t{options.trials}},
                 {"wall_time_s", WallSeconds(start)}};
  return out;
}

void ParallelFor(int count, const std::function<void(int)>& fn) {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("INFOGATHER_THREADS")) {
    threads = std::atoi(env);
  }
  threads = std::clamp(threads, 1, std::max(count, 1));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace infogather
