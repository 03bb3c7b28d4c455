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


#ifndef INFOGATHER_EXPERIMENTS_H_
#define INFOGATHER_EXPERIMENTS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "infogather/control.h"
#include "infogather/estimation.h"
#include "infogather/metrics.h"
#include "infogather/planner.h"
#include "infogather/scenario.h"

namespace infogather {

struct WorldState {
  std::vector<UnicycleState> poses;  // heading from the last plan
  std::vector<Eigen::VectorXd> x;    // integrator states [p; v]
  TargetModel targets;               // transition over one planner step
  Eigen::VectorXd truth;
  Belief belief;
};

// Applies the spawn rules; deterministic in `rng`.
WorldState InitialWorld(const ScenarioConfig& config, std::mt19937_64& rng);

struct PlanningInstance {
  std::shared_ptr<const OracleContext> ctx;
  std::shared_ptr<const GroundSet> ground;
  std::vector<double> weights;      // m_i
  std::vector<double> cost_bounds;  // unweighted c^max_i
};

PlanningInstance BuildPlanningInstance(const ScenarioConfig& config,
                                       const WorldState& world);

struct PlannerVariant {
  Algorithm algorithm = Algorithm::kDls;
  PlannerOptions options;
  CdOrdering cd_order = CdOrdering::kIndex;

  std::string Name() const;
};

PlanResult RunPlanner(const PlanningInstance& instance,
                      const PlannerVariant& variant,
                      const DlsNetworkOptions& network);

// Sum of closed-form segment energies along `plan` starting from its first
// waypoint, with R = I.
double PlannedLqrEnergy(const ReferencePlan& plan, int order);

struct RunOutput {
  MetricsTable table;
  std::vector<std::pair<std::string, Cell>> summary;
};

// Receding-horizon tracking mission for config.seed.
RunOutput RunTrackingSim(const ScenarioConfig& config);

// One-shot plan from the initial world.
RunOutput RunPlan(const ScenarioConfig& config, const PlannerVariant& variant);

struct SphereOptions {
  int robots = 3;
  double beta = 0.5;
  int trials = 10;
  uint64_t seed = 1;
  double radius = 6.0;
  double duration = 6.0;
  double noise = 0.1;
};

RunOutput RunSphereBenchmark(const ScenarioConfig& config,
                             const SphereOptions& options);

struct BenchNetOptions {
  int robots = 4;
  double delay_ms = 5.0;
  int trials = 10;
  uint64_t seed = 1;
};

// DLS with and without lazy search and warm start, plus CD, on the
// network benchmark preset.
RunOutput RunBenchNet(const BenchNetOptions& options);

// Runs fn(i) for i in [0, count) on up to INFOGATHER_THREADS workers.
void ParallelFor(int count, const std::function<void(int)>& fn);

}  // namespace infogather

#endif  // INFOGATHER_EXPERIMENTS_H_
