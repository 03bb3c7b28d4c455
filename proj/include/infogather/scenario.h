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


// Scenario description shared by the experiment drivers and the CLI: robots,
// targets, arena, planner/network/controller settings and built-in presets.

#ifndef INFOGATHER_SCENARIO_H_
#define INFOGATHER_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "infogather/netsim.h"
#include "infogather/planner.h"
#include "infogather/trajopt.h"
#include "infogather/world.h"

namespace infogather {

// How a robot's per-trajectory energy is priced.
enum class EnergyModel {
  kTable,  // control/state tables of RobotCostProfile
  kLqr,    // closed-form LQR transfer energy between waypoints
};

struct RobotConfig {
  RobotClass robot_class = RobotClass::kUgv;
  UnicycleState initial;
  std::vector<MotionPrimitive> primitives;
  SensorModel sensor;
  RobotCostProfile cost;
  // Unweighted c^max; the table default K * (max c_ctrl + max c_state) is
  // used when unset.
  std::optional<double> cost_bound;
  double safety_radius = 0.5;  // D_s used by this robot's barrier rows
};

enum class TargetKind { kStatic, kDoubleIntegrator };

struct TargetConfig {
  TargetKind kind = TargetKind::kStatic;
  double noise = 0.0;  // static: random-walk std; DI: acceleration density
  Eigen::VectorXd truth;       // initial true state (2 or 4 entries)
  Eigen::VectorXd prior_mean;  // same size as truth
  double position_std = 1.0;   // prior std on position coordinates
  double velocity_std = 1.0;   // prior std on velocity coordinates (DI)
};

// Uniform spawning inside the arena, redrawn per seed when enabled.
struct SpawnConfig {
  bool robots = false;
  bool targets = false;
  bool avoid_regions = true;  // keep robots out of cost regions
  double target_speed = 0.0;  // DI targets get a random heading at this speed
  double prior_offset_std = 0.0;  // prior mean = truth + N(0, std^2)
};

enum class Algorithm { kDls, kCls, kCd };

struct PlannerConfig {
  Algorithm algorithm = Algorithm::kDls;
  PlannerOptions options;
  CdOrdering cd_order = CdOrdering::kIndex;
  int horizon = 4;   // K planning steps
  double tau = 0.5;  // s per step
  PruneParams prune;
  EnergyModel energy_model = EnergyModel::kTable;
};

struct ControllerConfig {
  int order = 2;
  double z_scale = 1.0;
  std::vector<double> poles = {-5.0, -5.1};
  double beta = 0.5;
  double responsibility = 1.0;
  std::optional<double> input_limit;
  std::optional<double> velocity_limit;
  double velocity_gain = 5.0;
  bool arena_limits = false;  // add planar position rows from the arena
  double dt = 0.01;
};

struct ScenarioConfig {
  std::string name;
  uint64_t seed = 0;
  Arena arena;
  CostField field;
  std::vector<RobotConfig> robots;
  std::vector<TargetConfig> targets;
  SpawnConfig spawn;
  PlannerConfig planner;
  DlsNetworkOptions network;
  ControllerConfig controller;
  int replan_period = 2;  // planner steps executed per plan
  int mission_steps = 10;

  // Throws ConfigError on inconsistent settings.
  void Validate() const;
};

std::vector<std::string> PresetNames();
// Throws ConfigError for an unknown name.
ScenarioConfig Preset(std::string_view name);

// JSON round trip. Parsing validates the result; the seed is mandatory.
ScenarioConfig ParseScenario(std::string_view json_text);
std::string ScenarioToJson(const ScenarioConfig& config);

// Reads a scenario file, or a preset when `path_or_name` names one.
ScenarioConfig LoadScenario(const std::string& path_or_name);

// FNV-1a of the canonical JSON form.
uint64_t ConfigHash(const ScenarioConfig& config);

}  // namespace infogather

#endif  // INFOGATHER_SCENARIO_H_
