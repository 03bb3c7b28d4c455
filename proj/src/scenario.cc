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


#include "infogather/scenario.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "infogather/control.h"
#include "infogather/errors.h"

namespace infogather {
namespace {

using nlohmann::json;

constexpr double kDeg = kPi / 180.0;

// ---------------------------------------------------------------- enums

template <typename E>
struct EnumNames;

template <>
struct EnumNames<RobotClass> {
  static constexpr std::pair<RobotClass, const char*> kValues[] = {
      {RobotClass::kUgv, "ugv"}, {RobotClass::kUav, "uav"}};
};
template <>
struct EnumNames<RegionTag> {
  static constexpr std::pair<RegionTag, const char*> kValues[] = {
      {RegionTag::kMud, "mud"}, {RegionTag::kWind, "wind"}};
};
template <>
struct EnumNames<SensorKind> {
  static constexpr std::pair<SensorKind, const char*> kValues[] = {
      {SensorKind::kRange, "range"},
      {SensorKind::kBearing, "bearing"},
      {SensorKind::kRangeBearing, "range_bearing"}};
};
template <>
struct EnumNames<NoiseScaling> {
  static constexpr std::pair<NoiseScaling, const char*> kValues[] = {
      {NoiseScaling::kLinear, "linear"}, {NoiseScaling::kConstant, "constant"}};
};
template <>
struct EnumNames<TargetKind> {
  static constexpr std::pair<TargetKind, const char*> kValues[] = {
      {TargetKind::kStatic, "static"},
      {TargetKind::kDoubleIntegrator, "double_integrator"}};
};
template <>
struct EnumNames<Algorithm> {
  static constexpr std::pair<Algorithm, const char*> kValues[] = {
      {Algorithm::kDls, "dls"}, {Algorithm::kCls, "cls"}, {Algorithm::kCd, "cd"}};
};
template <>
struct EnumNames<CdOrdering> {
  static constexpr std::pair<CdOrdering, const char*> kValues[] = {
      {CdOrdering::kIndex, "index"},
      {CdOrdering::kReverseIndex, "reverse_index"},
      {CdOrdering::kWeightAscending, "weight_ascending"},
      {CdOrdering::kWeightDescending, "weight_descending"}};
};
template <>
struct EnumNames<EnergyModel> {
  static constexpr std::pair<EnergyModel, const char*> kValues[] = {
      {EnergyModel::kTable, "table"}, {EnergyModel::kLqr, "lqr"}};
};
template <>
struct EnumNames<DelayKind> {
  static constexpr std::pair<DelayKind, const char*> kValues[] = {
      {DelayKind::kConstant, "constant"},
      {DelayKind::kUniform, "uniform"},
      {DelayKind::kNormal, "normal"}};
};

template <typename E>
std::string EnumToString(E value) {
  for (const auto& [v, name] : EnumNames<E>::kValues) {
    if (v == value) return name;
  }
  throw ConfigError("unnamed enum value");
}

template <typename E>
E EnumFromString(const std::string& s) {
  for (const auto& [v, name] : EnumNames<E>::kValues) {
    if (s == name) return v;
  }
  throw ConfigError("unknown value '" + s + "'");
}

// ------------------------------------------------------------ accessors

const json& Require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("missing required field '") + key + "'");
  }
  return j.at(key);
}

template <typename T>
T Get(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) {
    return fallback;
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
std::optional<T> GetOptional(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

json VectorJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd VectorFrom(const json& j) {
  const std::vector<double> v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

template <typename T>
json OptionalJson(const std::optional<T>& v) {
  return v.has_value() ? json(*v) : json(nullptr);
}

// ------------------------------------------------------------- to json

json ToJson(const SensorModel& s) {
  return {{"kind", EnumToString(s.kind)},
          {"max_range", s.max_range},
          {"fov_deg", s.fov / kDeg},
          {"range_std", s.range_std},
          {"bearing_std_deg", s.bearing_std / kDeg},
          {"scaling", EnumToString(s.scaling)}};
}

json ToJson(const RobotConfig& r) {
  json primitives = json::array();
  for (const MotionPrimitive& u : r.primitives) {
    primitives.push_back({u.nu, u.omega});
  }
  json control_costs = json::array();
  for (const ControlCostEntry& e : r.cost.control_costs) {
    control_costs.push_back({{"nu", e.nu}, {"omega_abs", e.omega_abs},
                             {"cost", e.cost}});
  }
  json state_costs = json::object();
  for (const auto& [tag, cost] : r.cost.state_costs) {
    state_costs[EnumToString(tag)] = cost;
  }
  return {{"class", EnumToString(r.robot_class)},
          {"initial",
           {r.initial.x, r.initial.y, r.initial.theta, r.initial.altitude}},
          {"primitives", primitives},
          {"sensor", ToJson(r.sensor)},
          {"weight", r.cost.weight},
          {"control_costs", control_costs},
          {"state_costs", state_costs},
          {"cost_bound", OptionalJson(r.cost_bound)},
          {"safety_radius", r.safety_radius}};
}

json ToJson(const TargetConfig& t) {
  return {{"kind", EnumToString(t.kind)},
          {"noise", t.noise},
          {"truth", VectorJson(t.truth)},
          {"prior_mean", VectorJson(t.prior_mean)},
          {"position_std", t.position_std},
          {"velocity_std", t.velocity_std}};
}

json ToJson(const ScenarioConfig& c) {
  json robots = json::array();
  for (const auto& r : c.robots) robots.push_back(ToJson(r));
  json targets = json::array();
  for (const auto& t : c.targets) targets.push_back(ToJson(t));
  json regions = json::array();
  for (const CostRegion& r : c.field.regions) {
    regions.push_back({{"tag", EnumToString(r.tag)},
                       {"min", {r.min.x(), r.min.y()}},
                       {"max", {r.max.x(), r.max.y()}}});
  }
  const PlannerConfig& p = c.planner;
  const ControllerConfig& k = c.controller;
  return {
      {"name", c.name},
      {"seed", c.seed},
      {"arena",
       {{"min", {c.arena.min.x(), c.arena.min.y()}},
        {"max", {c.arena.max.x(), c.arena.max.y()}}}},
      {"regions", regions},
      {"robots", robots},
      {"targets", targets},
      {"spawn",
       {{"robots", c.spawn.robots},
        {"targets", c.spawn.targets},
        {"avoid_regions", c.spawn.avoid_regions},
        {"target_speed", c.spawn.target_speed},
        {"prior_offset_std", c.spawn.prior_offset_std}}},
      {"planner",
       {{"algorithm", EnumToString(p.algorithm)},
        {"alpha", p.options.alpha},
        {"lazy", p.options.lazy},
        {"warm_start", p.options.warm_start},
        {"cd_order", EnumToString(p.cd_order)},
        {"horizon", p.horizon},
        {"tau", p.tau},
        {"epsilon", p.prune.epsilon},
        {"delta", p.prune.delta},
        {"cap", p.prune.cap},
        {"max_nodes_per_depth", p.prune.max_nodes_per_depth},
        {"energy_model", EnumToString(p.energy_model)}}},
      {"network",
       {{"delay", EnumToString(c.network.delay.kind)},
        {"a", c.network.delay.a},
        {"b", c.network.delay.b},
        {"timeout", c.network.timeout}}},
      {"controller",
       {{"order", k.order},
        {"z_scale", k.z_scale},
        {"poles", k.poles},
        {"beta", k.beta},
        {"responsibility", k.responsibility},
        {"input_limit", OptionalJson(k.input_limit)},
        {"velocity_limit", OptionalJson(k.velocity_limit)},
        {"velocity_gain", k.velocity_gain},
        {"arena_limits", k.arena_limits},
        {"dt", k.dt}}},
      {"replan_period", c.replan_period},
      {"mission_steps", c.mission_steps},
  };
}

// ----------------------------------------------------------- from json

Eigen::Vector2d Vec2(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 2) throw ConfigError("expected a 2-vector");
  return {v[0], v[1]};
}

SensorModel SensorFromJson(const json& j) {
  SensorModel s;
  s.kind = EnumFromString<SensorKind>(Get<std::string>(j, "kind", "range_bearing"));
  s.max_range = Get(j, "max_range", s.max_range);
  s.fov = Get(j, "fov_deg", 360.0) * kDeg;
  s.range_std = Get(j, "range_std", s.range_std);
  s.bearing_std = Get(j, "bearing_std_deg", 5.0) * kDeg;
  s.scaling = EnumFromString<NoiseScaling>(Get<std::string>(j, "scaling", "linear"));
  return s;
}

RobotConfig RobotFromJson(const json& j) {
  RobotConfig r;
  r.robot_class = EnumFromString<RobotClass>(Get<std::string>(j, "class", "ugv"));
  const auto init = Get<std::vector<double>>(j, "initial", {0, 0, 0, 0});
  if (init.size() < 3 || init.size() > 4) {
    throw ConfigError("robot initial pose needs [x, y, theta(, altitude)]");
  }
  r.initial = {init[0], init[1], WrapAngle(init[2]),
               init.size() == 4 ? init[3] : 0.0};
  for (const json& u : Require(j, "primitives")) {
    const auto v = u.get<std::vector<double>>();
    if (v.size() != 2) throw ConfigError("primitive needs [nu, omega]");
    r.primitives.push_back({v[0], v[1]});
  }
  if (j.contains("sensor")) r.sensor = SensorFromJson(j.at("sensor"));
  r.cost = DefaultCostProfile(r.robot_class, Get(j, "weight", 1.0));
  if (j.contains("control_costs")) {
    r.cost.control_costs.clear();
    for (const json& e : j.at("control_costs")) {
      r.cost.control_costs.push_back({Get(e, "nu", 0.0), Get(e, "omega_abs", 0.0),
                                      Get(e, "cost", 0.0)});
    }
  }
  if (j.contains("state_costs")) {
    r.cost.state_costs.clear();
    for (const auto& [tag, cost] : j.at("state_costs").items()) {
      r.cost.state_costs[EnumFromString<RegionTag>(tag)] = cost.get<double>();
    }
  }
  r.cost_bound = GetOptional<double>(j, "cost_bound");
  r.safety_radius = Get(j, "safety_radius", r.safety_radius);
  return r;
}

TargetConfig TargetFromJson(const json& j) {
  TargetConfig t;
  t.kind = EnumFromString<TargetKind>(Get<std::string>(j, "kind", "static"));
  t.noise = Get(j, "noise", 0.0);
  t.truth = VectorFrom(Require(j, "truth"));
  t.prior_mean = j.contains("prior_mean") ? VectorFrom(j.at("prior_mean")) : t.truth;
  t.position_std = Get(j, "position_std", t.position_std);
  t.velocity_std = Get(j, "velocity_std", t.velocity_std);
  return t;
}

ScenarioConfig FromJson(const json& j) {
  ScenarioConfig c;
  c.name = Get<std::string>(j, "name", "custom");
  const json& seed = Require(j, "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
    throw ConfigError("seed must be a non-negative integer");
  }
  c.seed = seed.get<uint64_t>();
  const json& arena = Require(j, "arena");
  c.arena = {Vec2(Require(arena, "min")), Vec2(Require(arena, "max"))};
  if (j.contains("regions")) {
    for (const json& r : j.at("regions")) {
      c.field.regions.push_back(
          {EnumFromString<RegionTag>(Require(r, "tag").get<std::string>()),
           Vec2(Require(r, "min")), Vec2(Require(r, "max"))});
    }
  }
  for (const json& r : Require(j, "robots")) c.robots.push_back(RobotFromJson(r));
  if (j.contains("targets")) {
    for (const json& t : j.at("targets")) c.targets.push_back(TargetFromJson(t));
  }
  if (j.contains("spawn")) {
    const json& s = j.at("spawn");
    c.spawn.robots = Get(s, "robots", false);
    c.spawn.targets = Get(s, "targets", false);
    c.spawn.avoid_regions = Get(s, "avoid_regions", true);
    c.spawn.target_speed = Get(s, "target_speed", 0.0);
    c.spawn.prior_offset_std = Get(s, "prior_offset_std", 0.0);
  }
  if (j.contains("planner")) {
    const json& p = j.at("planner");
    PlannerConfig& pc = c.planner;
    pc.algorithm = EnumFromString<Algorithm>(Get<std::string>(p, "algorithm", "dls"));
    pc.options.alpha = Get(p, "alpha", 1.0);
    pc.options.lazy = Get(p, "lazy", true);
    pc.options.warm_start = Get(p, "warm_start", true);
    pc.cd_order = EnumFromString<CdOrdering>(Get<std::string>(p, "cd_order", "index"));
    pc.horizon = Get(p, "horizon", pc.horizon);
    pc.tau = Get(p, "tau", pc.tau);
    pc.prune.epsilon = Get(p, "epsilon", 0.0);
    pc.prune.delta = Get(p, "delta", 0.0);
    pc.prune.cap = Get(p, "cap", pc.prune.cap);
    pc.prune.max_nodes_per_depth = Get(p, "max_nodes_per_depth", 0);
    pc.energy_model =
        EnumFromString<EnergyModel>(Get<std::string>(p, "energy_model", "table"));
  }
  if (j.contains("network")) {
    const json& n = j.at("network");
    c.network.delay.kind =
        EnumFromString<DelayKind>(Get<std::string>(n, "delay", "constant"));
    c.network.delay.a = Get(n, "a", 0.0);
    c.network.delay.b = Get(n, "b", 0.0);
    c.network.timeout = Get(n, "timeout", c.network.timeout);
  }
  if (j.contains("controller")) {
    const json& k = j.at("controller");
    ControllerConfig& kc = c.controller;
    kc.order = Get(k, "order", kc.order);
    kc.z_scale = Get(k, "z_scale", kc.z_scale);
    kc.poles = Get(k, "poles", kc.poles);
    kc.beta = Get(k, "beta", kc.beta);
    kc.responsibility = Get(k, "responsibility", kc.responsibility);
    kc.input_limit = GetOptional<double>(k, "input_limit");
    kc.velocity_limit = GetOptional<double>(k, "velocity_limit");
    kc.velocity_gain = Get(k, "velocity_gain", kc.velocity_gain);
    kc.arena_limits = Get(k, "arena_limits", false);
    kc.dt = Get(k, "dt", kc.dt);
  }
  c.replan_period = Get(j, "replan_period", c.replan_period);
  c.mission_steps = Get(j, "mission_steps", c.mission_steps);
  c.Validate();
  return c;
}

// -------------------------------------------------------------- presets

std::vector<MotionPrimitive> SimPrimitives() {
  return {{0, 0}, {0, kPi / 2}, {0, -kPi / 2},
          {8, 0}, {8, kPi / 2}, {8, -kPi / 2}};
}

SensorModel SimSensor(double range, double fov_deg) {
  SensorModel s;
  s.kind = SensorKind::kRangeBearing;
  s.max_range = range;
  s.fov = fov_deg * kDeg;
  return s;
}

RobotConfig SimRobot(RobotClass cls, double weight, double range,
                     double fov_deg) {
  RobotConfig r;
  r.robot_class = cls;
  r.primitives = SimPrimitives();
  r.sensor = SimSensor(range, fov_deg);
  r.cost = DefaultCostProfile(cls, weight);
  r.initial.altitude = cls == RobotClass::kUav ? 3.0 : 0.0;
  r.safety_radius = 0.5;
  return r;
}

TargetConfig StaticTarget(double x, double y, double std) {
  TargetConfig t;
  t.kind = TargetKind::kStatic;
  t.truth = Eigen::Vector2d(x, y);
  t.prior_mean = t.truth;
  t.position_std = std;
  return t;
}

TargetConfig MovingTarget(double x, double y, double vx, double vy,
                          double noise) {
  TargetConfig t;
  t.kind = TargetKind::kDoubleIntegrator;
  t.noise = noise;
  t.truth = (Eigen::VectorXd(4) << x, y, vx, vy).finished();
  t.prior_mean = t.truth;
  return t;
}

ScenarioConfig Sim1() {
  ScenarioConfig c;
  c.name = "sim1-dynamic-targets";
  c.seed = 1;
  c.arena = {{0, 0}, {20, 20}};
  for (int i = 0; i < 4; ++i) {
    // Robot i (1-based) pays i times the base energy.
    c.robots.push_back(SimRobot(RobotClass::kUgv, i + 1.0, 6.0, 160.0));
    c.robots.back().initial.x = 4.0 + 4.0 * i;
    c.robots.back().initial.y = 8.0;
  }
  for (int i = 0; i < 4; ++i) {
    TargetConfig t = MovingTarget(4.0 + 4.0 * i, 12.0, 0.0, 0.0, 0.1);
    t.position_std = 2.0;
    t.velocity_std = 1.0;
    c.targets.push_back(t);
  }
  c.spawn = {.robots = true, .targets = true, .avoid_regions = false,
             .target_speed = 2.0, .prior_offset_std = 1.0};
  c.planner.horizon = 6;
  c.planner.tau = 0.5;
  c.planner.prune = {.epsilon = 1.0, .delta = 2.0, .cap = 80,
                     .max_nodes_per_depth = 120};
  c.controller.input_limit = 40.0;
  c.replan_period = 2;
  c.mission_steps = 8;
  return c;
}

ScenarioConfig Sim2() {
  ScenarioConfig c;
  c.name = "sim2-heterogeneous";
  c.seed = 1;
  c.arena = {{0, 0}, {60, 60}};
  c.field.regions.push_back({RegionTag::kMud, {30, 0}, {60, 36}});
  c.field.regions.push_back({RegionTag::kWind, {20, 24}, {60, 60}});
  c.robots.push_back(SimRobot(RobotClass::kUgv, 0.2, 15.0, 160.0));
  c.robots.push_back(SimRobot(RobotClass::kUgv, 0.2, 15.0, 160.0));
  c.robots.push_back(SimRobot(RobotClass::kUav, 0.2, 20.0, 360.0));
  for (int i = 0; i < 3; ++i) {
    c.robots[i].initial.x = 5.0 + 5.0 * i;
    c.robots[i].initial.y = 10.0 + 15.0 * i;
  }
  for (int i = 0; i < 10; ++i) {
    c.targets.push_back(StaticTarget(6.0 * i + 3.0, 30.0, 3.0));
  }
  c.spawn = {.robots = true, .targets = true, .avoid_regions = true,
             .target_speed = 0.0, .prior_offset_std = 1.0};
  c.planner.horizon = 8;
  c.planner.tau = 0.5;
  c.planner.prune = {.epsilon = 1.0, .delta = 4.0, .cap = 80,
                     .max_nodes_per_depth = 120};
  c.controller.input_limit = 40.0;
  c.replan_period = 2;
  c.mission_steps = 8;
  return c;
}

ScenarioConfig SphereBench() {
  ScenarioConfig c;
  c.name = "sphere-bench";
  c.seed = 1;
  c.arena = {{-10, -10}, {10, 10}};
  for (int i = 0; i < 3; ++i) {
    RobotConfig r = SimRobot(RobotClass::kUav, 0.0, 1.0, 360.0);
    r.primitives = {{0, 0}};
    r.safety_radius = 0.5;
    c.robots.push_back(r);
  }
  c.controller.poles = {-5.0, -5.1};
  c.controller.input_limit = 10.0;
  c.controller.beta = 0.5;
  c.planner.tau = 6.0;
  c.planner.horizon = 1;
  c.mission_steps = 1;
  c.replan_period = 1;
  return c;
}

ScenarioConfig HilNetBench() {
  ScenarioConfig c;
  c.name = "hil-net-bench";
  c.seed = 1;
  c.arena = {{0, 0}, {30, 30}};
  for (int i = 0; i < 4; ++i) {
    RobotConfig r = SimRobot(RobotClass::kUav, 0.1, 10.0, 360.0);
    r.sensor.kind = SensorKind::kRange;
    r.initial.x = 5.0 + 5.0 * i;
    r.initial.y = 5.0;
    c.robots.push_back(r);
  }
  for (int i = 0; i < 9; ++i) {
    c.targets.push_back(StaticTarget(7.5 + 7.5 * (i % 3), 7.5 + 7.5 * (i / 3), 2.0));
  }
  c.spawn = {.robots = true, .targets = false, .avoid_regions = false,
             .target_speed = 0.0, .prior_offset_std = 0.5};
  c.planner.horizon = 4;
  c.planner.tau = 0.5;
  c.planner.prune = {.epsilon = 1.0, .delta = 2.5, .cap = 60,
                     .max_nodes_per_depth = 120};
  c.network.delay = {DelayKind::kNormal, 5e-3, 1e-3};
  c.controller.input_limit = 40.0;
  c.mission_steps = 2;
  return c;
}

ScenarioConfig HwAnalog() {
  ScenarioConfig c;
  c.name = "hw-analog";
  c.seed = 1;
  c.arena = {{0, 0}, {8, 6}};
  std::vector<MotionPrimitive> ugv = {{0, 0}};
  for (double nu : {0.3, 0.6}) {
    for (double om : {0.0, 0.2, -0.2, 0.5, -0.5}) ugv.push_back({nu, om});
  }
  std::vector<MotionPrimitive> uav = {{0, 0}};
  for (double nu : {0.3, 0.5, 0.8}) {
    for (double om : {0.0, 0.35, -0.35, 0.5, -0.5, 0.75, -0.75}) {
      uav.push_back({nu, om});
    }
  }
  for (int i = 0; i < 3; ++i) {
    RobotConfig r;
    r.robot_class = RobotClass::kUgv;
    r.primitives = ugv;
    r.sensor.kind = SensorKind::kRange;
    r.sensor.max_range = 5.0;
    r.sensor.fov = 60.0 * kDeg;
    r.sensor.range_std = 1.0;
    r.sensor.scaling = NoiseScaling::kConstant;
    r.cost = DefaultCostProfile(RobotClass::kUgv, 0.1);
    r.safety_radius = 1.0;
    r.initial = {1.5 + 2.5 * i, 0.5, kPi / 2, 0.0};
    c.robots.push_back(r);
  }
  for (int i = 0; i < 2; ++i) {
    RobotConfig r;
    r.robot_class = RobotClass::kUav;
    r.primitives = uav;
    r.sensor.kind = SensorKind::kRange;
    r.sensor.max_range = 4.5;
    r.sensor.fov = 2.0 * kPi;
    r.sensor.range_std = 0.4;
    r.sensor.scaling = NoiseScaling::kConstant;
    r.cost = DefaultCostProfile(RobotClass::kUav, 0.1);
    r.safety_radius = 1.5;
    r.initial = {1.0 + 6.0 * i, 5.0, -kPi / 2, 3.0};
    c.robots.push_back(r);
  }
  const double v = 0.15 / std::sqrt(2.0);
  c.targets.push_back(MovingTarget(4.0, 3.0, 0.0, 0.0, 0.0));
  c.targets.push_back(MovingTarget(3.5, 2.5, -v, -v, 0.0));
  c.targets.push_back(MovingTarget(4.5, 2.5, v, -v, 0.0));
  c.targets.push_back(MovingTarget(3.5, 3.5, -v, v, 0.0));
  c.targets.push_back(MovingTarget(4.5, 3.5, v, v, 0.0));
  for (TargetConfig& t : c.targets) {
    t.noise = 1e-3;
    t.position_std = 1.0;
    t.velocity_std = 0.2;
  }
  c.spawn = {.robots = false, .targets = false, .avoid_regions = false,
             .target_speed = 0.0, .prior_offset_std = 0.5};
  c.planner.horizon = 4;
  c.planner.tau = 3.0;
  c.planner.prune = {.epsilon = 5.0, .delta = 1.5, .cap = 120,
                     .max_nodes_per_depth = 150};
  c.planner.energy_model = EnergyModel::kLqr;
  c.network.delay = {DelayKind::kNormal, 5e-3, 1e-3};
  c.controller.poles = {-3.0, -3.1};
  c.controller.beta = 0.5;
  c.controller.input_limit = 2.0;
  c.controller.velocity_limit = 1.0;
  c.controller.arena_limits = true;
  c.replan_period = 2;
  c.mission_steps = 22;
  return c;
}

}  // namespace

void ScenarioConfig::Validate() const {
  if (!(arena.max.x() > arena.min.x()) || !(arena.max.y() > arena.min.y())) {
    throw ConfigError("arena max must exceed min");
  }
  if (robots.empty()) throw ConfigError("scenario needs at least one robot");
  for (const RobotConfig& r : robots) {
    if (r.primitives.empty()) throw ConfigError("robot has no primitives");
    if (r.cost.weight < 0.0) throw ConfigError("energy weight must be >= 0");
    if (r.cost_bound.has_value() && *r.cost_bound < 0.0) {
      throw ConfigError("cost bound must be >= 0");
    }
    if (!(r.safety_radius > 0.0)) throw ConfigError("safety radius must be > 0");
    if (r.initial.altitude < 0.0) throw ConfigError("altitude must be >= 0");
    if (!(r.sensor.max_range > 0.0) || !(r.sensor.fov > 0.0)) {
      throw ConfigError("sensor range and fov must be positive");
    }
    for (const ControlCostEntry& e : r.cost.control_costs) {
      if (e.cost < 0.0) throw ConfigError("control costs must be >= 0");
    }
    for (const auto& [tag, cost] : r.cost.state_costs) {
      if (cost < 0.0) throw ConfigError("state costs must be >= 0");
    }
  }
  for (const TargetConfig& t : targets) {
    const int dim = t.kind == TargetKind::kStatic ? 2 : 4;
    if (t.truth.size() != dim || t.prior_mean.size() != dim) {
      throw ConfigError("target state has the wrong dimension");
    }
    if (!(t.position_std > 0.0) ||
        (dim == 4 && !(t.velocity_std > 0.0)) || t.noise < 0.0) {
      throw ConfigError("target prior stds must be > 0 and noise >= 0");
    }
  }
  if (planner.horizon < 1) throw ConfigError("planning horizon must be >= 1");
  if (!(planner.tau > 0.0)) throw ConfigError("tau must be > 0");
  if (!(planner.options.alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (planner.prune.cap < 1 || planner.prune.epsilon < 0.0 ||
      planner.prune.delta < 0.0 || planner.prune.max_nodes_per_depth < 0) {
    throw ConfigError("invalid pruning parameters");
  }
  if (replan_period < 1 || replan_period > planner.horizon) {
    throw ConfigError("replan period must lie in [1, horizon]");
  }
  if (mission_steps < 1) throw ConfigError("mission needs at least one step");
  ValidateOrder(controller.order);
  if (static_cast<int>(controller.poles.size()) != controller.order) {
    throw ConfigError("controller needs one pole per integrator order");
  }
  for (double p : controller.poles) {
    if (!(p < 0.0)) throw ConfigError("controller poles must be negative");
  }
  if (!(controller.z_scale > 0.0) || controller.beta < 0.0 ||
      !(controller.responsibility > 0.0) || !(controller.dt > 0.0)) {
    throw ConfigError("invalid controller parameters");
  }
  const double ratio = planner.tau / controller.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw ConfigError("tau must be an integer multiple of the control step");
  }
  if (network.delay.a < 0.0 || network.delay.b < 0.0 ||
      !(network.timeout > 0.0)) {
    throw ConfigError("invalid network delay model");
  }
}

std::vector<std::string> PresetNames() {
  return {"sim1-dynamic-targets", "sim2-heterogeneous", "sphere-bench",
          "hil-net-bench", "hw-analog"};
}

ScenarioConfig Preset(std::string_view name) {
  ScenarioConfig c;
  if (name == "sim1-dynamic-targets") {
    c = Sim1();
  } else if (name == "sim2-heterogeneous") {
    c = Sim2();
  } else if (name == "sphere-bench") {
    c = SphereBench();
  } else if (name == "hil-net-bench") {
    c = HilNetBench();
  } else if (name == "hw-analog") {
    c = HwAnalog();
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  c.Validate();
  return c;
}

ScenarioConfig ParseScenario(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    return FromJson(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
}

std::string ScenarioToJson(const ScenarioConfig& config) {
  return ToJson(config).dump(2) + "\n";
}

ScenarioConfig LoadScenario(const std::string& path_or_name) {
  for (const std::string& name : PresetNames()) {
    if (path_or_name == name) return Preset(name);
  }
  std::ifstream in(path_or_name);
  if (!in) throw ConfigError("cannot open scenario '" + path_or_name + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScenario(buffer.str());
}

uint64_t ConfigHash(const ScenarioConfig& config) {
  const std::string text = ToJson(config).dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace infogather
