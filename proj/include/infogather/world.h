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

// Scenario physics: unicycle robots, linear-Gaussian targets, range/bearing
// sensors and the energy-cost fields robots pay to move through an arena.

#ifndef INFOGATHER_WORLD_H_
#define INFOGATHER_WORLD_H_

#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace infogather {

inline constexpr double kPi = std::numbers::pi;

// Target blocks and per-step information matrices are small; capping their
// size keeps the hot oracle loop free of heap allocations.
inline constexpr int kMaxBlockDim = 6;
using BlockMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0,
                                  kMaxBlockDim, kMaxBlockDim>;
using BlockVector =
    Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxBlockDim, 1>;

// Wraps to (-pi, pi].
double WrapAngle(double angle);

// Planar unicycle pose. UAVs reuse the model at a fixed altitude.
struct UnicycleState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double altitude = 0.0;

  Eigen::Vector2d position() const { return {x, y}; }
};

struct MotionPrimitive {
  double nu = 0.0;     // m/s
  double omega = 0.0;  // rad/s

  friend bool operator==(const MotionPrimitive&,
                         const MotionPrimitive&) = default;
};

// Exact unicycle integration over `tau` seconds (straight line when
// omega == 0, circular arc of radius nu/omega otherwise).
UnicycleState StepUnicycle(const UnicycleState& s, const MotionPrimitive& u,
                           double tau);

// One independent group of target coordinates. When `has_position` is set
// the first two coordinates are the planar target position.
struct TargetBlock {
  BlockMatrix transition;     // A
  BlockMatrix process_noise;  // W, symmetric PSD
  bool has_position = true;

  int dim() const { return static_cast<int>(transition.rows()); }
};

// Static planar target; `noise_std` is the per-step random-walk std.
TargetBlock StaticTargetBlock(double noise_std = 0.0);

// Discretized double integrator [p; v] in `spatial_dim` dimensions driven by
// white acceleration noise of spectral density `accel_noise`.
TargetBlock DoubleIntegratorBlock(double dt, double accel_noise,
                                  int spatial_dim = 2);

// Joint target state y = [y_1; y_2; ...] with block-diagonal A and W.
class TargetModel {
 public:
  TargetModel() = default;
  explicit TargetModel(std::vector<TargetBlock> blocks);

  int dim() const { return dim_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const TargetBlock& block(int b) const { return blocks_[b]; }
  int offset(int b) const { return offsets_[b]; }

  Eigen::MatrixXd DenseTransition() const;
  Eigen::MatrixXd DenseProcessNoise() const;

 private:
  std::vector<TargetBlock> blocks_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

// y' = A y + w, w ~ N(0, W). Throws std::invalid_argument on a dimension
// mismatch.
Eigen::VectorXd SimulateTargetStep(const Eigen::VectorXd& y,
                                   const TargetModel& model,
                                   std::mt19937_64& rng);

enum class SensorKind { kRange, kBearing, kRangeBearing };
enum class NoiseScaling { kLinear, kConstant };

struct SensorModel {
  SensorKind kind = SensorKind::kRangeBearing;
  double max_range = 15.0;     // m, measured in 3D from the sensor
  double fov = 2.0 * kPi;      // rad, full opening angle
  double range_std = 0.1;      // m, at max range when scaling is linear
  double bearing_std = 5.0 * kPi / 180.0;
  NoiseScaling scaling = NoiseScaling::kLinear;

  int measurement_dim() const { return kind == SensorKind::kRangeBearing ? 2 : 1; }
  // Linear scaling grows from 10% of the max std at distance 0 to the max
  // std at max_range.
  double RangeStd(double distance) const;
  double BearingStd(double distance) const;
};

// Measurement model linearized about a target position.
struct SensorLinearization {
  Eigen::VectorXd predicted;  // z = h(p)
  Eigen::MatrixXd jacobian;   // d_z x 2, w.r.t. the planar target position
  Eigen::MatrixXd noise;      // d_z x d_z
};

// std::nullopt outside range/FOV. Throws DegenerateGeometryError when the
// target coincides with the sensor.
std::optional<SensorLinearization> LinearizeSensor(
    const UnicycleState& robot, const SensorModel& sensor,
    const Eigen::Vector2d& target);

// H^T V^-1 H on the planar target position; exactly zero outside the sensing
// footprint.
Eigen::Matrix2d PositionInformation(const UnicycleState& robot,
                                    const SensorModel& sensor,
                                    const Eigen::Vector2d& target);

// Joint d_y x d_y information matrix, linearized about `target_mean`.
Eigen::MatrixXd SensorInfoMatrix(const UnicycleState& robot,
                                 const SensorModel& sensor,
                                 const TargetModel& targets,
                                 const Eigen::VectorXd& target_mean);

// Axis-aligned planar workspace.
struct Arena {
  Eigen::Vector2d min = Eigen::Vector2d::Zero();
  Eigen::Vector2d max = Eigen::Vector2d::Zero();

  bool Contains(double x, double y) const {
    return x >= min.x() && x <= max.x() && y >= min.y() && y <= max.y();
  }
};

enum class RobotClass { kUgv, kUav };
enum class RegionTag { kMud, kWind };

struct CostRegion {
  RegionTag tag = RegionTag::kMud;
  Eigen::Vector2d min = Eigen::Vector2d::Zero();
  Eigen::Vector2d max = Eigen::Vector2d::Zero();

  bool Contains(double x, double y) const {
    return x >= min.x() && x <= max.x() && y >= min.y() && y <= max.y();
  }
};

struct CostField {
  std::vector<CostRegion> regions;
};

struct ControlCostEntry {
  double nu = 0.0;
  double omega_abs = 0.0;
  double cost = 0.0;
};

// Per-robot energy model: c_ctrl(u) matched on (nu, |omega|), c_state(x) paid
// while inside a region whose tag has an entry in `state_costs`.
struct RobotCostProfile {
  std::vector<ControlCostEntry> control_costs;
  std::map<RegionTag, double> state_costs;
  double weight = 1.0;  // m_i

  // Throws ConfigError when `u` has no table entry.
  double ControlCost(const MotionPrimitive& u) const;
  double StateCost(const UnicycleState& s, const CostField& field) const;
  double MaxControlCost() const;
  double MaxStateCost() const;
  // Unweighted per-trajectory bound K * (max c_ctrl + max c_state).
  double DefaultCostBound(int horizon) const;
};

// Robot cost tables used by the simulated UGV/UAV teams (stop, turn in place,
// drive; mud for UGVs, wind for UAVs).
RobotCostProfile DefaultCostProfile(RobotClass robot_class, double weight);

// m_i * sum_k (c_ctrl(u_k) + c_state(x_k)) over k = 0..K-1. `states` must hold
// at least |controls| entries; extra trailing states are ignored.
double TrajectoryEnergy(std::span<const MotionPrimitive> controls,
                        std::span<const UnicycleState> states,
                        const RobotCostProfile& profile,
                        const CostField& field);

}  // namespace infogather

#endif  // INFOGATHER_WORLD_H_
