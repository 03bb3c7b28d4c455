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


#include "infogather/world.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "infogather/errors.h"

namespace infogather {
namespace {

constexpr double kDegenerateDistance = 1e-9;
constexpr double kPrimitiveMatchTol = 1e-9;

// Symmetric square root factor L with L L^T = W for PSD W.
BlockMatrix PsdFactor(const BlockMatrix& w) {
  Eigen::SelfAdjointEigenSolver<BlockMatrix> eig(w);
  BlockVector sqrt_vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * sqrt_vals.asDiagonal();
}

bool InFieldOfView(const UnicycleState& robot, const SensorModel& sensor,
                   double dx, double dy) {
  if (sensor.fov >= 2.0 * kPi) return true;
  if (dx * dx + dy * dy < kDegenerateDistance * kDegenerateDistance) {
    return true;
  }
  const double rel = WrapAngle(std::atan2(dy, dx) - robot.theta);
  return std::abs(rel) <= 0.5 * sensor.fov;
}

}  // namespace

double WrapAngle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

UnicycleState StepUnicycle(const UnicycleState& s, const MotionPrimitive& u,
                           double tau) {
  UnicycleState next = s;
  const double dtheta = u.omega * tau;
  if (std::abs(dtheta) < 1e-12) {
    next.x += u.nu * tau * std::cos(s.theta);
    next.y += u.nu * tau * std::sin(s.theta);
  } else {
    const double radius = u.nu / u.omega;
    next.x += radius * (std::sin(s.theta + dtheta) - std::sin(s.theta));
    next.y += radius * (std::cos(s.theta) - std::cos(s.theta + dtheta));
  }
  next.theta = WrapAngle(s.theta + dtheta);
  return next;
}

TargetBlock StaticTargetBlock(double noise_std) {
  TargetBlock block;
  block.transition = BlockMatrix::Identity(2, 2);
  block.process_noise = BlockMatrix::Identity(2, 2) * (noise_std * noise_std);
  return block;
}

TargetBlock DoubleIntegratorBlock(double dt, double accel_noise,
                                  int spatial_dim) {
  if (spatial_dim < 1 || 2 * spatial_dim > kMaxBlockDim) {
    throw ConfigError("double integrator spatial_dim out of range");
  }
  const int d = spatial_dim;
  TargetBlock block;
  block.transition = BlockMatrix::Identity(2 * d, 2 * d);
  block.transition.topRightCorner(d, d) = BlockMatrix::Identity(d, d) * dt;
  block.process_noise = BlockMatrix::Zero(2 * d, 2 * d);
  const BlockMatrix eye = BlockMatrix::Identity(d, d);
  block.process_noise.topLeftCorner(d, d) = eye * (dt * dt * dt / 3.0);
  block.process_noise.topRightCorner(d, d) = eye * (dt * dt / 2.0);
  block.process_noise.bottomLeftCorner(d, d) = eye * (dt * dt / 2.0);
  block.process_noise.bottomRightCorner(d, d) = eye * dt;
  block.process_noise *= accel_noise;
  block.has_position = d >= 2;
  return block;
}

TargetModel::TargetModel(std::vector<TargetBlock> blocks)
    : blocks_(std::move(blocks)) {
  for (const TargetBlock& b : blocks_) {
    if (b.transition.rows() != b.transition.cols() ||
        b.process_noise.rows() != b.transition.rows() ||
        b.process_noise.cols() != b.transition.rows()) {
      throw ConfigError("target block dimensions are inconsistent");
    }
    if (b.has_position && b.dim() < 2) {
      throw ConfigError("positional target block needs at least 2 states");
    }
    offsets_.push_back(dim_);
    dim_ += b.dim();
  }
}

Eigen::MatrixXd TargetModel::DenseTransition() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int b = 0; b < num_blocks(); ++b) {
    a.block(offsets_[b], offsets_[b], blocks_[b].dim(), blocks_[b].dim()) =
        blocks_[b].transition;
  }
  return a;
}

Eigen::MatrixXd TargetModel::DenseProcessNoise() const {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int b = 0; b < num_blocks(); ++b) {
    w.block(offsets_[b], offsets_[b], blocks_[b].dim(), blocks_[b].dim()) =
        blocks_[b].process_noise;
  }
  return w;
}

Eigen::VectorXd SimulateTargetStep(const Eigen::VectorXd& y,
                                   const TargetModel& model,
                                   std::mt19937_64& rng) {
  if (y.size() != model.dim()) {
    throw std::invalid_argument("target state has dimension " +
                                std::to_string(y.size()) + ", model expects " +
                                std::to_string(model.dim()));
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd next(y.size());
  for (int b = 0; b < model.num_blocks(); ++b) {
    const TargetBlock& block = model.block(b);
    const int off = model.offset(b);
    const int d = block.dim();
    BlockVector noise(d);
    for (int i = 0; i < d; ++i) noise(i) = normal(rng);
    next.segment(off, d) = block.transition * y.segment(off, d) +
                           PsdFactor(block.process_noise) * noise;
  }
  return next;
}

double SensorModel::RangeStd(double distance) const {
  if (scaling == NoiseScaling::kConstant) return range_std;
  const double frac = std::clamp(distance / max_range, 0.0, 1.0);
  return range_std * (0.1 + 0.9 * frac);
}

double SensorModel::BearingStd(double distance) const {
  if (scaling == NoiseScaling::kConstant) return bearing_std;
  const double frac = std::clamp(distance / max_range, 0.0, 1.0);
  return bearing_std * (0.1 + 0.9 * frac);
}

std::optional<SensorLinearization> LinearizeSensor(
    const UnicycleState& robot, const SensorModel& sensor,
    const Eigen::Vector2d& target) {
  const double dx = target.x() - robot.x;
  const double dy = target.y() - robot.y;
  const double planar2 = dx * dx + dy * dy;
  const double rho = std::sqrt(planar2 + robot.altitude * robot.altitude);
  const bool uses_bearing = sensor.kind != SensorKind::kRange;
  if (rho < kDegenerateDistance ||
      (uses_bearing &&
       planar2 < kDegenerateDistance * kDegenerateDistance)) {
    throw DegenerateGeometryError("target coincides with sensor position");
  }
  if (rho > sensor.max_range || !InFieldOfView(robot, sensor, dx, dy)) {
    return std::nullopt;
  }

  const int dz = sensor.measurement_dim();
  SensorLinearization lin;
  lin.predicted.resize(dz);
  lin.jacobian.resize(dz, 2);
  lin.noise = Eigen::MatrixXd::Zero(dz, dz);
  int row = 0;
  if (sensor.kind != SensorKind::kBearing) {
    lin.predicted(row) = rho;
    lin.jacobian.row(row) << dx / rho, dy / rho;
    const double s = sensor.RangeStd(rho);
    lin.noise(row, row) = s * s;
    ++row;
  }
  if (uses_bearing) {
    lin.predicted(row) = WrapAngle(std::atan2(dy, dx) - robot.theta);
    lin.jacobian.row(row) << -dy / planar2, dx / planar2;
    const double s = sensor.BearingStd(rho);
    lin.noise(row, row) = s * s;
  }
  return lin;
}

Eigen::Matrix2d PositionInformation(const UnicycleState& robot,
                                    const SensorModel& sensor,
                                    const Eigen::Vector2d& target) {
  const std::optional<SensorLinearization> lin =
      LinearizeSensor(robot, sensor, target);
  if (!lin.has_value()) return Eigen::Matrix2d::Zero();
  // V is diagonal.
  const Eigen::VectorXd inv_var = lin->noise.diagonal().cwiseInverse();
  Eigen::Matrix2d m =
      lin->jacobian.transpose() * inv_var.asDiagonal() * lin->jacobian;
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd SensorInfoMatrix(const UnicycleState& robot,
                                 const SensorModel& sensor,
                                 const TargetModel& targets,
                                 const Eigen::VectorXd& target_mean) {
  if (target_mean.size() != targets.dim()) {
    throw std::invalid_argument("target mean dimension mismatch");
  }
  if (!target_mean.allFinite()) {
    throw std::invalid_argument("target mean is not finite");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(targets.dim(), targets.dim());
  for (int b = 0; b < targets.num_blocks(); ++b) {
    if (!targets.block(b).has_position) continue;
    const int off = targets.offset(b);
    m.block<2, 2>(off, off) =
        PositionInformation(robot, sensor, target_mean.segment<2>(off));
  }
  return m;
}

double RobotCostProfile::ControlCost(const MotionPrimitive& u) const {
  for (const ControlCostEntry& e : control_costs) {
    if (std::abs(e.nu - u.nu) <= kPrimitiveMatchTol &&
        std::abs(e.omega_abs - std::abs(u.omega)) <= kPrimitiveMatchTol) {
      return e.cost;
    }
  }
  throw ConfigError("no control cost entry for primitive (" +
                    std::to_string(u.nu) + ", " + std::to_string(u.omega) +
                    ")");
}

double RobotCostProfile::StateCost(const UnicycleState& s,
                                   const CostField& field) const {
  double cost = 0.0;
  for (const auto& [tag, penalty] : state_costs) {
    for (const CostRegion& region : field.regions) {
      if (region.tag == tag && region.Contains(s.x, s.y)) {
        cost += penalty;
        break;
      }
    }
  }
  return cost;
}

double RobotCostProfile::MaxControlCost() const {
  double best = 0.0;
  for (const ControlCostEntry& e : control_costs) best = std::max(best, e.cost);
  return best;
}

double RobotCostProfile::MaxStateCost() const {
  double total = 0.0;
  for (const auto& [tag, penalty] : state_costs) total += penalty;
  return total;
}

double RobotCostProfile::DefaultCostBound(int horizon) const {
  return horizon * (MaxControlCost() + MaxStateCost());
}

RobotCostProfile DefaultCostProfile(RobotClass robot_class, double weight) {
  RobotCostProfile profile;
  profile.weight = weight;
  const double half_turn = kPi / 2.0;
  if (robot_class == RobotClass::kUgv) {
    profile.control_costs = {{0.0, 0.0, 0.0},
                             {0.0, half_turn, 1.0},
                             {8.0, 0.0, 2.0},
                             {8.0, half_turn, 2.0}};
    profile.state_costs = {{RegionTag::kMud, 3.0}};
  } else {
    profile.control_costs = {{0.0, 0.0, 2.0},
                             {0.0, half_turn, 2.0},
                             {8.0, 0.0, 4.0},
                             {8.0, half_turn, 4.0}};
    profile.state_costs = {{RegionTag::kWind, 3.0}};
  }
  return profile;
}

double TrajectoryEnergy(std::span<const MotionPrimitive> controls,
                        std::span<const UnicycleState> states,
                        const RobotCostProfile& profile,
                        const CostField& field) {
  if (states.size() < controls.size()) {
    throw std::invalid_argument("fewer states than controls");
  }
  double total = 0.0;
  for (size_t k = 0; k < controls.size(); ++k) {
    total += profile.ControlCost(controls[k]) +
             profile.StateCost(states[k], field);
  }
  return profile.weight * total;
}

}  // namespace infogather
