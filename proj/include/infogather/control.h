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


// Continuous-time tracking layer: integrator models, fixed-final-state LQR,
// super-ellipsoid ECBF collision rows split between robots, and the
// weighted-norm CBF-QP each robot solves.

#ifndef INFOGATHER_CONTROL_H_
#define INFOGATHER_CONTROL_H_

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "infogather/qp.h"
#include "infogather/world.h"

namespace infogather {

// x = [p; p'; ...; p^(r-1)] in R^{3r}, u = p^(r) in R^3.
struct IntegratorSpec {
  int order = 2;

  int state_dim() const { return 3 * order; }
  Eigen::MatrixXd A() const;  // F (x) I_3, F the upper shift
  Eigen::MatrixXd B() const;  // G (x) I_3, G the last unit vector
};

// Throws ConfigError unless the order is 1 or 2.
void ValidateOrder(int order);

// e^{A dt}.
Eigen::MatrixXd StateTransition(const IntegratorSpec& spec, double dt);

// int_0^horizon e^{As} B R^-1 B^T e^{A^T s} ds in closed form. Throws
// NumericalError when horizon <= 0.
Eigen::MatrixXd Gramian(const IntegratorSpec& spec, const Eigen::Matrix3d& r,
                        double horizon);

// One RK4 step of x' = A x + B u with u held constant.
Eigen::VectorXd IntegrateRk4(const IntegratorSpec& spec,
                             const Eigen::VectorXd& x,
                             const Eigen::Vector3d& u, double dt);

// Position (x, y, altitude); for order 2 also nu (cos theta, sin theta, 0)
// from the primitive entering the waypoint, zero at the final waypoint.
Eigen::VectorXd MapToReference(const UnicycleState& s,
                               const MotionPrimitive& entering,
                               bool final_waypoint, int order);

// Timed reference states x_ref(t_k), t_k = t0 + k tau.
struct ReferencePlan {
  double t0 = 0.0;
  double tau = 1.0;
  std::vector<Eigen::VectorXd> waypoints;

  double time(int k) const { return t0 + k * tau; }
  // Segment index for time t, clamped to the last segment.
  int SegmentAt(double t) const;
};

// Waypoint 0 is `initial` (the robot's mapped current state); waypoint k >= 1
// maps states[k] with controls[k - 1] entering it.
ReferencePlan MakeReferencePlan(std::span<const UnicycleState> states,
                                std::span<const MotionPrimitive> controls,
                                const Eigen::VectorXd& initial, int order,
                                double t0, double tau);

struct LqrSegment {
  IntegratorSpec spec;
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  double t_end = 1.0;
  Eigen::VectorXd x_ref_end;
};

inline constexpr double kHorizonFloor = 1e-3;

struct LqrOutput {
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  bool horizon_collapsed = false;
};

// u = R^-1 B^T e^{A^T D} G(D)^-1 (x_ref - e^{AD} x), D = t_end - t. Holds
// `last_u` and sets the flag when D < kHorizonFloor.
LqrOutput LqrControl(const Eigen::VectorXd& x, double t,
                     const LqrSegment& segment, const Eigen::Vector3d& last_u);

// 1/2 d^T G(t_end - t_start)^-1 d, d = x_ref_end - e^{A(t_end - t_start)}
// x_start.
double LqrEnergy(const LqrSegment& segment, const Eigen::VectorXd& x_start,
                 double t_start);

struct LyapunovTerms {
  double v = 0.0;
  double dv_dt = 0.0;
  Eigen::RowVectorXd dv_dx;

  // dV/dt along x' = A x + B u.
  double Rate(const IntegratorSpec& spec, const Eigen::VectorXd& x,
              const Eigen::Vector3d& u) const;
};

// V = 1/2 d^T G^-1 d and its partial derivatives. Throws NumericalError when
// t >= t_end.
LyapunovTerms Lyapunov(const Eigen::VectorXd& x, double t,
                       const LqrSegment& segment);

// Coefficients [c_0, ..., c_{r-1}] of prod_j (s - p_j) below the leading
// term. Throws ConfigError for a non-negative pole.
Eigen::RowVectorXd PolePlaceKeta(std::span<const double> poles);

struct BarrierSpec {
  double safety_radius = 0.5;  // D_s
  double z_scale = 1.0;        // c
  Eigen::RowVectorXd k_eta;    // length r

  // Throws ConfigError unless D_s, c > 0 and F - G K_eta is Hurwitz.
  void Validate(int order) const;
};

// ((dx^2 + dy^2))^2 + (dz / c)^4 - D_s^4.
double BarrierH(const Eigen::Vector3d& pi, const Eigen::Vector3d& pj,
                const BarrierSpec& spec);

struct BarrierRow {
  Eigen::RowVector3d a;  // A_ij, coefficient of u_i - u_j in h^(r)
  double b = 0.0;        // K_eta eta + L_f^r h
  Eigen::VectorXd eta;   // [h, h', ..., h^(r-1)]
  double lf_r = 0.0;     // L_f^r h
};

// ECBF data for the pair (i, j) of order-r integrators.
BarrierRow ComputeBarrierRow(const Eigen::VectorXd& xi,
                             const Eigen::VectorXd& xj,
                             const BarrierSpec& spec, int order);

// I + beta R u u^T R / (u^T R^2 u); the identity when u = 0.
Eigen::Matrix3d MissionWeight(const Eigen::Matrix3d& r,
                              const Eigen::Vector3d& u_lqr, double beta);

struct BoxLimits {
  std::optional<double> input;     // |u_k| <= input
  std::optional<double> velocity;  // |v_k| <= velocity (order 2)
  double velocity_gain = 5.0;      // ECBF gain for the velocity rows
  std::optional<Eigen::Vector3d> position_min;
  std::optional<Eigen::Vector3d> position_max;
};

struct ControllerParams {
  IntegratorSpec spec;
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  BarrierSpec barrier;
  double beta = 0.5;
  double responsibility = 1.0;  // alpha_i
  BoxLimits box;
};

struct Neighbor {
  Eigen::VectorXd x;
  double responsibility = 1.0;
  double safety_radius = 0.5;
};

// Objective ||u - u_lqr||^2_{W(beta)} (as 1/2 u^T P u + q^T u with P = 2W),
// one row -A_ij u <= alpha_i/(alpha_i + alpha_j) b_ij per neighbor (pair
// radius = max of both), then the box rows.
QpInstance AssembleWeightedQp(const Eigen::VectorXd& x,
                              const Eigen::Vector3d& u_lqr,
                              std::span<const Neighbor> neighbors,
                              const ControllerParams& params);

struct SafetyStepResult {
  std::vector<Eigen::Vector3d> u;
  std::vector<QpStatus> status;
  std::vector<std::vector<int>> active_sets;
  std::vector<int> iterations;
  // Pairs (both QPs optimal) whose applied controls break the centralized
  // inequality A_ij (u_i - u_j) + b_ij >= 0 beyond round-off.
  int centralized_violations = 0;
};

// Every robot solves its own QP from the same state snapshot. A robot whose
// QP is not optimal brakes (u = 0) and is flagged through `status`.
SafetyStepResult DecentralizedSafetyStep(
    std::span<const Eigen::VectorXd> states,
    std::span<const Eigen::Vector3d> u_lqr,
    std::span<const ControllerParams> params,
    std::span<const std::vector<int>> warm_active = {});

}  // namespace infogather

#endif  // INFOGATHER_CONTROL_H_
