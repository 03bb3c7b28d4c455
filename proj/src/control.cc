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


#include "infogather/control.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "infogather/errors.h"

namespace infogather {
namespace {

double Factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

Eigen::Vector3d Position(const Eigen::VectorXd& x) { return x.head<3>(); }

}  // namespace

void ValidateOrder(int order) {
  if (order != 1 && order != 2) {
    throw ConfigError("integrator order " + std::to_string(order) +
                      " is not supported (use 1 or 2)");
  }
}

Eigen::MatrixXd IntegratorSpec::A() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(state_dim(), state_dim());
  for (int k = 0; k + 1 < order; ++k) {
    a.block<3, 3>(3 * k, 3 * (k + 1)) = Eigen::Matrix3d::Identity();
  }
  return a;
}

Eigen::MatrixXd IntegratorSpec::B() const {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(state_dim(), 3);
  b.bottomRows<3>() = Eigen::Matrix3d::Identity();
  return b;
}

Eigen::MatrixXd StateTransition(const IntegratorSpec& spec, double dt) {
  const int r = spec.order;
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(3 * r, 3 * r);
  for (int a = 0; a < r; ++a) {
    for (int b = a; b < r; ++b) {
      phi.block<3, 3>(3 * a, 3 * b) =
          Eigen::Matrix3d::Identity() * (std::pow(dt, b - a) / Factorial(b - a));
    }
  }
  return phi;
}

Eigen::MatrixXd Gramian(const IntegratorSpec& spec, const Eigen::Matrix3d& r,
                        double horizon) {
  if (!(horizon > 0.0)) {
    throw NumericalError("Gramian needs a positive horizon");
  }
  const int order = spec.order;
  const Eigen::Matrix3d r_inv = r.inverse();
  Eigen::MatrixXd g(3 * order, 3 * order);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      const int p = order - 1 - a;
      const int q = order - 1 - b;
      const double coeff = std::pow(horizon, p + q + 1) /
                           ((p + q + 1) * Factorial(p) * Factorial(q));
      g.block<3, 3>(3 * a, 3 * b) = coeff * r_inv;
    }
  }
  return 0.5 * (g + g.transpose());
}

Eigen::VectorXd IntegrateRk4(const IntegratorSpec& spec,
                             const Eigen::VectorXd& x,
                             const Eigen::Vector3d& u, double dt) {
  const Eigen::MatrixXd a = spec.A();
  const Eigen::VectorXd bu = spec.B() * u;
  auto f = [&](const Eigen::VectorXd& s) -> Eigen::VectorXd {
    return a * s + bu;
  };
  const Eigen::VectorXd k1 = f(x);
  const Eigen::VectorXd k2 = f(x + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = f(x + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = f(x + dt * k3);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Eigen::VectorXd MapToReference(const UnicycleState& s,
                               const MotionPrimitive& entering,
                               bool final_waypoint, int order) {
  ValidateOrder(order);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3 * order);
  x.head<3>() << s.x, s.y, s.altitude;
  if (order == 2 && !final_waypoint) {
    x.segment<3>(3) << entering.nu * std::cos(s.theta),
        entering.nu * std::sin(s.theta), 0.0;
  }
  return x;
}

int ReferencePlan::SegmentAt(double t) const {
  const int segments = static_cast<int>(waypoints.size()) - 1;
  if (segments < 1) return 0;
  const int k = static_cast<int>(std::floor((t - t0) / tau + 1e-9));
  return std::clamp(k, 0, segments - 1);
}

ReferencePlan MakeReferencePlan(std::span<const UnicycleState> states,
                                std::span<const MotionPrimitive> controls,
                                const Eigen::VectorXd& initial, int order,
                                double t0, double tau) {
  ValidateOrder(order);
  if (states.size() != controls.size() + 1) {
    throw std::invalid_argument("plan needs |controls| + 1 states");
  }
  if (!(tau > 0.0)) throw ConfigError("sampling period must be positive");
  if (initial.size() != 3 * order) {
    throw std::invalid_argument("initial reference has the wrong dimension");
  }
  ReferencePlan plan;
  plan.t0 = t0;
  plan.tau = tau;
  plan.waypoints.push_back(initial);
  for (size_t k = 1; k < states.size(); ++k) {
    plan.waypoints.push_back(MapToReference(
        states[k], controls[k - 1], k + 1 == states.size(), order));
  }
  return plan;
}

LqrOutput LqrControl(const Eigen::VectorXd& x, double t,
                     const LqrSegment& segment,
                     const Eigen::Vector3d& last_u) {
  const double horizon = segment.t_end - t;
  if (horizon < kHorizonFloor) return {last_u, true};
  const Eigen::MatrixXd phi = StateTransition(segment.spec, horizon);
  const Eigen::MatrixXd g = Gramian(segment.spec, segment.r, horizon);
  const Eigen::VectorXd d = segment.x_ref_end - phi * x;
  const Eigen::VectorXd lambda = g.llt().solve(d);
  LqrOutput out;
  out.u = segment.r.inverse() * segment.spec.B().transpose() *
          phi.transpose() * lambda;
  return out;
}

double LqrEnergy(const LqrSegment& segment, const Eigen::VectorXd& x_start,
                 double t_start) {
  const double horizon = segment.t_end - t_start;
  const Eigen::MatrixXd phi = StateTransition(segment.spec, horizon);
  const Eigen::MatrixXd g = Gramian(segment.spec, segment.r, horizon);
  const Eigen::VectorXd d = segment.x_ref_end - phi * x_start;
  return 0.5 * d.dot(g.llt().solve(d));
}

double LyapunovTerms::Rate(const IntegratorSpec& spec, const Eigen::VectorXd& x,
                           const Eigen::Vector3d& u) const {
  return dv_dt + dv_dx.dot(spec.A() * x + spec.B() * u);
}

LyapunovTerms Lyapunov(const Eigen::VectorXd& x, double t,
                       const LqrSegment& segment) {
  const double horizon = segment.t_end - t;
  const IntegratorSpec& spec = segment.spec;
  const Eigen::MatrixXd phi = StateTransition(spec, horizon);
  const Eigen::MatrixXd g = Gramian(spec, segment.r, horizon);
  const Eigen::VectorXd d = segment.x_ref_end - phi * x;
  const Eigen::VectorXd g_inv_d = g.llt().solve(d);
  const Eigen::VectorXd drift = phi.transpose() * g_inv_d;  // e^{A^T D} G^-1 d
  const Eigen::VectorXd bt_drift = spec.B().transpose() * drift;
  LyapunovTerms terms;
  terms.v = 0.5 * d.dot(g_inv_d);
  terms.dv_dx = -drift.transpose();
  terms.dv_dt = g_inv_d.dot(spec.A() * phi * x) +
                0.5 * bt_drift.dot(segment.r.inverse() * bt_drift);
  return terms;
}

Eigen::RowVectorXd PolePlaceKeta(std::span<const double> poles) {
  if (poles.empty()) throw ConfigError("pole placement needs at least 1 pole");
  // Ascending coefficients of the monic polynomial.
  std::vector<double> c = {1.0};
  for (double p : poles) {
    if (!(p < 0.0)) throw ConfigError("ECBF poles must be strictly negative");
    std::vector<double> next(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] += -p * c[i];
    }
    c = std::move(next);
  }
  Eigen::RowVectorXd k(poles.size());
  for (size_t i = 0; i < poles.size(); ++i) k(i) = c[i];
  return k;
}

void BarrierSpec::Validate(int order) const {
  if (!(safety_radius > 0.0) || !(z_scale > 0.0)) {
    throw ConfigError("barrier needs D_s > 0 and c > 0");
  }
  if (k_eta.size() != order) {
    throw ConfigError("K_eta length must equal the integrator order");
  }
  Eigen::MatrixXd closed = Eigen::MatrixXd::Zero(order, order);
  for (int k = 0; k + 1 < order; ++k) closed(k, k + 1) = 1.0;
  closed.row(order - 1) -= k_eta;
  Eigen::EigenSolver<Eigen::MatrixXd> eig(closed, false);
  if (eig.eigenvalues().real().maxCoeff() >= 0.0) {
    throw ConfigError("K_eta does not place the barrier poles in the open "
                      "left half-plane");
  }
}

double BarrierH(const Eigen::Vector3d& pi, const Eigen::Vector3d& pj,
                const BarrierSpec& spec) {
  const Eigen::Vector3d d = pi - pj;
  const double s = d.x() * d.x() + d.y() * d.y();
  const double dz = d.z() / spec.z_scale;
  const double ds2 = spec.safety_radius * spec.safety_radius;
  return s * s + dz * dz * dz * dz - ds2 * ds2;
}

BarrierRow ComputeBarrierRow(const Eigen::VectorXd& xi,
                             const Eigen::VectorXd& xj,
                             const BarrierSpec& spec, int order) {
  ValidateOrder(order);
  const double c = spec.z_scale;
  const Eigen::Vector3d d = Position(xi) - Position(xj);
  const double s = d.x() * d.x() + d.y() * d.y();
  const double dz = d.z() / c;

  BarrierRow row;
  row.a << 4.0 * s * d.x(), 4.0 * s * d.y(), 4.0 * dz * dz * dz / c;
  row.eta.resize(order);
  row.eta(0) = BarrierH(Position(xi), Position(xj), spec);
  if (order == 2) {
    const Eigen::Vector3d dv = xi.segment<3>(3) - xj.segment<3>(3);
    row.eta(1) = row.a.dot(dv);
    const double radial = d.x() * dv.x() + d.y() * dv.y();
    const double dz_dot = dv.z() / c;
    row.lf_r = 8.0 * radial * radial +
               4.0 * s * (dv.x() * dv.x() + dv.y() * dv.y()) +
               12.0 * dz * dz * dz_dot * dz_dot;
  }
  row.b = spec.k_eta.dot(row.eta) + row.lf_r;
  return row;
}

Eigen::Matrix3d MissionWeight(const Eigen::Matrix3d& r,
                              const Eigen::Vector3d& u_lqr, double beta) {
  const Eigen::Vector3d ru = r * u_lqr;
  const double norm2 = ru.squaredNorm();
  if (!(norm2 > 0.0)) return Eigen::Matrix3d::Identity();
  return Eigen::Matrix3d::Identity() + beta * (ru * ru.transpose()) / norm2;
}

QpInstance AssembleWeightedQp(const Eigen::VectorXd& x,
                              const Eigen::Vector3d& u_lqr,
                              std::span<const Neighbor> neighbors,
                              const ControllerParams& params) {
  const int order = params.spec.order;
  const Eigen::Matrix3d w = MissionWeight(params.r, u_lqr, params.beta);
  QpInstance qp;
  qp.p = 2.0 * w;
  qp.q = -2.0 * w * u_lqr;

  std::vector<Eigen::RowVector3d> rows;
  std::vector<double> rhs;
  for (const Neighbor& nb : neighbors) {
    BarrierSpec pair = params.barrier;
    pair.safety_radius = std::max(pair.safety_radius, nb.safety_radius);
    const BarrierRow br = ComputeBarrierRow(x, nb.x, pair, order);
    const double share =
        params.responsibility / (params.responsibility + nb.responsibility);
    rows.push_back(-br.a);
    rhs.push_back(share * br.b);
  }
  const BoxLimits& box = params.box;
  for (int k = 0; k < 3; ++k) {
    const Eigen::RowVector3d e = Eigen::RowVector3d::Unit(k);
    if (box.input.has_value()) {
      rows.push_back(e);
      rhs.push_back(*box.input);
      rows.push_back(-e);
      rhs.push_back(*box.input);
    }
    if (order == 2 && box.velocity.has_value()) {
      const double v = x(3 + k);
      rows.push_back(e);
      rhs.push_back(box.velocity_gain * (*box.velocity - v));
      rows.push_back(-e);
      rhs.push_back(box.velocity_gain * (*box.velocity + v));
    }
    const double p = x(k);
    const double v = order == 2 ? x(3 + k) : 0.0;
    const double k0 = params.barrier.k_eta(0);
    const double k1 = order == 2 ? params.barrier.k_eta(1) : 0.0;
    if (box.position_max.has_value()) {
      rows.push_back(e);
      rhs.push_back(k0 * ((*box.position_max)(k) - p) - k1 * v);
    }
    if (box.position_min.has_value()) {
      rows.push_back(-e);
      rhs.push_back(k0 * (p - (*box.position_min)(k)) + k1 * v);
    }
  }
  qp.g.resize(static_cast<int>(rows.size()), 3);
  qp.h.resize(static_cast<int>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    qp.g.row(i) = rows[i];
    qp.h(i) = rhs[i];
  }
  return qp;
}

SafetyStepResult DecentralizedSafetyStep(
    std::span<const Eigen::VectorXd> states,
    std::span<const Eigen::Vector3d> u_lqr,
    std::span<const ControllerParams> params,
    std::span<const std::vector<int>> warm_active) {
  const int n = static_cast<int>(states.size());
  if (static_cast<int>(u_lqr.size()) != n ||
      static_cast<int>(params.size()) != n) {
    throw std::invalid_argument("safety step inputs disagree in size");
  }
  SafetyStepResult result;
  result.u.resize(n, Eigen::Vector3d::Zero());
  result.status.resize(n, QpStatus::kInfeasible);
  result.active_sets.resize(n);
  result.iterations.resize(n, 0);
  for (int i = 0; i < n; ++i) {
    std::vector<Neighbor> neighbors;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      neighbors.push_back({states[j], params[j].responsibility,
                           params[j].barrier.safety_radius});
    }
    const QpInstance qp =
        AssembleWeightedQp(states[i], u_lqr[i], neighbors, params[i]);
    const std::span<const int> warm =
        i < static_cast<int>(warm_active.size())
            ? std::span<const int>(warm_active[i])
            : std::span<const int>();
    const QpSolution sol = SolveQp(qp, warm);
    result.status[i] = sol.status;
    result.iterations[i] = sol.iterations;
    if (sol.status == QpStatus::kOptimal) {
      result.u[i] = sol.u;
      result.active_sets[i] = sol.active_set;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (result.status[i] != QpStatus::kOptimal ||
          result.status[j] != QpStatus::kOptimal) {
        continue;
      }
      BarrierSpec pair = params[i].barrier;
      pair.safety_radius = std::max(params[i].barrier.safety_radius,
                                    params[j].barrier.safety_radius);
      const BarrierRow br =
          ComputeBarrierRow(states[i], states[j], pair, params[i].spec.order);
      const double lhs = br.a.dot(result.u[i] - result.u[j]) + br.b;
      const double scale = 1.0 + std::abs(br.b) +
                           br.a.norm() * (result.u[i].norm() +
                                          result.u[j].norm());
      if (lhs < -1e-9 * scale) ++result.centralized_violations;
    }
  }
  return result;
}

}  // namespace infogather
