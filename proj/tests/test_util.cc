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


#include "test_util.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "infogather/world.h"

namespace infogather::testing {

Eigen::MatrixXd RandomSpd(std::mt19937_64& rng, int n, double min_eig,
                          double max_eig) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> eig(min_eig, max_eig);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = eig(rng);
  Eigen::MatrixXd out = q * d.asDiagonal() * q.transpose();
  return 0.5 * (out + out.transpose());
}

namespace {

void FillStandaloneGains(const OracleContext& ctx, GroundSet* ground) {
  for (auto& robot : *ground) {
    for (CandidateTrajectory& c : robot) {
      const CandidateTrajectory* self = &c;
      c.standalone_gain =
          MutualInformation(ctx, std::span<const CandidateTrajectory* const>(
                                     &self, 1)) -
          c.energy;
    }
  }
}

}  // namespace

TabulatedInstance RandomTabulatedInstance(uint64_t seed,
                                          const InstanceShape& shape) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;

  const int num_blocks = 1 + static_cast<int>(unit(rng) * 3);
  std::vector<TargetBlock> blocks;
  for (int b = 0; b < num_blocks; ++b) {
    if (unit(rng) < 0.3) {
      blocks.push_back(DoubleIntegratorBlock(0.5, 0.2 * unit(rng)));
    } else {
      blocks.push_back(StaticTargetBlock(0.5 * unit(rng)));
    }
  }
  TargetModel targets(blocks);
  Belief prior;
  prior.mean = Eigen::VectorXd::Zero(targets.dim());
  prior.cov = Eigen::MatrixXd::Zero(targets.dim(), targets.dim());
  for (int b = 0; b < num_blocks; ++b) {
    const int d = targets.block(b).dim();
    prior.cov.block(targets.offset(b), targets.offset(b), d, d) =
        RandomSpd(rng, d, 0.5, 5.0);
  }

  TabulatedInstance inst;
  auto ground = std::make_shared<GroundSet>(shape.robots);
  for (int i = 0; i < shape.robots; ++i) {
    const double weight = shape.max_weight * unit(rng);
    const double cost_bound = 5.0;
    inst.weights.push_back(weight);
    inst.cost_bounds.push_back(cost_bound);
    const int count = 1 + static_cast<int>(unit(rng) * shape.max_candidates);
    for (int j = 0; j < std::min(count, shape.max_candidates); ++j) {
      CandidateTrajectory c;
      c.id = {i, j};
      for (int k = 1; k <= shape.horizon; ++k) {
        for (int b = 0; b < num_blocks; ++b) {
          if (unit(rng) < 0.5) continue;
          Eigen::Matrix2d l;
          l << normal(rng), normal(rng), normal(rng), normal(rng);
          const double scale = 2.0 * unit(rng);
          c.information.push_back({k, b, scale * l * l.transpose()});
        }
      }
      c.energy = weight * cost_bound * unit(rng);
      (*ground)[i].push_back(std::move(c));
    }
  }
  const double offset = OracleOffset(inst.weights, inst.cost_bounds);
  auto ctx = std::make_shared<OracleContext>(
      OracleContext::Create(targets, prior, shape.horizon, offset));
  FillStandaloneGains(*ctx, ground.get());
  inst.ctx = ctx;
  inst.ground = ground;
  return inst;
}

TabulatedInstance ScalarInstance(
    const std::vector<std::vector<std::pair<double, double>>>& info_energy,
    double offset) {
  TargetModel targets({StaticTargetBlock(0.0)});
  Belief prior{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)};
  auto ctx = std::make_shared<OracleContext>(
      OracleContext::Create(targets, prior, 1, offset));
  auto ground = std::make_shared<GroundSet>(info_energy.size());
  TabulatedInstance inst;
  for (size_t i = 0; i < info_energy.size(); ++i) {
    for (size_t j = 0; j < info_energy[i].size(); ++j) {
      CandidateTrajectory c;
      c.id = {static_cast<int>(i), static_cast<int>(j)};
      const double info = info_energy[i][j].first;
      if (info > 0.0) {
        c.information.push_back(
            {1, 0, Eigen::Matrix2d::Identity() * info});
      }
      c.energy = info_energy[i][j].second;
      (*ground)[i].push_back(std::move(c));
    }
  }
  FillStandaloneGains(*ctx, ground.get());
  inst.ctx = ctx;
  inst.ground = ground;
  return inst;
}

std::vector<std::vector<TrajectoryId>> AllIndependentSets(
    const GroundSet& ground) {
  std::vector<std::vector<TrajectoryId>> out;
  std::vector<TrajectoryId> current;
  std::function<void(int)> rec = [&](int robot) {
    if (robot == static_cast<int>(ground.size())) {
      out.push_back(current);
      return;
    }
    rec(robot + 1);
    for (int j = 0; j < static_cast<int>(ground[robot].size()); ++j) {
      current.push_back({robot, j});
      rec(robot + 1);
      current.pop_back();
    }
  };
  rec(0);
  return out;
}

Optimum ExhaustiveOptimum(const Oracle& oracle) {
  Optimum best;
  bool first = true;
  for (const auto& set : AllIndependentSets(oracle.ground())) {
    const double v = oracle.Value(set);
    if (first || v > best.value) {
      best = {set, v};
      first = false;
    }
  }
  return best;
}

std::optional<std::string> LocalImprovement(const Oracle& oracle,
                                            const RoundResult& round,
                                            double alpha) {
  const GroundSet& ground = oracle.ground();
  const double nn = static_cast<double>(round.n);
  const double factor = 1.0 + alpha / (nn * nn * nn * nn);
  const double base = oracle.Value(round.set);
  auto excluded = [&](const TrajectoryId& id) {
    return std::find(round.excluded.begin(), round.excluded.end(), id) !=
           round.excluded.end();
  };
  auto in_set = [&](const TrajectoryId& id) {
    return std::find(round.set.begin(), round.set.end(), id) != round.set.end();
  };
  std::vector<std::optional<TrajectoryId>> deletions = {std::nullopt};
  for (const TrajectoryId& d : round.set) deletions.push_back(d);
  std::vector<std::optional<TrajectoryId>> additions = {std::nullopt};
  for (int i = 0; i < static_cast<int>(ground.size()); ++i) {
    for (int j = 0; j < static_cast<int>(ground[i].size()); ++j) {
      const TrajectoryId id{i, j};
      if (!excluded(id) && !in_set(id)) additions.push_back(id);
    }
  }
  for (const auto& d : deletions) {
    for (const auto& a : additions) {
      if (!d.has_value() && !a.has_value()) continue;
      std::vector<TrajectoryId> next;
      for (const TrajectoryId& id : round.set) {
        if (!d.has_value() || id != *d) next.push_back(id);
      }
      if (a.has_value()) {
        bool clash = false;
        for (const TrajectoryId& id : next) clash |= id.robot == a->robot;
        if (clash) continue;
        next.push_back(*a);
      }
      const double v = oracle.Value(next);
      if (v >= factor * base) {
        std::ostringstream os;
        os << "operation (";
        if (d) os << d->robot << ":" << d->index; else os << "NOP";
        os << ", ";
        if (a) os << a->robot << ":" << a->index; else os << "NOP";
        os << ") raises g from " << base << " to " << v;
        return os.str();
      }
    }
  }
  return std::nullopt;
}

double QpObjective(const QpInstance& qp, const Eigen::VectorXd& u) {
  return 0.5 * u.dot(qp.p * u) + qp.q.dot(u);
}

Eigen::VectorXd ProjectedGradientQp(const QpInstance& qp, int max_iterations,
                                    double tolerance) {
  const Eigen::MatrixXd pinv = qp.p.inverse();
  const int m = static_cast<int>(qp.g.rows());
  if (m == 0) return -pinv * qp.q;
  // Dual: min_{l >= 0} 1/2 l^T Q l + c^T l.
  const Eigen::MatrixXd dual_q = qp.g * pinv * qp.g.transpose();
  const Eigen::VectorXd dual_c = qp.h + qp.g * pinv * qp.q;
  const double lipschitz =
      std::max(1e-12, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                          dual_q, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .maxCoeff());
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd y = lambda;
  double t = 1.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd grad = dual_q * y + dual_c;
    const Eigen::VectorXd next =
        (y - grad / lipschitz).cwiseMax(0.0);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    Eigen::VectorXd y_next = next + ((t - 1.0) / t_next) * (next - lambda);
    // Adaptive restart keeps the iteration monotone.
    if ((next - lambda).dot(y - next) > 0.0) {
      y_next = next;
      t = 1.0;
    } else {
      t = t_next;
    }
    const double step = (next - lambda).norm();
    lambda = next;
    y = y_next;
    if (step < tolerance) break;
  }
  return -pinv * (qp.q + qp.g.transpose() * lambda);
}

}  // namespace infogather::testing

namespace infogather::testing {

Eigen::MatrixXd QuadratureGramian(const IntegratorSpec& spec,
                                  const Eigen::Matrix3d& r, double horizon,
                                  int intervals) {
  const Eigen::MatrixXd b = spec.B();
  const Eigen::MatrixXd brb = b * r.inverse() * b.transpose();
  auto integrand = [&](double s) {
    const Eigen::MatrixXd e = StateTransition(spec, s);
    return Eigen::MatrixXd(e * brb * e.transpose());
  };
  const int n = intervals + intervals % 2;
  const double h = horizon / n;
  Eigen::MatrixXd acc = integrand(0.0) + integrand(horizon);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * integrand(k * h);
  return acc * h / 3.0;
}

LqrRollout RolloutLqr(const LqrSegment& segment, const Eigen::VectorXd& x0,
                      double t0, double dt) {
  Eigen::VectorXd x = x0;
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  double t = t0;
  double effort = 0.0;
  const int steps = static_cast<int>(std::llround((segment.t_end - t0) / dt));
  for (int k = 0; k < steps; ++k) {
    const LqrOutput start = LqrControl(x, t, segment, u);
    u = start.u;
    effort += 0.5 * u.dot(segment.r * u) * dt;
    x = IntegrateRk4(segment.spec, x, u, dt);
    t = t0 + (k + 1) * dt;
  }
  return {(x - segment.x_ref_end).norm(), effort};
}

namespace {

Eigen::Vector3d PositionAt(const Eigen::VectorXd& x, const Eigen::Vector3d& u,
                           double t) {
  return x.head<3>() + x.segment<3>(3) * t + 0.5 * u * t * t;
}

double PairH(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
             const Eigen::Vector3d& ui, const Eigen::Vector3d& uj, double t,
             const BarrierSpec& spec) {
  return BarrierH(PositionAt(xi, ui, t), PositionAt(xj, uj, t), spec);
}

double RelErr(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace

BarrierFdErrors BarrierFiniteDifference(const Eigen::VectorXd& xi,
                                        const Eigen::VectorXd& xj,
                                        const BarrierSpec& spec) {
  const BarrierRow row = ComputeBarrierRow(xi, xj, spec, 2);
  const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
  const double e1 = 1e-5;
  const double e2 = 1e-3;
  auto hdot = [&](const Eigen::Vector3d& ui) {
    return (PairH(xi, xj, ui, zero, e1, spec) -
            PairH(xi, xj, ui, zero, -e1, spec)) /
           (2 * e1);
  };
  auto hddot = [&](const Eigen::Vector3d& ui) {
    return (PairH(xi, xj, ui, zero, e2, spec) -
            2 * PairH(xi, xj, ui, zero, 0.0, spec) +
            PairH(xi, xj, ui, zero, -e2, spec)) /
           (e2 * e2);
  };
  BarrierFdErrors err;
  const double hd0 = hdot(zero);
  err.h_dot = RelErr(hd0, row.eta(1));
  const double dd0 = hddot(zero);
  err.drift = RelErr(dd0, row.lf_r);
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d uk = Eigen::Vector3d::Unit(k);
    // h'' is affine in u, so a unit step isolates the coefficient.
    err.a_row = std::max(err.a_row, RelErr(hddot(uk) - dd0, row.a(k)));
    err.u_dependence = std::max(
        err.u_dependence,
        std::abs(hdot(uk) - hd0) / std::max(1.0, std::abs(hd0)));
  }
  return err;
}

}  // namespace infogather::testing
