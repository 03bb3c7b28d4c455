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
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "infogather/errors.h"
#include "infogather/qp.h"
#include "test_util.h"

namespace infogather {
namespace {

using ::infogather::testing::BarrierFiniteDifference;
using ::infogather::testing::QuadratureGramian;
using ::infogather::testing::RandomSpd;
using ::infogather::testing::RolloutLqr;

Eigen::VectorXd RandomVector(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Eigen::VectorXd::NullaryExpr(n, [&] { return u(rng); });
}

TEST(IntegratorSpecTest, Structure) {
  const IntegratorSpec spec{2};
  EXPECT_EQ(spec.state_dim(), 6);
  EXPECT_TRUE(spec.A().block(0, 3, 3, 3).isIdentity());
  EXPECT_TRUE(spec.B().block(3, 0, 3, 3).isIdentity());
  EXPECT_TRUE(spec.B().block(0, 0, 3, 3).isZero());
  EXPECT_THROW(ValidateOrder(3), ConfigError);
}

TEST(MapToReferenceTest, VelocityFromEnteringPrimitive) {
  const UnicycleState s{0, 0, 0, 3};
  const Eigen::VectorXd x = MapToReference(s, {0.3, 0.0}, false, 2);
  EXPECT_EQ(x, (Eigen::VectorXd(6) << 0, 0, 3, 0.3, 0, 0).finished());
  const Eigen::VectorXd last = MapToReference(s, {0.3, 0.0}, true, 2);
  EXPECT_TRUE(last.tail<3>().isZero(0.0));
  EXPECT_EQ(MapToReference(s, {0.3, 0.0}, false, 1).size(), 3);
}

TEST(MapToReferenceTest, VelocityMatchesFiniteDifferenceOfPositions) {
  const MotionPrimitive u{0.3, 0.0};
  const UnicycleState s0{1.0, 2.0, 0.7, 3.0};
  const UnicycleState s1 = StepUnicycle(s0, u, 0.5);
  const Eigen::VectorXd x0 = MapToReference(s0, u, false, 2);
  const Eigen::VectorXd x1 = MapToReference(s1, u, false, 2);
  const Eigen::Vector3d fd = (x1.head<3>() - x0.head<3>()) / 0.5;
  EXPECT_LT((fd - x1.segment<3>(3)).norm(), 1e-12);
}

TEST(ReferencePlanTest, TimesAndSegments) {
  std::vector<UnicycleState> states(4);
  std::vector<MotionPrimitive> controls(3);
  const ReferencePlan plan = MakeReferencePlan(
      states, controls, Eigen::VectorXd::Zero(6), 2, 10.0, 0.5);
  EXPECT_EQ(plan.waypoints.size(), 4u);
  EXPECT_DOUBLE_EQ(plan.time(2), 11.0);
  EXPECT_EQ(plan.SegmentAt(10.0), 0);
  EXPECT_EQ(plan.SegmentAt(10.5), 1);
  EXPECT_EQ(plan.SegmentAt(99.0), 2);
}

TEST(GramianTest, FirstOrderIsHorizonTimesIdentity) {
  const Eigen::MatrixXd g = Gramian({1}, Eigen::Matrix3d::Identity(), 2.0);
  EXPECT_LT((g - 2.0 * Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-15);
}

TEST(GramianTest, SecondOrderUnitHorizon) {
  const Eigen::MatrixXd g = Gramian({2}, Eigen::Matrix3d::Identity(), 1.0);
  const Eigen::Matrix3d i3 = Eigen::Matrix3d::Identity();
  Eigen::MatrixXd expected(6, 6);
  expected << i3 / 3.0, i3 / 2.0, i3 / 2.0, i3;
  EXPECT_LT((g - expected).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((g - QuadratureGramian({2}, Eigen::Matrix3d::Identity(), 1.0, 64))
                .cwiseAbs()
                .maxCoeff(),
            1e-8);
}

TEST(GramianTest, MatchesQuadratureAcrossHorizons) {
  std::mt19937_64 rng(1);
  for (int order : {1, 2}) {
    for (double h : {1e-3, 1e-2, 0.1, 1.0, 3.0, 10.0}) {
      const Eigen::Matrix3d r = RandomSpd(rng, 3, 0.5, 2.0);
      const Eigen::MatrixXd g = Gramian({order}, r, h);
      const Eigen::MatrixXd q = QuadratureGramian({order}, r, h, 64);
      EXPECT_LT((g - q).cwiseAbs().maxCoeff(), 1e-8) << order << " " << h;
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g)
                    .eigenvalues()
                    .minCoeff(),
                0.0);
    }
  }
}

TEST(GramianTest, NonPositiveHorizonThrows) {
  EXPECT_THROW(Gramian({2}, Eigen::Matrix3d::Identity(), 0.0), NumericalError);
}

LqrSegment Segment(int order, const Eigen::VectorXd& target, double t_end) {
  LqrSegment seg;
  seg.spec = {order};
  seg.t_end = t_end;
  seg.x_ref_end = target;
  return seg;
}

TEST(LqrControlTest, FreeDriftNeedsNoControl) {
  Eigen::VectorXd x(6);
  x << 0, 0, 0, 1, 2, 0;
  const LqrSegment seg = Segment(2, StateTransition({2}, 1.5) * x, 1.5);
  EXPECT_LT(LqrControl(x, 0.0, seg, Eigen::Vector3d::Zero()).u.norm(), 1e-12);
}

TEST(LqrControlTest, FirstOrderMovesAtConstantRate) {
  const Eigen::Vector3d p(0.5, -1.0, 2.0);
  const Eigen::Vector3d ref(1.5, 1.0, 0.0);
  const LqrSegment seg = Segment(1, ref, 3.0);
  const LqrOutput out = LqrControl(p, 1.0, seg, Eigen::Vector3d::Zero());
  EXPECT_LT((out.u - (ref - p) / 2.0).norm(), 1e-12);
  EXPECT_FALSE(out.horizon_collapsed);
}

TEST(LqrControlTest, HoldsLastControlNearBoundary) {
  const LqrSegment seg = Segment(1, Eigen::Vector3d::Ones(), 1.0);
  const Eigen::Vector3d last(1, 2, 3);
  const LqrOutput out = LqrControl(Eigen::Vector3d::Zero(), 1.0 - 1e-4, seg, last);
  EXPECT_TRUE(out.horizon_collapsed);
  EXPECT_EQ(out.u, last);
}

TEST(LqrControlTest, ClosedLoopReachesReference) {
  std::mt19937_64 rng(3);
  for (int order : {1, 2}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 3 * order;
      const LqrSegment seg = Segment(order, RandomVector(rng, n, 2.0), 1.0);
      const auto roll = RolloutLqr(seg, RandomVector(rng, n, 2.0), 0.0, 1e-3);
      EXPECT_LE(roll.terminal_error, 1e-3);
    }
  }
}

TEST(LqrEnergyTest, ZeroOnDriftManifold) {
  Eigen::VectorXd x(6);
  x << 1, 0, 0, 0, 1, 0;
  const LqrSegment seg = Segment(2, StateTransition({2}, 2.0) * x, 2.0);
  EXPECT_NEAR(LqrEnergy(seg, x, 0.0), 0.0, 1e-14);
}

TEST(LqrEnergyTest, FirstOrderUnitMove) {
  const LqrSegment seg = Segment(1, Eigen::Vector3d(1, 0, 0), 1.0);
  EXPECT_NEAR(LqrEnergy(seg, Eigen::Vector3d::Zero(), 0.0), 0.5, 1e-14);
}

TEST(LqrEnergyTest, MatchesIntegratedEffort) {
  std::mt19937_64 rng(4);
  for (int order : {1, 2}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 3 * order;
      LqrSegment seg = Segment(order, RandomVector(rng, n, 2.0), 1.5);
      seg.r = RandomSpd(rng, 3, 0.5, 2.0);
      const Eigen::VectorXd x0 = RandomVector(rng, n, 2.0);
      const double planned = LqrEnergy(seg, x0, 0.0);
      const auto roll = RolloutLqr(seg, x0, 0.0, 1e-3);
      EXPECT_NEAR(roll.effort, planned, 0.01 * planned);
    }
  }
}

TEST(LyapunovTest, ZeroOnDriftManifoldAndEqualsEnergy) {
  std::mt19937_64 rng(5);
  Eigen::VectorXd x = RandomVector(rng, 6, 1.0);
  LqrSegment seg = Segment(2, StateTransition({2}, 1.0) * x, 1.0);
  EXPECT_NEAR(Lyapunov(x, 0.0, seg).v, 0.0, 1e-12);
  seg.x_ref_end = RandomVector(rng, 6, 1.0);
  EXPECT_DOUBLE_EQ(Lyapunov(x, 0.0, seg).v, LqrEnergy(seg, x, 0.0));
}

TEST(LyapunovTest, InputGradientIdentity) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    LqrSegment seg = Segment(2, RandomVector(rng, 6, 2.0), 2.0);
    seg.r = RandomSpd(rng, 3, 0.5, 2.0);
    const Eigen::VectorXd x = RandomVector(rng, 6, 2.0);
    const double t = 0.3;
    const LyapunovTerms terms = Lyapunov(x, t, seg);
    const Eigen::Vector3d u = LqrControl(x, t, seg, Eigen::Vector3d::Zero()).u;
    const Eigen::RowVector3d lhs = terms.dv_dx * seg.spec.B();
    const Eigen::RowVector3d rhs = -(seg.r * u).transpose();
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9 * (1.0 + rhs.norm()));
  }
}

TEST(LyapunovTest, RateMatchesFiniteDifference) {
  std::mt19937_64 rng(7);
  for (int order : {1, 2}) {
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 3 * order;
      LqrSegment seg = Segment(order, RandomVector(rng, n, 2.0), 2.0);
      const Eigen::VectorXd x = RandomVector(rng, n, 2.0);
      const Eigen::Vector3d u = RandomVector(rng, 3, 1.0);
      const double t = 0.5;
      const double h = 1e-5;
      const double fd =
          (Lyapunov(IntegrateRk4(seg.spec, x, u, h), t + h, seg).v -
           Lyapunov(IntegrateRk4(seg.spec, x, u, -h), t - h, seg).v) /
          (2 * h);
      const double rate = Lyapunov(x, t, seg).Rate(seg.spec, x, u);
      EXPECT_NEAR(rate, fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(PolePlaceTest, Constants) {
  const std::vector<double> a = {-5.0, -5.1};
  const Eigen::RowVectorXd ka = PolePlaceKeta(a);
  EXPECT_NEAR(ka(0), 25.5, 1e-12);
  EXPECT_NEAR(ka(1), 10.1, 1e-12);
  const std::vector<double> b = {-3.0, -3.1};
  const Eigen::RowVectorXd kb = PolePlaceKeta(b);
  EXPECT_NEAR(kb(0), 9.3, 1e-12);
  EXPECT_NEAR(kb(1), 6.1, 1e-12);
  const std::vector<double> c = {-2.5};
  EXPECT_DOUBLE_EQ(PolePlaceKeta(c)(0), 2.5);
}

TEST(PolePlaceTest, RejectsNonNegativePole) {
  const std::vector<double> p = {-1.0, 0.0};
  EXPECT_THROW(PolePlaceKeta(p), ConfigError);
}

TEST(PolePlaceTest, ClosedLoopSpectrum) {
  const std::vector<double> poles = {-2.0, -7.5};
  const Eigen::RowVectorXd k = PolePlaceKeta(poles);
  Eigen::Matrix2d closed{{0, 1}, {-k(0), -k(1)}};
  Eigen::Vector2d ev = closed.eigenvalues().real();
  std::sort(ev.data(), ev.data() + 2);
  EXPECT_NEAR(ev(0), -7.5, 1e-12);
  EXPECT_NEAR(ev(1), -2.0, 1e-12);
}

BarrierSpec Spec() {
  BarrierSpec spec;
  spec.safety_radius = 0.5;
  spec.z_scale = 1.0;
  spec.k_eta = Eigen::RowVector2d(25.5, 10.1);
  return spec;
}

TEST(BarrierTest, HValues) {
  const BarrierSpec spec = Spec();
  EXPECT_DOUBLE_EQ(BarrierH({1, 0, 0}, {0, 0, 0}, spec), 0.9375);
  EXPECT_DOUBLE_EQ(BarrierH({1, 1, 1}, {1, 1, 1}, spec), -0.0625);
  BarrierSpec tall = spec;
  tall.z_scale = 2.0;
  EXPECT_NEAR(BarrierH({0, 0, 1.0}, {0, 0, 0}, tall), 0.0, 1e-15);
}

TEST(BarrierTest, ValidateRejectsBadSpec) {
  BarrierSpec spec = Spec();
  EXPECT_NO_THROW(spec.Validate(2));
  spec.k_eta = Eigen::RowVector2d(-1.0, 1.0);
  EXPECT_THROW(spec.Validate(2), ConfigError);
  spec = Spec();
  spec.safety_radius = 0.0;
  EXPECT_THROW(spec.Validate(2), ConfigError);
}

TEST(BarrierTest, RowOnAxis) {
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(6), xj = Eigen::VectorXd::Zero(6);
  xi(0) = 1.0;
  const BarrierRow row = ComputeBarrierRow(xi, xj, Spec(), 2);
  EXPECT_EQ(row.a, Eigen::RowVector3d(4, 0, 0));
  EXPECT_EQ(row.eta(1), 0.0);
  EXPECT_EQ(row.lf_r, 0.0);
  EXPECT_DOUBLE_EQ(row.b, 25.5 * 0.9375);
}

TEST(BarrierTest, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    BarrierSpec spec = Spec();
    spec.z_scale = 0.5 + (trial % 4) * 0.5;
    Eigen::VectorXd xi(6), xj(6);
    xi << RandomVector(rng, 3, 2.0), RandomVector(rng, 3, 1.0);
    xj << RandomVector(rng, 3, 2.0), RandomVector(rng, 3, 1.0);
    const auto err = BarrierFiniteDifference(xi, xj, spec);
    EXPECT_LE(err.h_dot, 1e-4);
    EXPECT_LE(err.a_row, 1e-4);
    EXPECT_LE(err.drift, 1e-4);
    EXPECT_LE(err.u_dependence, 1e-6);
  }
}

TEST(MissionWeightTest, RankOneSpectrum) {
  const Eigen::Matrix3d w =
      MissionWeight(Eigen::Matrix3d::Identity(), Eigen::Vector3d::UnitX(), 0.5);
  Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(w).eigenvalues();
  EXPECT_NEAR(ev(0), 1.0, 1e-15);
  EXPECT_NEAR(ev(1), 1.0, 1e-15);
  EXPECT_NEAR(ev(2), 1.5, 1e-15);
  EXPECT_EQ(MissionWeight(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(), 3.0),
            Eigen::Matrix3d::Identity());
}

TEST(MissionWeightTest, EigenvaluesAtLeastOne) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Matrix3d r = RandomSpd(rng, 3, 0.1, 5.0);
    const Eigen::Vector3d u = RandomVector(rng, 3, 3.0);
    const double beta = 0.1 * trial;
    const Eigen::Matrix3d w = MissionWeight(r, u, beta);
    const Eigen::Vector3d ev =
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(w).eigenvalues();
    EXPECT_GE(ev.minCoeff(), 1.0 - 1e-12);
    EXPECT_NEAR(ev.maxCoeff(), 1.0 + beta, 1e-9 * (1 + beta));
  }
}

ControllerParams Params(double beta) {
  ControllerParams p;
  p.barrier = Spec();
  p.beta = beta;
  return p;
}

TEST(WeightedQpTest, InactiveConstraintsReturnNominal) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(6), far = Eigen::VectorXd::Zero(6);
  far(0) = 50.0;
  const Eigen::Vector3d u_lqr(0.3, -0.2, 0.1);
  std::vector<Neighbor> nb = {{far, 1.0, 0.5}};
  const QpSolution sol = SolveQp(AssembleWeightedQp(x, u_lqr, nb, Params(0.5)));
  ASSERT_EQ(sol.status, QpStatus::kOptimal);
  EXPECT_LT((sol.u - u_lqr).norm(), 1e-12);
}

TEST(WeightedQpTest, UnweightedProjection) {
  // Robots closing in along x; zero-beta QP is a Euclidean projection.
  Eigen::VectorXd xi(6), xj(6);
  xi << 1, 0, 0, -1, 0, 0;
  xj << 0, 0, 0, 1, 0, 0;
  const Eigen::Vector3d u_lqr(-2.0, 0.5, 0.0);
  std::vector<Neighbor> nb = {{xj, 1.0, 0.5}};
  const ControllerParams params = Params(0.0);
  const QpInstance qp = AssembleWeightedQp(xi, u_lqr, nb, params);
  ASSERT_EQ(qp.g.rows(), 1);
  const BarrierRow row = ComputeBarrierRow(xi, xj, params.barrier, 2);
  const Eigen::Vector3d a = -row.a.transpose();
  const double b = 0.5 * row.b;
  EXPECT_EQ(qp.h(0), b);
  ASSERT_GT(a.dot(u_lqr), b);
  const Eigen::Vector3d expected = u_lqr - a * (a.dot(u_lqr) - b) / a.squaredNorm();
  const QpSolution sol = SolveQp(qp);
  EXPECT_LT((sol.u - expected).norm(), 1e-10);
}

TEST(WeightedQpTest, ResponsibilitySplit) {
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(6), xj = Eigen::VectorXd::Zero(6);
  xi(0) = 1.0;
  ControllerParams params = Params(0.5);
  params.responsibility = 3.0;
  std::vector<Neighbor> nb = {{xj, 1.0, 0.8}};
  const QpInstance qp = AssembleWeightedQp(xi, Eigen::Vector3d::Zero(), nb, params);
  BarrierSpec pair = params.barrier;
  pair.safety_radius = 0.8;
  EXPECT_DOUBLE_EQ(qp.h(0), 0.75 * ComputeBarrierRow(xi, xj, pair, 2).b);
}

TEST(WeightedQpTest, BoxRows) {
  ControllerParams params = Params(0.5);
  params.box.input = 10.0;
  params.box.velocity = 2.0;
  params.box.position_min = Eigen::Vector3d::Constant(-5.0);
  params.box.position_max = Eigen::Vector3d::Constant(5.0);
  const QpInstance qp = AssembleWeightedQp(Eigen::VectorXd::Zero(6),
                                           Eigen::Vector3d(100, 0, 0), {}, params);
  EXPECT_EQ(qp.g.rows(), 18);
  const QpSolution sol = SolveQp(qp);
  ASSERT_EQ(sol.status, QpStatus::kOptimal);
  EXPECT_NEAR(sol.u(0), 10.0, 1e-9);
}

TEST(SafetyStepTest, FarApartApplyLqr) {
  std::vector<Eigen::VectorXd> x(2, Eigen::VectorXd::Zero(6));
  x[1](0) = 40.0;
  std::vector<Eigen::Vector3d> u = {{1, 0, 0}, {-1, 0.5, 0}};
  std::vector<ControllerParams> params(2, Params(0.5));
  const SafetyStepResult r = DecentralizedSafetyStep(x, u, params);
  EXPECT_LT((r.u[0] - u[0]).norm(), 1e-12);
  EXPECT_LT((r.u[1] - u[1]).norm(), 1e-12);
  EXPECT_EQ(r.centralized_violations, 0);
}

TEST(SafetyStepTest, HeadOnApproachStaysSafe) {
  const IntegratorSpec spec{2};
  std::vector<Eigen::VectorXd> x(2, Eigen::VectorXd::Zero(6));
  x[0](0) = -3.0;
  x[1](0) = 3.0;
  x[1](1) = 1e-3;
  std::vector<LqrSegment> segs(2);
  segs[0] = Segment(2, x[1], 4.0);
  segs[1] = Segment(2, x[0], 4.0);
  std::vector<ControllerParams> params(2, Params(0.5));
  std::vector<Eigen::Vector3d> last(2, Eigen::Vector3d::Zero());
  std::vector<std::vector<int>> warm(2);
  double min_h = 1e9;
  const double dt = 1e-2;
  for (int k = 0; k < 400; ++k) {
    std::vector<Eigen::Vector3d> u_lqr(2);
    for (int i = 0; i < 2; ++i) u_lqr[i] = LqrControl(x[i], k * dt, segs[i], last[i]).u;
    const SafetyStepResult r = DecentralizedSafetyStep(x, u_lqr, params, warm);
    ASSERT_EQ(r.status[0], QpStatus::kOptimal);
    ASSERT_EQ(r.status[1], QpStatus::kOptimal);
    EXPECT_EQ(r.centralized_violations, 0);
    for (int i = 0; i < 2; ++i) {
      x[i] = IntegrateRk4(spec, x[i], r.u[i], dt);
      last[i] = u_lqr[i];
    }
    warm = r.active_sets;
    min_h = std::min(min_h, BarrierH(x[0].head<3>(), x[1].head<3>(), params[0].barrier));
  }
  EXPECT_GE(min_h, -1e-6);
}

}  // namespace
}  // namespace infogather
