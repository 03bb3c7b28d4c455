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


#include "infogather/estimation.h"

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "infogather/errors.h"
#include "infogather/planner.h"
#include "test_util.h"

namespace infogather {
namespace {

using ::infogather::testing::AllIndependentSets;
using ::infogather::testing::InstanceShape;
using ::infogather::testing::RandomSpd;
using ::infogather::testing::RandomTabulatedInstance;
using ::infogather::testing::ScalarInstance;

double MinEig(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}

TEST(KfPredictTest, IdentityNoNoise) {
  const Eigen::MatrixXd cov = Eigen::Matrix2d{{2, 0.5}, {0.5, 1}};
  EXPECT_EQ(KfPredict(cov, Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Zero()),
            cov);
}

TEST(KfPredictTest, AddsNoise) {
  const Eigen::MatrixXd i = Eigen::Matrix2d::Identity();
  EXPECT_EQ(KfPredict(i, i, i), Eigen::MatrixXd(2 * i));
}

TEST(KfPredictTest, PreservesPsd) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Eigen::MatrixXd cov = RandomSpd(rng, 4, 0.0, 3.0);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(4, 4);
    const Eigen::MatrixXd w = RandomSpd(rng, 4, 0.0, 1.0);
    EXPECT_GE(MinEig(KfPredict(cov, a, w)), -1e-10);
  }
}

TEST(KfPredictTest, DimensionMismatchThrows) {
  EXPECT_THROW(KfPredict(Eigen::Matrix2d::Identity(), Eigen::Matrix3d::Identity(),
                         Eigen::Matrix3d::Zero()),
               std::invalid_argument);
}

TEST(KfUpdateTest, EmptyListUnchanged) {
  const Eigen::MatrixXd cov = Eigen::Matrix2d{{2, 0.5}, {0.5, 1}};
  EXPECT_EQ(KfUpdate(cov, {}), cov);
}

TEST(KfUpdateTest, ScalarArithmetic) {
  Eigen::MatrixXd cov(1, 1);
  cov << 2.0;
  const std::vector<Eigen::MatrixXd> infos = {Eigen::MatrixXd::Ones(1, 1)};
  EXPECT_NEAR(KfUpdate(cov, infos)(0, 0), 2.0 / 3.0, 1e-15);
}

TEST(KfUpdateTest, ShrinksInLoewnerOrder) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const Eigen::MatrixXd cov = RandomSpd(rng, 3, 0.1, 4.0);
    std::vector<Eigen::MatrixXd> infos;
    for (int j = 0; j < 1 + t % 3; ++j) infos.push_back(RandomSpd(rng, 3, 0.0, 2.0));
    const Eigen::MatrixXd post = KfUpdate(cov, infos);
    EXPECT_GT(MinEig(post), 0.0);
    EXPECT_GE(MinEig(cov - post), -1e-10);
    Eigen::MatrixXd info_sum = cov.inverse();
    for (const auto& m : infos) info_sum += m;
    EXPECT_LT((post - info_sum.inverse()).norm(), 1e-10);
  }
}

TEST(KfUpdateTest, SingularCovarianceThrows) {
  const std::vector<Eigen::MatrixXd> infos = {Eigen::MatrixXd::Identity(2, 2)};
  EXPECT_THROW(KfUpdate(Eigen::MatrixXd::Zero(2, 2), infos), NumericalError);
}

TEST(LogDetTest, MatchesEigenvalues) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const Eigen::MatrixXd m = RandomSpd(rng, 4, 0.01, 10.0);
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
    EXPECT_NEAR(LogDetPsd(m), ev.array().log().sum(), 1e-10);
  }
  EXPECT_NEAR(LogDetPsd(Eigen::MatrixXd::Zero(2, 2)), 2 * std::log(1e-9), 1e-9);
}

TEST(MutualInformationTest, EmptySetIsZero) {
  const auto inst = RandomTabulatedInstance(1, {});
  EXPECT_EQ(MutualInformation(*inst.ctx, {}), 0.0);
}

TEST(MutualInformationTest, ScalarHandComputation) {
  // One axis observed: prior 1, predict 2, update (1/2 + 1)^-1.
  TargetModel targets({StaticTargetBlock(1.0)});
  Belief prior{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)};
  const OracleContext ctx = OracleContext::Create(targets, prior, 1, 0.0);
  CandidateTrajectory c;
  c.information.push_back({1, 0, Eigen::Matrix2d{{1, 0}, {0, 0}}});
  const CandidateTrajectory* ptr = &c;
  EXPECT_NEAR(MutualInformation(ctx, std::span(&ptr, 1)), 0.5 * std::log(3.0),
              1e-14);
}

TEST(MutualInformationTest, MatchesDenseRollout) {
  // Independent oracle: dense joint-state KF with the log-det telescoping sum.
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = RandomTabulatedInstance(seed, {.robots = 3});
    const OracleContext& ctx = *inst.ctx;
    const TargetModel& tm = ctx.targets;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(tm.dim(), tm.dim());
    for (int b = 0; b < tm.num_blocks(); ++b) {
      const int d = tm.block(b).dim();
      cov.block(tm.offset(b), tm.offset(b), d, d) = ctx.prior_cov[b];
    }
    std::vector<const CandidateTrajectory*> set;
    for (const auto& robot : *inst.ground) set.push_back(&robot.front());
    double mi = 0.0;
    for (int k = 1; k <= ctx.horizon; ++k) {
      const Eigen::MatrixXd pred =
          tm.DenseTransition() * cov * tm.DenseTransition().transpose() +
          tm.DenseProcessNoise();
      Eigen::MatrixXd info = pred.inverse();
      for (const auto* c : set) {
        for (const auto& e : c->information) {
          if (e.step != k) continue;
          info.block<2, 2>(tm.offset(e.block), tm.offset(e.block)) += e.info;
        }
      }
      cov = info.inverse();
      mi += 0.5 * (std::log(pred.determinant()) - std::log(cov.determinant()));
    }
    EXPECT_NEAR(MutualInformation(ctx, set), mi, 1e-9 * (1 + mi)) << seed;
  }
}

TEST(OracleTest, OffsetSum) {
  const std::vector<double> m = {1.0, 2.0};
  const std::vector<double> c = {10.0, 10.0};
  EXPECT_DOUBLE_EQ(OracleOffset(m, c), 30.0);
}

TEST(OracleTest, EmptySetIsOffset) {
  const auto inst = RandomTabulatedInstance(2, {});
  const auto oracle = inst.MakeOracle();
  EXPECT_EQ(oracle->Value({}), inst.ctx->offset);
}

TEST(OracleTest, NonNegativeOnAllIndependentSets) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = RandomTabulatedInstance(seed, {.robots = 3, .max_candidates = 4});
    const auto oracle = inst.MakeOracle();
    for (const auto& set : AllIndependentSets(*inst.ground)) {
      EXPECT_GE(oracle->Value(set), 0.0);
    }
  }
}

TEST(OracleTest, StandaloneGainMatchesOracle) {
  const auto inst = RandomTabulatedInstance(3, {});
  const auto oracle = inst.MakeOracle();
  for (const auto& robot : *inst.ground) {
    for (const auto& c : robot) {
      const TrajectoryId id = c.id;
      EXPECT_NEAR(oracle->Value(std::span(&id, 1)) - oracle->offset(),
                  c.standalone_gain, 1e-12);
    }
  }
}

TEST(OracleTest, SubmodularAndMonotone) {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (uint64_t seed = 0; checked < 500; ++seed) {
    const auto inst = RandomTabulatedInstance(seed, {.robots = 3});
    const auto oracle = inst.MakeOracle();
    const auto sets = AllIndependentSets(*inst.ground);
    std::uniform_int_distribution<size_t> pick(0, sets.size() - 1);
    for (int t = 0; t < 20; ++t) {
      const auto& s2 = sets[pick(rng)];
      std::vector<TrajectoryId> s1;
      for (const auto& id : s2) {
        if (rng() % 2) s1.push_back(id);
      }
      // a from a robot unused by S2.
      std::vector<int> free;
      for (int i = 0; i < static_cast<int>(inst.ground->size()); ++i) {
        bool used = false;
        for (const auto& id : s2) used |= id.robot == i;
        if (!used) free.push_back(i);
      }
      if (free.empty()) continue;
      const int robot = free[rng() % free.size()];
      const TrajectoryId a{robot,
                           static_cast<int>(rng() % (*inst.ground)[robot].size())};
      auto with = [&](std::vector<TrajectoryId> s) {
        s.push_back(a);
        return s;
      };
      const double mi1 = oracle->MutualInformation(s1);
      const double mi2 = oracle->MutualInformation(s2);
      EXPECT_LE(mi1, mi2 + 1e-9);
      EXPECT_GE(mi1, 0.0);
      const double gain1 = oracle->MutualInformation(with(s1)) - mi1;
      const double gain2 = oracle->MutualInformation(with(s2)) - mi2;
      EXPECT_GE(gain1, gain2 - 1e-9);
      const double g1 = oracle->Value(with(s1)) - oracle->Value(s1);
      const double g2 = oracle->Value(with(s2)) - oracle->Value(s2);
      EXPECT_GE(g1, g2 - 1e-9);
      ++checked;
    }
  }
}

TEST(OracleTest, NonMonotoneWitness) {
  // Robot 1's only trajectory costs energy and sees nothing.
  const auto inst = ScalarInstance({{{1.0, 0.0}}, {{0.0, 2.0}}}, 5.0);
  const auto oracle = inst.MakeOracle();
  const std::vector<TrajectoryId> s = {{0, 0}};
  const std::vector<TrajectoryId> s_plus = {{0, 0}, {1, 0}};
  EXPECT_LT(oracle->Value(s_plus), oracle->Value(s));
  EXPECT_NEAR(oracle->Value(s) - oracle->Value(s_plus), 2.0, 1e-12);
}

TEST(OracleTest, DeterministicAcrossInstancesAndOrder) {
  const auto inst = RandomTabulatedInstance(4, {.robots = 3});
  const auto a = inst.MakeOracle();
  const auto b = inst.MakeOracle();
  std::vector<TrajectoryId> s;
  for (int i = 0; i < 3; ++i) s.push_back({i, 0});
  std::vector<TrajectoryId> r(s.rbegin(), s.rend());
  EXPECT_EQ(a->Value(s), b->Value(r));
  EXPECT_EQ(a->Value(s), a->Value(r));
}

TEST(OracleTest, MemoizationCountsHits) {
  const auto inst = RandomTabulatedInstance(5, {});
  const auto oracle = inst.MakeOracle();
  const TrajectoryId id{0, 0};
  oracle->Value(std::span(&id, 1));
  oracle->Value(std::span(&id, 1));
  EXPECT_EQ(oracle->calls(), 2);
  EXPECT_EQ(oracle->evaluations(), 1);
}

TEST(OracleTest, UnknownIdThrows) {
  const auto inst = RandomTabulatedInstance(6, {});
  const auto oracle = inst.MakeOracle();
  const TrajectoryId id{0, 1000};
  EXPECT_THROW(oracle->Value(std::span(&id, 1)), std::out_of_range);
}

TEST(OracleContextTest, RejectsCoupledPrior) {
  TargetModel targets({StaticTargetBlock(), StaticTargetBlock()});
  Belief prior{Eigen::VectorXd::Zero(4), Eigen::MatrixXd::Identity(4, 4)};
  prior.cov(0, 2) = prior.cov(2, 0) = 0.1;
  EXPECT_THROW(OracleContext::Create(targets, prior, 2, 0.0), ConfigError);
  prior.cov(0, 2) = prior.cov(2, 0) = 0.0;
  EXPECT_THROW(OracleContext::Create(targets, prior, 0, 0.0), ConfigError);
}

}  // namespace
}  // namespace infogather
