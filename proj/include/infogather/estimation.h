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


// Kalman filtering over the joint target state and the offset objective
// g(S) = MI(S) - sum_i m_i C_i(sigma_i) + Omega evaluated by all planners.

#ifndef INFOGATHER_ESTIMATION_H_
#define INFOGATHER_ESTIMATION_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "infogather/candidate.h"
#include "infogather/world.h"

namespace infogather {

struct Belief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// A cov A^T + W. Throws std::invalid_argument on a dimension mismatch.
Eigen::MatrixXd KfPredict(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& a,
                          const Eigen::MatrixXd& w);

// (cov^-1 + sum M)^-1, computed as L (I + L^T M L)^-1 L^T with cov = L L^T so
// no ill-conditioned inverse is ever formed. Throws NumericalError when cov is
// not PD.
Eigen::MatrixXd KfUpdate(const Eigen::MatrixXd& cov,
                         std::span<const Eigen::MatrixXd> infos);

// log det of a symmetric PSD matrix with eigenvalues floored at 1e-9.
double LogDetPsd(const Eigen::MatrixXd& m);

// Mean and covariance prediction through the block-diagonal target model.
Belief PredictBelief(const Belief& belief, const TargetModel& targets);

// Predicted means for steps 0..horizon without measurements.
std::vector<Eigen::VectorXd> PredictedMeans(const TargetModel& targets,
                                            const Eigen::VectorXd& mean0,
                                            int horizon);

// Per-step, per-block position information gathered along `states[1..K]`,
// linearized about `predicted_means[k]`. Degenerate sensor geometry counts as
// no information.
std::vector<BlockInformation> TrajectoryInformation(
    std::span<const UnicycleState> states, const SensorModel& sensor,
    const TargetModel& targets,
    std::span<const Eigen::VectorXd> predicted_means);

// Everything the oracle needs besides the ground set.
struct OracleContext {
  TargetModel targets;
  std::vector<BlockMatrix> prior_cov;  // per target block
  int horizon = 1;
  double offset = 0.0;  // Omega = sum_i m_i c^max_i

  // Splits `prior.cov` into per-block covariances. Throws ConfigError if it
  // couples different blocks or K < 1.
  static OracleContext Create(const TargetModel& targets, const Belief& prior,
                              int horizon, double offset);
};

// sum_i m_i c^max_i.
double OracleOffset(std::span<const double> weights,
                    std::span<const double> cost_bounds);

// MI of the measurements collected by `trajectories` over the horizon.
// Summation runs in the given order; callers pass a canonical order.
double MutualInformation(const OracleContext& ctx,
                         std::span<const CandidateTrajectory* const> trajectories);

// Memoizing evaluator of g(S). Thread-safe; values are bit-identical for
// identical inputs regardless of call order.
class Oracle {
 public:
  Oracle(std::shared_ptr<const OracleContext> ctx,
         std::shared_ptr<const GroundSet> ground);

  // g(S). Ids may come in any order. Throws std::out_of_range on an unknown
  // id.
  double Value(std::span<const TrajectoryId> set) const;
  double MutualInformation(std::span<const TrajectoryId> set) const;
  double Energy(std::span<const TrajectoryId> set) const;

  const CandidateTrajectory& Candidate(const TrajectoryId& id) const;
  const GroundSet& ground() const { return *ground_; }
  const OracleContext& context() const { return *ctx_; }
  double offset() const { return ctx_->offset; }

  // Number of Value() requests and of those that missed the cache.
  int64_t calls() const { return calls_.load(); }
  int64_t evaluations() const { return evaluations_.load(); }
  void ResetCounters() {
    calls_ = 0;
    evaluations_ = 0;
  }

 private:
  std::vector<TrajectoryId> Canonical(std::span<const TrajectoryId> set) const;

  std::shared_ptr<const OracleContext> ctx_;
  std::shared_ptr<const GroundSet> ground_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<TrajectoryId>, double> cache_;
  mutable std::atomic<int64_t> calls_{0};
  mutable std::atomic<int64_t> evaluations_{0};
};

}  // namespace infogather

#endif  // INFOGATHER_ESTIMATION_H_
