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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "infogather/errors.h"

namespace infogather {
namespace {

constexpr double kEigenFloor = 1e-9;

template <typename Matrix>
Matrix Symmetrized(const Matrix& m) {
  return 0.5 * (m + m.transpose());
}

// Information-form update of a PD covariance. Returns the updated covariance
// and adds 1/2 log det(I + L^T M L) = 1/2 [log det cov - log det cov'] to
// `half_logdet_gain`.
template <typename Matrix>
Matrix InformationUpdate(const Matrix& cov, const Matrix& info,
                         double* half_logdet_gain) {
  Eigen::LLT<Matrix> cov_llt(cov);
  if (cov_llt.info() != Eigen::Success) {
    throw NumericalError("covariance is not positive definite");
  }
  const Matrix l = cov_llt.matrixL();
  const int d = static_cast<int>(cov.rows());
  const Matrix s = Matrix::Identity(d, d) + l.transpose() * info * l;
  Eigen::LLT<Matrix> s_llt(Symmetrized<Matrix>(s));
  if (s_llt.info() != Eigen::Success) {
    throw NumericalError("information matrix is not positive semidefinite");
  }
  if (half_logdet_gain != nullptr) {
    const Matrix ls = s_llt.matrixL();
    double acc = 0.0;
    for (int i = 0; i < d; ++i) acc += std::log(ls(i, i));
    *half_logdet_gain += acc;
  }
  const Matrix x = s_llt.solve(Matrix(l.transpose()));
  return Symmetrized<Matrix>(Matrix(l * x));
}

}  // namespace

Eigen::MatrixXd KfPredict(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& a,
                          const Eigen::MatrixXd& w) {
  if (cov.rows() != cov.cols() || a.rows() != a.cols() ||
      a.cols() != cov.rows() || w.rows() != a.rows() ||
      w.cols() != a.rows()) {
    throw std::invalid_argument("KfPredict: dimension mismatch");
  }
  return Symmetrized<Eigen::MatrixXd>(a * cov * a.transpose() + w);
}

Eigen::MatrixXd KfUpdate(const Eigen::MatrixXd& cov,
                         std::span<const Eigen::MatrixXd> infos) {
  if (infos.empty()) return cov;
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(cov.rows(), cov.cols());
  for (const Eigen::MatrixXd& m : infos) {
    if (m.rows() != cov.rows() || m.cols() != cov.cols()) {
      throw std::invalid_argument("KfUpdate: dimension mismatch");
    }
    total += m;
  }
  return InformationUpdate<Eigen::MatrixXd>(cov, total, nullptr);
}

double LogDetPsd(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) {
    const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
    if (diag.minCoeff() * diag.minCoeff() >= 1e-6) {
      return 2.0 * diag.array().log().sum();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      Symmetrized<Eigen::MatrixXd>(m), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseMax(kEigenFloor).array().log().sum();
}

Belief PredictBelief(const Belief& belief, const TargetModel& targets) {
  Belief out;
  const Eigen::MatrixXd a = targets.DenseTransition();
  out.mean = a * belief.mean;
  out.cov = KfPredict(belief.cov, a, targets.DenseProcessNoise());
  return out;
}

std::vector<Eigen::VectorXd> PredictedMeans(const TargetModel& targets,
                                            const Eigen::VectorXd& mean0,
                                            int horizon) {
  if (mean0.size() != targets.dim()) {
    throw std::invalid_argument("PredictedMeans: dimension mismatch");
  }
  std::vector<Eigen::VectorXd> means;
  means.reserve(horizon + 1);
  means.push_back(mean0);
  for (int k = 1; k <= horizon; ++k) {
    Eigen::VectorXd next(mean0.size());
    for (int b = 0; b < targets.num_blocks(); ++b) {
      const int off = targets.offset(b);
      const int d = targets.block(b).dim();
      next.segment(off, d) =
          targets.block(b).transition * means.back().segment(off, d);
    }
    means.push_back(std::move(next));
  }
  return means;
}

std::vector<BlockInformation> TrajectoryInformation(
    std::span<const UnicycleState> states, const SensorModel& sensor,
    const TargetModel& targets,
    std::span<const Eigen::VectorXd> predicted_means) {
  if (predicted_means.size() < states.size()) {
    throw std::invalid_argument("not enough predicted target means");
  }
  std::vector<BlockInformation> out;
  for (size_t k = 1; k < states.size(); ++k) {
    for (int b = 0; b < targets.num_blocks(); ++b) {
      if (!targets.block(b).has_position) continue;
      const Eigen::Vector2d target =
          predicted_means[k].segment<2>(targets.offset(b));
      Eigen::Matrix2d info;
      try {
        info = PositionInformation(states[k], sensor, target);
      } catch (const DegenerateGeometryError&) {
        continue;
      }
      if (info.isZero(0.0)) continue;
      out.push_back({static_cast<int>(k), b, info});
    }
  }
  return out;
}

OracleContext OracleContext::Create(const TargetModel& targets,
                                    const Belief& prior, int horizon,
                                    double offset) {
  if (horizon < 1) throw ConfigError("planning horizon must be >= 1");
  if (prior.cov.rows() != targets.dim() || prior.cov.cols() != targets.dim()) {
    throw ConfigError("prior covariance dimension mismatch");
  }
  OracleContext ctx;
  ctx.targets = targets;
  ctx.horizon = horizon;
  ctx.offset = offset;
  for (int b = 0; b < targets.num_blocks(); ++b) {
    const int off = targets.offset(b);
    const int d = targets.block(b).dim();
    for (int r = off; r < off + d; ++r) {
      for (int c = 0; c < targets.dim(); ++c) {
        if ((c < off || c >= off + d) && prior.cov(r, c) != 0.0) {
          throw ConfigError("prior covariance couples target blocks");
        }
      }
    }
    ctx.prior_cov.push_back(prior.cov.block(off, off, d, d));
  }
  return ctx;
}

double OracleOffset(std::span<const double> weights,
                    std::span<const double> cost_bounds) {
  if (weights.size() != cost_bounds.size()) {
    throw std::invalid_argument("OracleOffset: size mismatch");
  }
  double total = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    total += weights[i] * cost_bounds[i];
  }
  return total;
}

double MutualInformation(
    const OracleContext& ctx,
    std::span<const CandidateTrajectory* const> trajectories) {
  const int num_blocks = ctx.targets.num_blocks();
  const int horizon = ctx.horizon;
  std::vector<Eigen::Matrix2d> acc(static_cast<size_t>(horizon) * num_blocks,
                                   Eigen::Matrix2d::Zero());
  std::vector<char> has(acc.size(), 0);
  std::vector<char> block_used(num_blocks, 0);
  for (const CandidateTrajectory* t : trajectories) {
    for (const BlockInformation& e : t->information) {
      if (e.step < 1 || e.step > horizon || e.block < 0 ||
          e.block >= num_blocks) {
        throw std::out_of_range("trajectory information outside horizon");
      }
      const size_t slot = static_cast<size_t>(e.step - 1) * num_blocks + e.block;
      acc[slot] += e.info;
      has[slot] = 1;
      block_used[e.block] = 1;
    }
  }

  double mi = 0.0;
  for (int b = 0; b < num_blocks; ++b) {
    if (!block_used[b]) continue;
    const TargetBlock& blk = ctx.targets.block(b);
    const int d = blk.dim();
    BlockMatrix sigma = ctx.prior_cov[b];
    BlockMatrix info = BlockMatrix::Zero(d, d);
    for (int k = 1; k <= horizon; ++k) {
      sigma = Symmetrized<BlockMatrix>(
          blk.transition * sigma * blk.transition.transpose() +
          blk.process_noise);
      const size_t slot = static_cast<size_t>(k - 1) * num_blocks + b;
      if (!has[slot]) continue;
      info.topLeftCorner<2, 2>() = acc[slot];
      sigma = InformationUpdate<BlockMatrix>(sigma, info, &mi);
    }
  }
  return mi;
}

Oracle::Oracle(std::shared_ptr<const OracleContext> ctx,
               std::shared_ptr<const GroundSet> ground)
    : ctx_(std::move(ctx)), ground_(std::move(ground)) {}

const CandidateTrajectory& Oracle::Candidate(const TrajectoryId& id) const {
  if (id.robot < 0 || id.robot >= static_cast<int>(ground_->size()) ||
      id.index < 0 ||
      id.index >= static_cast<int>((*ground_)[id.robot].size())) {
    throw std::out_of_range("unknown trajectory id (" +
                            std::to_string(id.robot) + ", " +
                            std::to_string(id.index) + ")");
  }
  return (*ground_)[id.robot][id.index];
}

std::vector<TrajectoryId> Oracle::Canonical(
    std::span<const TrajectoryId> set) const {
  std::vector<TrajectoryId> key(set.begin(), set.end());
  std::sort(key.begin(), key.end());
  for (const TrajectoryId& id : key) Candidate(id);
  return key;
}

double Oracle::MutualInformation(std::span<const TrajectoryId> set) const {
  const std::vector<TrajectoryId> key = Canonical(set);
  std::vector<const CandidateTrajectory*> trajs;
  trajs.reserve(key.size());
  for (const TrajectoryId& id : key) trajs.push_back(&Candidate(id));
  return infogather::MutualInformation(*ctx_, trajs);
}

double Oracle::Energy(std::span<const TrajectoryId> set) const {
  double total = 0.0;
  for (const TrajectoryId& id : Canonical(set)) total += Candidate(id).energy;
  return total;
}

double Oracle::Value(std::span<const TrajectoryId> set) const {
  ++calls_;
  std::vector<TrajectoryId> key = Canonical(set);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  ++evaluations_;
  const double value = MutualInformation(key) - Energy(key) + ctx_->offset;
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(std::move(key), value);
  return value;
}

}  // namespace infogather
