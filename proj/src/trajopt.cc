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


#include "infogather/trajopt.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "infogather/errors.h"

namespace infogather {
namespace {

struct Node {
  std::vector<int> path;  // primitive indices
  UnicycleState state;
  double info = 0.0;
  std::vector<BlockMatrix> cov;
  bool all_stop = true;
};

bool RanksBefore(const Node& a, const Node& b) {
  if (a.info != b.info) return a.info > b.info;
  return a.path < b.path;
}

bool IsPsd(const BlockMatrix& m) {
  Eigen::SelfAdjointEigenSolver<BlockMatrix> eig(m, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return eig.eigenvalues().minCoeff() >= -1e-12 * scale;
}

// True when `kept` makes `node` redundant.
bool Dominates(const Node& kept, const Node& node, const PruneParams& params) {
  const double dx = kept.state.x - node.state.x;
  const double dy = kept.state.y - node.state.y;
  if (!(dx * dx + dy * dy < params.delta * params.delta)) return false;
  for (size_t b = 0; b < kept.cov.size(); ++b) {
    const int d = static_cast<int>(kept.cov[b].rows());
    const BlockMatrix slack =
        node.cov[b] + params.epsilon * BlockMatrix::Identity(d, d) -
        kept.cov[b];
    if (!IsPsd(slack)) return false;
  }
  return true;
}

// Advances one node by one primitive; std::nullopt if it leaves the arena.
std::optional<Node> Expand(const Node& parent, int primitive, int step,
                           const SearchProblem& problem,
                           const OracleContext& ctx,
                           std::span<const Eigen::VectorXd> means) {
  Node child;
  child.state = StepUnicycle(parent.state, problem.primitives[primitive],
                             problem.tau);
  if (problem.arena.has_value() &&
      !problem.arena->Contains(child.state.x, child.state.y)) {
    return std::nullopt;
  }
  const MotionPrimitive& u = problem.primitives[primitive];
  child.path = parent.path;
  child.path.push_back(primitive);
  child.all_stop = parent.all_stop && u.nu == 0.0 && u.omega == 0.0;
  child.info = parent.info;
  child.cov.resize(parent.cov.size());
  const TargetModel& targets = ctx.targets;
  for (int b = 0; b < targets.num_blocks(); ++b) {
    const TargetBlock& blk = targets.block(b);
    BlockMatrix sigma = blk.transition * parent.cov[b] *
                            blk.transition.transpose() +
                        blk.process_noise;
    sigma = 0.5 * (sigma + sigma.transpose());
    if (blk.has_position) {
      Eigen::Matrix2d info = Eigen::Matrix2d::Zero();
      try {
        info = PositionInformation(child.state, problem.sensor,
                                   means[step].segment<2>(targets.offset(b)));
      } catch (const DegenerateGeometryError&) {
      }
      if (!info.isZero(0.0)) {
        const int d = blk.dim();
        Eigen::LLT<BlockMatrix> llt(sigma);
        if (llt.info() != Eigen::Success) {
          throw NumericalError("covariance is not positive definite");
        }
        const BlockMatrix l = llt.matrixL();
        BlockMatrix m = BlockMatrix::Zero(d, d);
        m.topLeftCorner<2, 2>() = info;
        const BlockMatrix s = BlockMatrix::Identity(d, d) +
                              l.transpose() * m * l;
        Eigen::LLT<BlockMatrix> s_llt(0.5 * (s + s.transpose()));
        const BlockMatrix ls = s_llt.matrixL();
        for (int i = 0; i < d; ++i) child.info += std::log(ls(i, i));
        const BlockMatrix x = s_llt.solve(BlockMatrix(l.transpose()));
        sigma = l * x;
        sigma = 0.5 * (sigma + sigma.transpose());
      }
    }
    child.cov[b] = sigma;
  }
  return child;
}

}  // namespace

std::vector<CandidateTrajectory> GenerateCandidates(
    const SearchProblem& problem, const OracleContext& ctx,
    std::span<const Eigen::VectorXd> predicted_means,
    const PruneParams& params) {
  if (params.epsilon < 0.0 || params.delta < 0.0 || params.cap < 1) {
    throw ConfigError("prune parameters must satisfy epsilon, delta >= 0, "
                      "cap >= 1");
  }
  if (problem.primitives.empty()) {
    throw ConfigError("robot has no motion primitives");
  }
  if (!problem.energy) throw ConfigError("robot has no energy model");
  const int horizon = ctx.horizon;
  if (static_cast<int>(predicted_means.size()) < horizon + 1) {
    throw ConfigError("not enough predicted target means for the horizon");
  }

  Node root;
  root.state = problem.initial;
  root.cov = ctx.prior_cov;
  std::vector<Node> frontier = {root};
  for (int k = 1; k <= horizon; ++k) {
    std::vector<Node> children;
    children.reserve(frontier.size() * problem.primitives.size());
    for (const Node& parent : frontier) {
      for (int p = 0; p < static_cast<int>(problem.primitives.size()); ++p) {
        std::optional<Node> child =
            Expand(parent, p, k, problem, ctx, predicted_means);
        if (child.has_value()) children.push_back(std::move(*child));
      }
    }
    std::sort(children.begin(), children.end(), RanksBefore);
    std::vector<Node> kept;
    for (Node& node : children) {
      if (!node.all_stop) {
        if (params.max_nodes_per_depth > 0 &&
            static_cast<int>(kept.size()) >= params.max_nodes_per_depth) {
          continue;
        }
        bool dominated = false;
        if (params.delta > 0.0) {
          for (const Node& other : kept) {
            if (Dominates(other, node, params)) {
              dominated = true;
              break;
            }
          }
        }
        if (dominated) continue;
      }
      kept.push_back(std::move(node));
    }
    frontier = std::move(kept);
  }

  struct Leaf {
    CandidateTrajectory candidate;
    std::vector<int> path;
    bool all_stop;
  };
  std::vector<Leaf> leaves;
  leaves.reserve(frontier.size());
  for (const Node& node : frontier) {
    Leaf leaf;
    leaf.path = node.path;
    leaf.all_stop = node.all_stop;
    CandidateTrajectory& c = leaf.candidate;
    c.states.push_back(problem.initial);
    for (int p : node.path) {
      c.controls.push_back(problem.primitives[p]);
      c.states.push_back(
          StepUnicycle(c.states.back(), c.controls.back(), problem.tau));
    }
    c.information = TrajectoryInformation(c.states, problem.sensor,
                                          ctx.targets, predicted_means);
    c.energy = problem.energy(c.controls, c.states);
    const CandidateTrajectory* self = &c;
    c.standalone_gain =
        MutualInformation(ctx, std::span<const CandidateTrajectory* const>(
                                   &self, 1)) -
        c.energy;
    leaves.push_back(std::move(leaf));
  }
  std::sort(leaves.begin(), leaves.end(), [](const Leaf& a, const Leaf& b) {
    if (a.candidate.standalone_gain != b.candidate.standalone_gain) {
      return a.candidate.standalone_gain > b.candidate.standalone_gain;
    }
    return a.path < b.path;
  });
  if (static_cast<int>(leaves.size()) > params.cap) {
    auto stop = std::find_if(leaves.begin(), leaves.end(),
                             [](const Leaf& l) { return l.all_stop; });
    const bool keep_stop = params.cap >= 2 && stop != leaves.end() &&
                           stop - leaves.begin() >= params.cap;
    if (keep_stop) std::iter_swap(leaves.begin() + params.cap - 1, stop);
    leaves.resize(params.cap);
  }

  std::vector<CandidateTrajectory> out;
  out.reserve(leaves.size());
  for (Leaf& leaf : leaves) {
    leaf.candidate.id = {problem.robot, static_cast<int>(out.size())};
    out.push_back(std::move(leaf.candidate));
  }
  return out;
}

}  // namespace infogather
