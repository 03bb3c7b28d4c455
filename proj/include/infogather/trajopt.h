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


// Per-robot ground-set generation: breadth-first search over motion
// primitives with per-depth information/proximity dominance pruning.

#ifndef INFOGATHER_TRAJOPT_H_
#define INFOGATHER_TRAJOPT_H_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "infogather/candidate.h"
#include "infogather/estimation.h"
#include "infogather/world.h"

namespace infogather {

struct PruneParams {
  double epsilon = 0.0;  // covariance slack
  double delta = 0.0;    // m
  int cap = 800;         // candidates per robot
  // Beam limit on surviving nodes per depth; 0 disables it.
  int max_nodes_per_depth = 0;
};

// Weighted energy m_i * C_i of a rollout (K controls, K + 1 states).
using EnergyFunction = std::function<double(std::span<const MotionPrimitive>,
                                            std::span<const UnicycleState>)>;

struct SearchProblem {
  int robot = 0;
  UnicycleState initial;
  std::vector<MotionPrimitive> primitives;
  SensorModel sensor;
  double tau = 0.5;
  std::optional<Arena> arena;  // nodes leaving it are discarded
  EnergyFunction energy;
};

// Expands the primitive tree to depth ctx.horizon. At each depth nodes are
// ranked by accumulated information (ties: lexicographically smaller control
// sequence) and node j is dropped when a kept node i lies strictly within
// `delta` of it and Sigma_i <= Sigma_j + epsilon I for every target block.
// The all-stop sequence, when (0, 0) is a primitive, is never pruned and is
// kept by truncation whenever cap >= 2. Candidates come back sorted by
// descending standalone gain, with id.index equal to their position.
std::vector<CandidateTrajectory> GenerateCandidates(
    const SearchProblem& problem, const OracleContext& ctx,
    std::span<const Eigen::VectorXd> predicted_means,
    const PruneParams& params);

}  // namespace infogather

#endif  // INFOGATHER_TRAJOPT_H_
