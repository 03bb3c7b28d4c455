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


#ifndef INFOGATHER_CANDIDATE_H_
#define INFOGATHER_CANDIDATE_H_

#include <compare>
#include <vector>

#include <Eigen/Dense>

#include "infogather/world.h"

namespace infogather {

struct TrajectoryId {
  int robot = 0;
  int index = 0;

  friend auto operator<=>(const TrajectoryId&, const TrajectoryId&) = default;
};

// Measurement information a trajectory contributes to the position of one
// target block at one planning step (1..K).
struct BlockInformation {
  int step = 0;
  int block = 0;
  Eigen::Matrix2d info = Eigen::Matrix2d::Zero();
};

// One element of the planner's ground set.
struct CandidateTrajectory {
  TrajectoryId id;
  std::vector<MotionPrimitive> controls;  // K entries
  std::vector<UnicycleState> states;      // K + 1 entries
  // Non-zero entries only, sorted by (step, block).
  std::vector<BlockInformation> information;
  double energy = 0.0;           // m_i * C_i(sigma)
  double standalone_gain = 0.0;  // g({a}) - g({}) = MI({a}) - energy
};

// Candidates per robot; candidate `j` of robot `i` has id {i, j}.
using GroundSet = std::vector<std::vector<CandidateTrajectory>>;

}  // namespace infogather

#endif  // INFOGATHER_CANDIDATE_H_
