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


// Partition-matroid local search (centralized and distributed) and the
// sequential coordinate-descent baseline.

#ifndef INFOGATHER_PLANNER_H_
#define INFOGATHER_PLANNER_H_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "infogather/candidate.h"
#include "infogather/estimation.h"
#include "infogather/netsim.h"

namespace infogather {

// At most one trajectory per robot.
class PartitionMatroid {
 public:
  explicit PartitionMatroid(std::vector<int> sizes) : sizes_(std::move(sizes)) {}
  explicit PartitionMatroid(const GroundSet& ground);

  // Throws std::out_of_range on an unknown id.
  bool IsIndependent(std::span<const TrajectoryId> set) const;

  int num_robots() const { return static_cast<int>(sizes_.size()); }
  int size(int robot) const { return sizes_[robot]; }

 private:
  std::vector<int> sizes_;
};

struct PlannerOptions {
  double alpha = 1.0;
  bool lazy = true;
  bool warm_start = true;
};

struct FindProposalStats {
  int64_t comparisons = 0;           // standalone-gain checks in the scan
  int64_t marginal_evaluations = 0;  // g(S^- + a) requests

  FindProposalStats& operator+=(const FindProposalStats& o) {
    comparisons += o.comparisons;
    marginal_evaluations += o.marginal_evaluations;
    return *this;
  }
};

// 1 + alpha / N^4.
double GrowthFactor(double alpha, int64_t n);

// Robot `robot`'s candidate ids sorted by descending standalone gain, ties to
// the lower index, skipping `excluded`.
std::vector<TrajectoryId> SortByStandaloneGain(
    const GroundSet& ground, int robot,
    std::span<const TrajectoryId> excluded = {});

// One robot's proposal for `set` (canonical order): deletions d in `set`
// order, then NOP; emits (d, NOP) when deleting alone clears the threshold,
// otherwise the first own candidate a with g(S - d + a) >= (1 + alpha/N^4)
// g(S) in sorted order. With `lazy`, the scan stops at the first candidate
// whose standalone gain is below the deficiency. Proposals must also strictly
// increase g.
Proposal FindProposal(std::span<const TrajectoryId> set, int robot,
                      std::span<const TrajectoryId> sorted_candidates,
                      double alpha, int64_t n, const Oracle& oracle, bool lazy,
                      FindProposalStats* stats);

// Warm-start proposal: the robot's best pure addition that clears the
// threshold, or the sentinel (also when the robot already holds a slot).
Proposal FindGreedyAddition(std::span<const TrajectoryId> set, int robot,
                            std::span<const TrajectoryId> sorted_candidates,
                            double alpha, int64_t n, const Oracle& oracle,
                            bool lazy, FindProposalStats* stats);

// Cap on accepted operations per round implied by geometric growth from
// `initial_value` up to `upper_bound`, clamped to 1e7.
int64_t AcceptedOperationBound(double alpha, int64_t n, double initial_value,
                               double upper_bound);

struct RoundResult {
  std::vector<TrajectoryId> set;  // canonical order
  double value = 0.0;
  int64_t n = 0;                  // ground-set size used for the threshold
  std::vector<TrajectoryId> excluded;  // removed from the ground set
  int64_t accepted = 0;
  int64_t exchanges = 0;
};

struct PlanResult {
  std::vector<TrajectoryId> solution;  // canonical order
  double value = 0.0;
  int best_round = 1;
  std::vector<RoundResult> rounds;
  int64_t oracle_calls = 0;
  int64_t oracle_evaluations = 0;
  int64_t exchange_rounds = 0;
  int64_t handoffs = 0;
  int64_t messages = 0;
  double network_time = 0.0;  // logical seconds spent in communication
  FindProposalStats stats;
};

// Centralized local search. Each exchange evaluates every robot's proposal on
// the shared set and applies the resolved one, so it follows exactly the
// same trajectory as Dls().
PlanResult Cls(const Oracle& oracle, const PlannerOptions& options);

// Distributed local search: one agent per robot with its own oracle instance,
// driven by `network` events. Throws NetworkError on a deadlock, a logical
// timeout or diverging solution copies.
struct DlsNetworkOptions {
  DelayModel delay;
  uint64_t seed = 0;
  double timeout = 1e6;  // logical seconds
};
PlanResult Dls(std::shared_ptr<const OracleContext> ctx,
               std::shared_ptr<const GroundSet> ground,
               const PlannerOptions& options,
               const DlsNetworkOptions& network);

enum class CdOrdering { kIndex, kReverseIndex, kWeightAscending,
                        kWeightDescending };

// Robot visiting order. Weight orderings break ties by index.
std::vector<int> CdOrder(CdOrdering ordering, std::span<const double> weights);

// Each robot in `order` adds its best candidate given its predecessors'
// choices, or nothing if every candidate lowers g.
PlanResult CoordinateDescent(const Oracle& oracle, std::span<const int> order);

// FNV-1a over the canonical id list.
uint64_t HashSolution(std::span<const TrajectoryId> set);

}  // namespace infogather

#endif  // INFOGATHER_PLANNER_H_
