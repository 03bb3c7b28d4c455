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


#include "infogather/planner.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "infogather/errors.h"

namespace infogather {
namespace {

constexpr int64_t kMaxAcceptedOperations = 10'000'000;

bool HoldsSlot(std::span<const TrajectoryId> set, int robot,
               std::optional<TrajectoryId> skip = std::nullopt) {
  for (const TrajectoryId& id : set) {
    if (id.robot == robot && (!skip.has_value() || id != *skip)) return true;
  }
  return false;
}

std::vector<TrajectoryId> Without(std::span<const TrajectoryId> set,
                                  const TrajectoryId& d) {
  std::vector<TrajectoryId> out;
  out.reserve(set.size());
  for (const TrajectoryId& id : set) {
    if (id != d) out.push_back(id);
  }
  return out;
}

std::vector<TrajectoryId> With(std::span<const TrajectoryId> set,
                               const TrajectoryId& a) {
  std::vector<TrajectoryId> out(set.begin(), set.end());
  out.insert(std::upper_bound(out.begin(), out.end(), a), a);
  return out;
}

std::vector<TrajectoryId> Apply(std::span<const TrajectoryId> set,
                                const Proposal& p) {
  std::vector<TrajectoryId> out(set.begin(), set.end());
  if (p.del.has_value()) out = Without(out, *p.del);
  if (p.add.has_value()) out = With(out, *p.add);
  return out;
}

// Upper bound on g over independent sets from g(S) <= g({}) +
// sum_{a in S} g(a|{}), given g({a_i*}) per robot.
double ValueUpperBound(double offset, std::span<const double> best_values) {
  double ub = offset;
  for (double v : best_values) ub += std::max(0.0, v - offset);
  return ub * (1.0 + 1e-9) + 1e-12;
}

enum class Phase { kInit, kWarm, kFull, kDone };

// Everything one round of local search tracks, shared by the centralized and
// distributed drivers so both make identical decisions.
struct RoundState {
  std::vector<TrajectoryId> set;
  double value = 0.0;
  int64_t n = 0;
  int64_t accepted = 0;
  int64_t exchanges = 0;
  int64_t bound = 0;
  double alpha = 1.0;

  // Applies the resolved proposal. Returns false for the sentinel.
  bool Accept(const Proposal& p, const PartitionMatroid& matroid) {
    if (p.IsSentinel()) return false;
    std::vector<TrajectoryId> next = Apply(set, p);
    if (!matroid.IsIndependent(next)) {
      throw std::logic_error("accepted proposal breaks independence");
    }
    if (!(p.new_value >= GrowthFactor(alpha, n) * value &&
          p.new_value > value)) {
      throw std::logic_error("accepted proposal does not clear the threshold");
    }
    if (++accepted > bound) {
      throw NumericalError("local search exceeded its accepted-operation bound");
    }
    set = std::move(next);
    value = p.new_value;
    return true;
  }
};

Proposal RobotProposal(Phase phase, const RoundState& state, int robot,
                       std::span<const TrajectoryId> sorted, double alpha,
                       const Oracle& oracle, bool lazy,
                       FindProposalStats* stats) {
  if (phase == Phase::kWarm) {
    return FindGreedyAddition(state.set, robot, sorted, alpha, state.n, oracle,
                              lazy, stats);
  }
  return FindProposal(state.set, robot, sorted, alpha, state.n, oracle, lazy,
                      stats);
}

// Picks the initial singleton from each robot's (best id, g({best})) report.
void InitializeRound(std::span<const std::optional<TrajectoryId>> best,
                     std::span<const double> best_values, double offset,
                     RoundState* state) {
  int chosen = -1;
  for (int i = 0; i < static_cast<int>(best.size()); ++i) {
    if (!best[i].has_value()) continue;
    if (chosen < 0 || best_values[i] > best_values[chosen]) chosen = i;
  }
  std::vector<double> reported;
  for (int i = 0; i < static_cast<int>(best.size()); ++i) {
    if (best[i].has_value()) reported.push_back(best_values[i]);
  }
  state->set.clear();
  state->value = offset;
  if (chosen >= 0) {
    state->set = {*best[chosen]};
    state->value = best_values[chosen];
  }
  state->bound = AcceptedOperationBound(state->alpha, state->n, state->value,
                                        ValueUpperBound(offset, reported));
}

}  // namespace

PartitionMatroid::PartitionMatroid(const GroundSet& ground) {
  for (const auto& robot : ground) {
    sizes_.push_back(static_cast<int>(robot.size()));
  }
}

bool PartitionMatroid::IsIndependent(std::span<const TrajectoryId> set) const {
  std::vector<int> used(sizes_.size(), 0);
  for (const TrajectoryId& id : set) {
    if (id.robot < 0 || id.robot >= num_robots() || id.index < 0 ||
        id.index >= sizes_[id.robot]) {
      throw std::out_of_range("unknown trajectory id (" +
                              std::to_string(id.robot) + ", " +
                              std::to_string(id.index) + ")");
    }
    if (++used[id.robot] > 1) return false;
  }
  return true;
}

double GrowthFactor(double alpha, int64_t n) {
  const double nn = static_cast<double>(std::max<int64_t>(n, 1));
  return 1.0 + alpha / (nn * nn * nn * nn);
}

std::vector<TrajectoryId> SortByStandaloneGain(
    const GroundSet& ground, int robot,
    std::span<const TrajectoryId> excluded) {
  std::vector<TrajectoryId> ids;
  const auto& cands = ground[robot];
  for (int j = 0; j < static_cast<int>(cands.size()); ++j) {
    const TrajectoryId id{robot, j};
    if (std::find(excluded.begin(), excluded.end(), id) != excluded.end()) {
      continue;
    }
    ids.push_back(id);
  }
  std::stable_sort(ids.begin(), ids.end(),
                   [&](const TrajectoryId& a, const TrajectoryId& b) {
                     return cands[a.index].standalone_gain >
                            cands[b.index].standalone_gain;
                   });
  return ids;
}

Proposal FindProposal(std::span<const TrajectoryId> set, int robot,
                      std::span<const TrajectoryId> sorted_candidates,
                      double alpha, int64_t n, const Oracle& oracle, bool lazy,
                      FindProposalStats* stats) {
  FindProposalStats local;
  const double g_set = oracle.Value(set);
  const double threshold = GrowthFactor(alpha, n) * g_set;
  Proposal result = Proposal::Sentinel(robot);
  for (size_t k = 0; k <= set.size(); ++k) {
    const bool nop = k == set.size();
    std::optional<TrajectoryId> d;
    std::vector<TrajectoryId> reduced(set.begin(), set.end());
    double g_reduced = g_set;
    if (!nop) {
      d = set[k];
      reduced = Without(set, *d);
      g_reduced = oracle.Value(reduced);
    }
    const double deficiency = threshold - g_reduced;
    if (!nop && g_reduced >= threshold && g_reduced > g_set) {
      result = {d, std::nullopt, robot, g_reduced};
      break;
    }
    if (HoldsSlot(reduced, robot)) continue;
    bool found = false;
    for (const TrajectoryId& a : sorted_candidates) {
      ++local.comparisons;
      if (lazy && oracle.Candidate(a).standalone_gain < deficiency) break;
      if (d.has_value() && a == *d) continue;
      ++local.marginal_evaluations;
      const double v = oracle.Value(With(reduced, a));
      if (v >= threshold && v > g_set) {
        result = {d, a, robot, v};
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (stats != nullptr) *stats += local;
  return result;
}

Proposal FindGreedyAddition(std::span<const TrajectoryId> set, int robot,
                            std::span<const TrajectoryId> sorted_candidates,
                            double alpha, int64_t n, const Oracle& oracle,
                            bool lazy, FindProposalStats* stats) {
  if (HoldsSlot(set, robot)) return Proposal::Sentinel(robot);
  FindProposalStats local;
  const double g_set = oracle.Value(set);
  const double threshold = GrowthFactor(alpha, n) * g_set;
  const double deficiency = threshold - g_set;
  std::optional<TrajectoryId> best;
  double best_value = 0.0;
  for (const TrajectoryId& a : sorted_candidates) {
    ++local.comparisons;
    if (lazy) {
      const double gain = oracle.Candidate(a).standalone_gain;
      const double needed =
          best.has_value() ? std::max(deficiency, best_value - g_set)
                           : deficiency;
      if (gain < needed) break;
    }
    ++local.marginal_evaluations;
    const double v = oracle.Value(With(set, a));
    if (v >= threshold && v > g_set && (!best.has_value() || v > best_value)) {
      best = a;
      best_value = v;
    }
  }
  if (stats != nullptr) *stats += local;
  if (!best.has_value()) return Proposal::Sentinel(robot);
  return {std::nullopt, best, robot, best_value};
}

int64_t AcceptedOperationBound(double alpha, int64_t n, double initial_value,
                               double upper_bound) {
  if (!(initial_value > 0.0)) return kMaxAcceptedOperations;
  if (upper_bound <= initial_value) return 1;
  const double steps = std::log(upper_bound / initial_value) /
                       std::log1p(alpha / std::pow(static_cast<double>(
                                                       std::max<int64_t>(n, 1)),
                                                   4));
  if (!(steps < static_cast<double>(kMaxAcceptedOperations))) {
    return kMaxAcceptedOperations;
  }
  return static_cast<int64_t>(std::ceil(steps)) + 1;
}

uint64_t HashSolution(std::span<const TrajectoryId> set) {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (const TrajectoryId& id : set) {
    mix(static_cast<uint32_t>(id.robot));
    mix(static_cast<uint32_t>(id.index));
  }
  return h;
}

PlanResult Cls(const Oracle& oracle, const PlannerOptions& options) {
  if (!(options.alpha > 0.0)) throw ConfigError("alpha must be positive");
  const GroundSet& ground = oracle.ground();
  const int num_robots = static_cast<int>(ground.size());
  const PartitionMatroid matroid(ground);
  const int64_t calls0 = oracle.calls();
  const int64_t evals0 = oracle.evaluations();

  PlanResult result;
  std::vector<TrajectoryId> excluded;
  for (int round = 1; round <= 2; ++round) {
    std::vector<std::vector<TrajectoryId>> sorted(num_robots);
    std::vector<std::optional<TrajectoryId>> best(num_robots);
    std::vector<double> best_values(num_robots, 0.0);
    RoundState state;
    state.alpha = options.alpha;
    for (int i = 0; i < num_robots; ++i) {
      sorted[i] = SortByStandaloneGain(ground, i, excluded);
      state.n += static_cast<int64_t>(sorted[i].size());
      if (!sorted[i].empty()) {
        best[i] = sorted[i].front();
        best_values[i] = oracle.Value(std::span(&*best[i], 1));
      }
    }
    InitializeRound(best, best_values, oracle.offset(), &state);

    Phase phase = options.warm_start ? Phase::kWarm : Phase::kFull;
    while (phase != Phase::kDone) {
      std::vector<Proposal> proposals;
      proposals.reserve(num_robots);
      for (int i = 0; i < num_robots; ++i) {
        proposals.push_back(RobotProposal(phase, state, i, sorted[i],
                                          options.alpha, oracle, options.lazy,
                                          &result.stats));
      }
      ++state.exchanges;
      if (!state.Accept(ResolveRound(proposals), matroid)) {
        phase = phase == Phase::kWarm ? Phase::kFull : Phase::kDone;
      }
    }

    RoundResult rr;
    rr.set = state.set;
    rr.value = state.value;
    rr.n = state.n;
    rr.excluded = excluded;
    rr.accepted = state.accepted;
    rr.exchanges = state.exchanges;
    result.exchange_rounds += state.exchanges;
    excluded.insert(excluded.end(), state.set.begin(), state.set.end());
    result.rounds.push_back(std::move(rr));
  }
  result.best_round =
      result.rounds[1].value > result.rounds[0].value ? 2 : 1;
  result.solution = result.rounds[result.best_round - 1].set;
  result.value = result.rounds[result.best_round - 1].value;
  result.oracle_calls = oracle.calls() - calls0;
  result.oracle_evaluations = oracle.evaluations() - evals0;
  return result;
}

namespace {

// One robot's side of the distributed protocol.
class DlsAgent {
 public:
  DlsAgent(int id, int num_robots, std::unique_ptr<Oracle> oracle,
           const PlannerOptions& options, Network* network)
      : id_(id),
        num_robots_(num_robots),
        oracle_(std::move(oracle)),
        matroid_(oracle_->ground()),
        options_(options),
        network_(network) {}

  void Start() {
    BeginRound();
    Advance();
  }

  void Deliver(const NetMessage& msg) {
    if (msg.kind == MessageKind::kInit) {
      Inits(msg.round)[msg.sender] = msg.init;
    } else {
      Proposals(msg.exchange)[msg.sender] = {msg.proposal, msg.state_hash};
    }
    Advance();
  }

  bool done() const { return phase_ == Phase::kDone; }
  const std::vector<RoundResult>& rounds() const { return rounds_; }
  const Oracle& oracle() const { return *oracle_; }
  const FindProposalStats& stats() const { return stats_; }

 private:
  using InitSlots = std::vector<std::optional<InitPayload>>;
  using ProposalSlots =
      std::vector<std::optional<std::pair<Proposal, uint64_t>>>;

  InitSlots& Inits(int round) {
    InitSlots& slots = inits_[round];
    if (slots.empty()) slots.resize(num_robots_);
    return slots;
  }
  ProposalSlots& Proposals(int64_t exchange) {
    ProposalSlots& slots = proposals_[exchange];
    if (slots.empty()) slots.resize(num_robots_);
    return slots;
  }

  void BeginRound() {
    sorted_ = SortByStandaloneGain(oracle_->ground(), id_, excluded_);
    InitPayload init;
    init.ground_size = static_cast<int64_t>(sorted_.size());
    if (!sorted_.empty()) {
      init.best = sorted_.front();
      init.best_value = oracle_->Value(std::span(&*init.best, 1));
    }
    Inits(round_)[id_] = init;
    NetMessage msg;
    msg.kind = MessageKind::kInit;
    msg.round = round_;
    msg.init = init;
    network_->Broadcast(id_, msg);
    phase_ = Phase::kInit;
  }

  void SubmitProposal() {
    const Proposal p = RobotProposal(phase_, state_, id_, sorted_,
                                     options_.alpha, *oracle_, options_.lazy,
                                     &stats_);
    const uint64_t hash = HashSolution(state_.set);
    Proposals(exchange_)[id_] = {p, hash};
    NetMessage msg;
    msg.kind = MessageKind::kProposal;
    msg.round = round_;
    msg.exchange = exchange_;
    msg.state_hash = hash;
    msg.proposal = p;
    network_->Broadcast(id_, msg);
  }

  void FinishRound() {
    RoundResult rr;
    rr.set = state_.set;
    rr.value = state_.value;
    rr.n = state_.n;
    rr.excluded = excluded_;
    rr.accepted = state_.accepted;
    rr.exchanges = state_.exchanges;
    rounds_.push_back(std::move(rr));
    excluded_.insert(excluded_.end(), state_.set.begin(), state_.set.end());
    if (round_ == 2) {
      phase_ = Phase::kDone;
      return;
    }
    round_ = 2;
    BeginRound();
  }

  void Advance() {
    while (true) {
      if (phase_ == Phase::kDone) return;
      if (phase_ == Phase::kInit) {
        InitSlots& slots = Inits(round_);
        if (std::any_of(slots.begin(), slots.end(),
                        [](const auto& s) { return !s.has_value(); })) {
          return;
        }
        std::vector<std::optional<TrajectoryId>> best(num_robots_);
        std::vector<double> values(num_robots_, 0.0);
        state_ = RoundState();
        state_.alpha = options_.alpha;
        for (int i = 0; i < num_robots_; ++i) {
          state_.n += slots[i]->ground_size;
          best[i] = slots[i]->best;
          values[i] = slots[i]->best_value;
        }
        inits_.erase(round_);
        InitializeRound(best, values, oracle_->offset(), &state_);
        phase_ = options_.warm_start ? Phase::kWarm : Phase::kFull;
        SubmitProposal();
        continue;
      }
      auto it = proposals_.find(exchange_);
      if (it == proposals_.end() ||
          std::any_of(it->second.begin(), it->second.end(),
                      [](const auto& s) { return !s.has_value(); })) {
        return;
      }
      const uint64_t own_hash = HashSolution(state_.set);
      std::vector<Proposal> received;
      for (const auto& slot : it->second) {
        if (slot->second != own_hash) {
          throw NetworkError("robot " + std::to_string(slot->first.proposer) +
                             " holds a different solution set");
        }
        received.push_back(slot->first);
      }
      proposals_.erase(it);
      ++exchange_;
      ++state_.exchanges;
      if (state_.Accept(ResolveRound(received), matroid_)) {
        SubmitProposal();
      } else if (phase_ == Phase::kWarm) {
        phase_ = Phase::kFull;
        SubmitProposal();
      } else {
        FinishRound();
      }
    }
  }

  int id_;
  int num_robots_;
  std::unique_ptr<Oracle> oracle_;
  PartitionMatroid matroid_;
  PlannerOptions options_;
  Network* network_;

  Phase phase_ = Phase::kInit;
  int round_ = 1;
  int64_t exchange_ = 0;
  RoundState state_;
  std::vector<TrajectoryId> sorted_;
  std::vector<TrajectoryId> excluded_;
  std::map<int, InitSlots> inits_;
  std::map<int64_t, ProposalSlots> proposals_;
  std::vector<RoundResult> rounds_;
  FindProposalStats stats_;
};

}  // namespace

PlanResult Dls(std::shared_ptr<const OracleContext> ctx,
               std::shared_ptr<const GroundSet> ground,
               const PlannerOptions& options,
               const DlsNetworkOptions& network_options) {
  if (!(options.alpha > 0.0)) throw ConfigError("alpha must be positive");
  const int num_robots = static_cast<int>(ground->size());
  if (num_robots < 1) throw ConfigError("planner needs at least one robot");
  Network network(num_robots, network_options.delay, network_options.seed);
  for (int i = 0; i < num_robots; ++i) network.Register(i);
  std::vector<DlsAgent> agents;
  agents.reserve(num_robots);
  for (int i = 0; i < num_robots; ++i) {
    agents.emplace_back(i, num_robots, std::make_unique<Oracle>(ctx, ground),
                        options, &network);
  }
  for (DlsAgent& agent : agents) agent.Start();
  auto all_done = [&agents] {
    return std::all_of(agents.begin(), agents.end(),
                       [](const DlsAgent& a) { return a.done(); });
  };
  while (!all_done()) {
    std::optional<NetMessage> msg = network.NextDelivery();
    if (!msg.has_value()) {
      throw NetworkError("deadlock: no messages in flight while robots wait");
    }
    if (network.now() > network_options.timeout) {
      throw NetworkError("distributed planner exceeded its logical timeout");
    }
    agents[msg->receiver].Deliver(*msg);
  }

  PlanResult result;
  result.rounds = agents[0].rounds();
  for (const DlsAgent& agent : agents) {
    for (int r = 0; r < 2; ++r) {
      if (HashSolution(agent.rounds()[r].set) !=
          HashSolution(result.rounds[r].set)) {
        throw NetworkError("robots terminated with different solutions");
      }
    }
    result.oracle_calls += agent.oracle().calls();
    result.oracle_evaluations += agent.oracle().evaluations();
    result.stats += agent.stats();
  }
  result.best_round =
      result.rounds[1].value > result.rounds[0].value ? 2 : 1;
  result.solution = result.rounds[result.best_round - 1].set;
  result.value = result.rounds[result.best_round - 1].value;
  result.exchange_rounds = result.rounds[0].exchanges + result.rounds[1].exchanges;
  result.messages = network.messages_sent();
  result.network_time = network.now();
  return result;
}

std::vector<int> CdOrder(CdOrdering ordering, std::span<const double> weights) {
  std::vector<int> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  switch (ordering) {
    case CdOrdering::kIndex:
      break;
    case CdOrdering::kReverseIndex:
      std::reverse(order.begin(), order.end());
      break;
    case CdOrdering::kWeightAscending:
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return weights[a] < weights[b]; });
      break;
    case CdOrdering::kWeightDescending:
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return weights[a] > weights[b]; });
      break;
  }
  return order;
}

PlanResult CoordinateDescent(const Oracle& oracle, std::span<const int> order) {
  const GroundSet& ground = oracle.ground();
  const int64_t calls0 = oracle.calls();
  const int64_t evals0 = oracle.evaluations();
  std::vector<TrajectoryId> set;
  double value = oracle.Value(set);
  std::vector<char> seen(ground.size(), 0);
  for (int robot : order) {
    if (robot < 0 || robot >= static_cast<int>(ground.size()) || seen[robot]) {
      throw ConfigError("coordinate-descent order is not a permutation");
    }
    seen[robot] = 1;
    std::optional<TrajectoryId> best;
    double best_value = 0.0;
    for (const TrajectoryId& a : SortByStandaloneGain(ground, robot)) {
      if (best.has_value() &&
          value + oracle.Candidate(a).standalone_gain < best_value) {
        break;
      }
      const double v = oracle.Value(With(set, a));
      if (!best.has_value() || v > best_value ||
          (v == best_value && a.index < best->index)) {
        best = a;
        best_value = v;
      }
    }
    if (best.has_value() && best_value >= value) {
      set = With(set, *best);
      value = best_value;
    }
  }
  PlanResult result;
  RoundResult rr;
  rr.set = set;
  rr.value = value;
  rr.n = 0;
  for (const auto& r : ground) rr.n += static_cast<int64_t>(r.size());
  result.rounds.push_back(rr);
  result.solution = set;
  result.value = value;
  result.handoffs = std::max<int64_t>(0, static_cast<int64_t>(order.size()) - 1);
  result.oracle_calls = oracle.calls() - calls0;
  result.oracle_evaluations = oracle.evaluations() - evals0;
  return result;
}

}  // namespace infogather
