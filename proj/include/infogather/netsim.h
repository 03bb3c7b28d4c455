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


// Deterministic discrete-event message layer used by the distributed planner,
// and the full-team proposal resolution rule.

#ifndef INFOGATHER_NETSIM_H_
#define INFOGATHER_NETSIM_H_

#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <vector>

#include "infogather/candidate.h"

namespace infogather {

// (delete, add) change to the team solution; an empty optional is NOP.
struct Proposal {
  std::optional<TrajectoryId> del;
  std::optional<TrajectoryId> add;
  int proposer = 0;
  double new_value = 0.0;  // g after applying

  bool IsSentinel() const { return !del.has_value() && !add.has_value(); }
  static Proposal Sentinel(int proposer) {
    Proposal p;
    p.proposer = proposer;
    return p;
  }
};

// Highest new_value among non-sentinels, ties to the lower proposer index;
// the sentinel iff every proposal is one. Throws std::invalid_argument on an
// empty span.
Proposal ResolveRound(std::span<const Proposal> proposals);

enum class DelayKind { kConstant, kUniform, kNormal };

// Delays in seconds. kConstant uses `a`; kUniform draws from [a, b];
// kNormal draws N(a, b^2) clipped at 0.
struct DelayModel {
  DelayKind kind = DelayKind::kConstant;
  double a = 0.0;
  double b = 0.0;

  double Sample(std::mt19937_64& rng) const;
  double Mean() const;
};

enum class MessageKind { kInit, kProposal };

struct InitPayload {
  int64_t ground_size = 0;
  std::optional<TrajectoryId> best;
  double best_value = 0.0;
};

struct NetMessage {
  int sender = 0;
  int receiver = 0;
  MessageKind kind = MessageKind::kProposal;
  int round = 1;          // local-search round
  int64_t exchange = 0;   // proposal exchange index within the run
  uint64_t state_hash = 0;  // sender's solution-set hash before the exchange
  Proposal proposal;
  InitPayload init;
  double send_time = 0.0;
  double deliver_time = 0.0;
};

// Point-to-point FIFO channels between registered robots with sampled delays.
// Deliveries are ordered by (deliver_time, enqueue order), so a run is fully
// determined by the seed.
class Network {
 public:
  Network(int num_robots, DelayModel delay, uint64_t seed);

  void Register(int robot);
  bool registered(int robot) const;

  // Enqueues a copy to every other registered robot. Throws NetworkError for
  // an unregistered sender.
  void Broadcast(int from, NetMessage msg);

  // Pops the next delivery and advances the clock to its deliver_time.
  std::optional<NetMessage> NextDelivery();

  double now() const { return now_; }
  int64_t messages_sent() const { return messages_sent_; }
  bool empty() const { return queue_.empty(); }

 private:
  struct Pending {
    double deliver_time;
    uint64_t seq;
    NetMessage msg;
  };
  struct Later {
    bool operator()(const Pending& x, const Pending& y) const {
      if (x.deliver_time != y.deliver_time) {
        return x.deliver_time > y.deliver_time;
      }
      return x.seq > y.seq;
    }
  };

  int num_robots_;
  DelayModel delay_;
  std::mt19937_64 rng_;
  std::vector<char> registered_;
  std::vector<double> channel_tail_;  // last deliver time per (from, to)
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  uint64_t seq_ = 0;
  double now_ = 0.0;
  int64_t messages_sent_ = 0;
};

}  // namespace infogather

#endif  // INFOGATHER_NETSIM_H_
