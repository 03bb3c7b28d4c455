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


#include "infogather/netsim.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "infogather/errors.h"

namespace infogather {

Proposal ResolveRound(std::span<const Proposal> proposals) {
  if (proposals.empty()) {
    throw std::invalid_argument("ResolveRound needs at least one proposal");
  }
  const Proposal* best = nullptr;
  for (const Proposal& p : proposals) {
    if (p.IsSentinel()) continue;
    if (best == nullptr || p.new_value > best->new_value ||
        (p.new_value == best->new_value && p.proposer < best->proposer)) {
      best = &p;
    }
  }
  if (best == nullptr) {
    int lowest = proposals.front().proposer;
    for (const Proposal& p : proposals) lowest = std::min(lowest, p.proposer);
    return Proposal::Sentinel(lowest);
  }
  return *best;
}

double DelayModel::Sample(std::mt19937_64& rng) const {
  switch (kind) {
    case DelayKind::kConstant:
      return std::max(0.0, a);
    case DelayKind::kUniform:
      return std::max(0.0, std::uniform_real_distribution<double>(a, b)(rng));
    case DelayKind::kNormal:
      return std::max(0.0, std::normal_distribution<double>(a, b)(rng));
  }
  return 0.0;
}

double DelayModel::Mean() const {
  switch (kind) {
    case DelayKind::kConstant:
      return a;
    case DelayKind::kUniform:
      return 0.5 * (a + b);
    case DelayKind::kNormal:
      return a;
  }
  return 0.0;
}

Network::Network(int num_robots, DelayModel delay, uint64_t seed)
    : num_robots_(num_robots),
      delay_(delay),
      rng_(seed),
      registered_(num_robots, 0),
      channel_tail_(static_cast<size_t>(num_robots) * num_robots, 0.0) {
  if (num_robots < 1) throw ConfigError("network needs at least one robot");
  if (delay.kind == DelayKind::kUniform && delay.b < delay.a) {
    throw ConfigError("uniform delay needs lo <= hi");
  }
  if (delay.kind == DelayKind::kNormal && delay.b < 0.0) {
    throw ConfigError("normal delay needs a non-negative std");
  }
}

void Network::Register(int robot) {
  if (robot < 0 || robot >= num_robots_) {
    throw NetworkError("robot index " + std::to_string(robot) +
                       " outside the network");
  }
  registered_[robot] = 1;
}

bool Network::registered(int robot) const {
  return robot >= 0 && robot < num_robots_ && registered_[robot];
}

void Network::Broadcast(int from, NetMessage msg) {
  if (!registered(from)) {
    throw NetworkError("unregistered sender " + std::to_string(from));
  }
  msg.sender = from;
  msg.send_time = now_;
  for (int to = 0; to < num_robots_; ++to) {
    if (to == from || !registered_[to]) continue;
    double& tail = channel_tail_[static_cast<size_t>(from) * num_robots_ + to];
    const double t = std::max(now_ + delay_.Sample(rng_), tail);
    tail = t;
    NetMessage copy = msg;
    copy.receiver = to;
    copy.deliver_time = t;
    queue_.push({t, seq_++, std::move(copy)});
    ++messages_sent_;
  }
}

std::optional<NetMessage> Network::NextDelivery() {
  if (queue_.empty()) return std::nullopt;
  Pending next = queue_.top();
  queue_.pop();
  now_ = next.deliver_time;
  return std::move(next.msg);
}

}  // namespace infogather
