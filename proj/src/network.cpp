#include "dcadmm/network.hpp"

#include <stdexcept>

namespace dcadmm {

Network::Network(const DirectedGraph& g)
    : g_(&g), messages_sent_(g.n(), 0), rounds_(g.n(), 0) {}

RoundMailbox Network::exchange(const std::vector<Vec>& payloads) {
  const int n = g_->n();
  if (static_cast<int>(payloads.size()) != n)
    throw std::invalid_argument("exchange: one payload per agent required");
  const std::size_t dim = payloads[0].size();
  for (const auto& p : payloads)
    if (p.size() != dim)
      throw std::invalid_argument("exchange: payload dimension mismatch across agents");

  RoundMailbox mb;
  mb.round_index = round_index_;
  mb.inbox.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& senders = g_->in_neighbors(i);
    mb.inbox[i].reserve(senders.size() + 1);
    bool self_placed = false;
    for (int j : senders) {
      if (!self_placed && i < j) {
        mb.inbox[i].push_back({i, payloads[i]});
        self_placed = true;
      }
      mb.inbox[i].push_back({j, payloads[j]});
    }
    if (!self_placed) mb.inbox[i].push_back({i, payloads[i]});
  }

  std::int64_t moved = 0;
  for (int i = 0; i < n; ++i) {
    messages_sent_[i] += g_->out_degree(i);
    rounds_[i] += 1;
    moved += g_->out_degree(i);
  }
  total_messages_ += moved;
  ++round_index_;
  if (trace_enabled_) trace_.emplace_back(round_index_, moved);
  return mb;
}

CommunicationReport Network::communication_report() const {
  CommunicationReport r;
  r.rounds_per_agent = rounds_;
  r.messages_per_agent = messages_sent_;
  r.total_rounds = round_index_;
  for (auto m : messages_sent_) r.total_messages += m;
  return r;
}

}  // namespace dcadmm
