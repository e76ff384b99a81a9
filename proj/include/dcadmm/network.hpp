#pragma once

#include <cstdint>
#include <vector>

#include "dcadmm/graph.hpp"
#include "dcadmm/linalg.hpp"

namespace dcadmm {

// One delivered payload: who sent it and what they sent.
struct MailboxEntry {
  int sender;
  Vec payload;
};

// Everything delivered in one synchronous round. inbox[i] holds exactly one
// entry per in-neighbor of i plus agent i's own payload, ascending by sender.
struct RoundMailbox {
  std::int64_t round_index = 0;
  std::vector<std::vector<MailboxEntry>> inbox;
};

struct CommunicationReport {
  std::vector<std::int64_t> rounds_per_agent;
  std::vector<std::int64_t> messages_per_agent;
  std::int64_t total_rounds = 0;
  std::int64_t total_messages = 0;
};

// Synchronous round-based exchange over a fixed directed graph. Delivery
// follows edge direction only; every round moves exactly one payload per
// edge. Deterministic: no drops, no delays, no reordering.
class Network {
 public:
  explicit Network(const DirectedGraph& g);

  // Uniform payload dimension across agents is required (dimension may vary
  // between rounds). Throws std::invalid_argument otherwise.
  RoundMailbox exchange(const std::vector<Vec>& payloads);

  CommunicationReport communication_report() const;
  std::int64_t rounds_elapsed() const { return round_index_; }
  std::int64_t total_messages() const { return total_messages_; }

  // Optional per-round trace: (round index, messages moved that round).
  void enable_round_trace() { trace_enabled_ = true; }
  const std::vector<std::pair<std::int64_t, std::int64_t>>& round_trace() const { return trace_; }

  const DirectedGraph& graph() const { return *g_; }

 private:
  const DirectedGraph* g_;
  std::int64_t round_index_ = 0;
  std::int64_t total_messages_ = 0;
  std::vector<std::int64_t> messages_sent_;
  std::vector<std::int64_t> rounds_;
  bool trace_enabled_ = false;
  std::vector<std::pair<std::int64_t, std::int64_t>> trace_;
};

}  // namespace dcadmm
