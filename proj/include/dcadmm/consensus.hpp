#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dcadmm/graph.hpp"
#include "dcadmm/network.hpp"

namespace dcadmm {

// Per-agent state of the finite-time epsilon-consensus protocol.
//
// The ratio w = u/v tracks the network average of the initial u vectors
// under column-stochastic mixing. R accumulates, over a window of
// diameter-bound many rounds, the largest chained per-step displacement
// max_j (||w_i_new - w_j_old|| + R_j_old) over the senders j (in-neighbors
// and i itself); after a full window the ball B(w_i, R_i) contains every
// agent's state from the window start.
struct ConsensusState {
  Vec u;
  double v = 1.0;
  Vec w;
  double R = 0.0;
  int window = 0;            // completed detection windows
  bool converged_flag = false;
  bool detect_bit = true;    // one-bit AND pipeline payload
};

struct ConsensusResult {
  std::vector<Vec> w_final;                     // states at the detecting window boundary
  std::int64_t iterations_used = 0;             // always a multiple of the window length
  std::vector<std::vector<double>> radii_history;  // [window][agent], windowed radii
  std::int64_t messages = 0;
  int detect_window = 0;  // boundary index whose states are returned
};

// Raised when max_windows elapse without global detection. Carries whatever
// windowed radii were observed so callers can diagnose the stall.
class ConsensusBudgetError : public std::runtime_error {
 public:
  ConsensusBudgetError(std::string what, std::vector<std::vector<double>> history)
      : std::runtime_error(std::move(what)), radii_history(std::move(history)) {}
  std::vector<std::vector<double>> radii_history;
};

struct ConsensusOptions {
  double eps = 1e-6;
  int diameter_bound = 0;          // 0: use the graph's bound
  std::int64_t max_windows = 100000;
  double v_underflow_guard = 1e-300;
};

// One per-window trace row. global_flag: 1/0 once the pipelined one-bit
// detection for the previous window has arrived, -1 while unknown.
struct ConsensusWindowRecord {
  int window = 0;
  std::vector<double> rhat;
  int global_flag = -1;
  double spread_window_start = 0.0;  // max pairwise distance at previous boundary
  double spread_window_end = 0.0;    // same at this boundary
};

std::vector<ConsensusState> make_consensus_states(const std::vector<Vec>& u0);

// One protocol iteration: a single network round carrying (u, v, w, R,
// detect bit) per edge, followed by the ratio, radius and one-bit AND
// updates. Throws on a non-positive or underflowing v.
void push_sum_step(std::vector<ConsensusState>& states, const WeightMatrix& P, Network& net,
                   double v_underflow_guard = 1e-300);

// Radius recursion for one agent given the previous-round (w, R) of its
// senders (in-neighbors plus itself). Exposed for direct testing.
double radius_update(const Vec& w_new,
                     const std::vector<std::pair<const Vec*, double>>& senders_prev);

// Runs windows of diameter_bound iterations; at each boundary compares the
// windowed radius against eps, resets it, and feeds the per-agent verdicts
// through a one-bit AND pipelined with the next window. Returns once every
// agent's verdict for a common window is positive. The returned states are
// those of the detecting boundary; their pairwise distances are at most
// 2*eps and each lies within eps of the average of the initial vectors.
ConsensusResult run_epsilon_consensus(const std::vector<Vec>& u0, const WeightMatrix& P,
                                      Network& net, const ConsensusOptions& opts,
                                      std::vector<ConsensusWindowRecord>* trace = nullptr);

// D rounds of one-bit AND aggregation (in-neighbors plus self). With D at
// least the diameter, every output equals the conjunction of all inputs.
std::vector<bool> global_detection(const std::vector<bool>& flags, Network& net, int rounds);

}  // namespace dcadmm
