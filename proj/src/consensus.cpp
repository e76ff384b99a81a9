#include "dcadmm/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dcadmm/kernels.hpp"

namespace dcadmm {

namespace {

// Round payload layout: [u(0..p) | v | w(0..p) | R | detect_bit].
std::vector<Vec> pack_payloads(const std::vector<ConsensusState>& states) {
  const std::size_t p = states[0].u.size();
  std::vector<Vec> payloads(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    Vec m(2 * p + 3);
    std::copy(s.u.begin(), s.u.end(), m.begin());
    m[p] = s.v;
    std::copy(s.w.begin(), s.w.end(), m.begin() + p + 1);
    m[2 * p + 1] = s.R;
    m[2 * p + 2] = s.detect_bit ? 1.0 : 0.0;
    payloads[i] = std::move(m);
  }
  return payloads;
}

double spread(const std::vector<Vec>& ws) {
  double m = 0.0;
  for (std::size_t i = 0; i < ws.size(); ++i)
    for (std::size_t j = i + 1; j < ws.size(); ++j) m = std::max(m, dist2(ws[i], ws[j]));
  return m;
}

}  // namespace

std::vector<ConsensusState> make_consensus_states(const std::vector<Vec>& u0) {
  if (u0.empty()) throw std::invalid_argument("consensus: no agents");
  std::vector<ConsensusState> states(u0.size());
  for (std::size_t i = 0; i < u0.size(); ++i) {
    if (u0[i].size() != u0[0].size())
      throw std::invalid_argument("consensus: initial vectors must share a dimension");
    states[i].u = u0[i];
    states[i].w = u0[i];  // w^0 = u^0, v^0 = 1
  }
  return states;
}

double radius_update(const Vec& w_new,
                     const std::vector<std::pair<const Vec*, double>>& senders_prev) {
  double r = 0.0;
  for (const auto& [w_prev, R_prev] : senders_prev)
    r = std::max(r, dist2(w_new, *w_prev) + R_prev);
  return r;
}

void push_sum_step(std::vector<ConsensusState>& states, const WeightMatrix& P, Network& net,
                   double v_underflow_guard) {
  const int n = static_cast<int>(states.size());
  if (n != P.n()) throw std::invalid_argument("push_sum_step: states/matrix size mismatch");
  const std::size_t p = states[0].u.size();

  RoundMailbox mb = net.exchange(pack_payloads(states));

  for (int i = 0; i < n; ++i) {
    Vec u_new(p, 0.0);
    double v_new = 0.0;
    bool bit_new = true;
    const auto& weights = P.in_weights(i);  // ascending senders, matches inbox order
    const auto& inbox = mb.inbox[i];
    if (weights.size() != inbox.size())
      throw std::runtime_error("push_sum_step: missing neighbor message");
    for (std::size_t e = 0; e < inbox.size(); ++e) {
      const auto& entry = inbox[e];
      if (entry.sender != weights[e].first)
        throw std::runtime_error("push_sum_step: sender/weight misalignment");
      const double pij = weights[e].second;
      kernels::axpy(pij, entry.payload.data(), u_new.data(), p);
      v_new += pij * entry.payload[p];
      bit_new = bit_new && entry.payload[2 * p + 2] != 0.0;
    }
    if (!(v_new > 0.0) || v_new < v_underflow_guard)
      throw std::runtime_error("push_sum_step: v underflow at agent " + std::to_string(i));

    auto& s = states[i];
    s.u = std::move(u_new);
    s.v = v_new;
    s.w = s.u;
    kernels::scale(1.0 / v_new, s.w);

    // Radius over senders' previous-round (w, R), self included.
    double r = 0.0;
    for (const auto& entry : mb.inbox[i]) {
      const double* w_prev = entry.payload.data() + p + 1;
      double d2 = 0.0;
      for (std::size_t c = 0; c < p; ++c) {
        const double d = s.w[c] - w_prev[c];
        d2 += d * d;
      }
      r = std::max(r, std::sqrt(d2) + entry.payload[2 * p + 1]);
    }
    s.R = r;
    s.detect_bit = bit_new;
  }
}

ConsensusResult run_epsilon_consensus(const std::vector<Vec>& u0, const WeightMatrix& P,
                                      Network& net, const ConsensusOptions& opts,
                                      std::vector<ConsensusWindowRecord>* trace) {
  if (!(opts.eps > 0.0)) throw std::invalid_argument("run_epsilon_consensus: eps must be > 0");
  const int D = opts.diameter_bound > 0 ? opts.diameter_bound : P.graph().diameter_bound();
  if (D < P.graph().exact_diameter())
    throw std::invalid_argument("run_epsilon_consensus: diameter bound below exact diameter");

  auto states = make_consensus_states(u0);
  const int n = static_cast<int>(states.size());
  const std::int64_t messages_before = net.total_messages();

  std::vector<std::vector<double>> history;
  std::vector<Vec> candidate;  // states at the previous boundary
  std::vector<Vec> current(n);
  auto snapshot = [&] {
    for (int i = 0; i < n; ++i) current[i] = states[i].w;
    return current;
  };

  std::int64_t k = 0;
  int boundary = 0;
  while (true) {
    push_sum_step(states, P, net, opts.v_underflow_guard);
    ++k;
    if (k % D != 0) continue;

    ++boundary;  // k == boundary * D
    std::vector<double> rhat(n);
    for (int i = 0; i < n; ++i) rhat[i] = states[i].R;
    history.push_back(rhat);

    int global_flag = -1;
    if (boundary >= 2) {
      // The AND injected at the previous boundary has now traversed D rounds.
      const bool g = states[0].detect_bit;
      for (const auto& s : states)
        if (s.detect_bit != g)
          throw std::runtime_error("run_epsilon_consensus: detection bits diverged");
      global_flag = g ? 1 : 0;
      if (g) {
        if (trace) {
          ConsensusWindowRecord rec;
          rec.window = boundary;
          rec.rhat = rhat;
          rec.global_flag = 1;
          rec.spread_window_start = spread(candidate);
          rec.spread_window_end = spread(snapshot());
          trace->push_back(std::move(rec));
        }
        for (auto& s : states) s.converged_flag = true;
        ConsensusResult res;
        res.w_final = std::move(candidate);
        res.iterations_used = k;
        res.radii_history = std::move(history);
        res.messages = net.total_messages() - messages_before;
        res.detect_window = boundary - 1;
        return res;
      }
    }

    std::vector<Vec> now = snapshot();
    if (trace) {
      ConsensusWindowRecord rec;
      rec.window = boundary;
      rec.rhat = rhat;
      rec.global_flag = global_flag;
      rec.spread_window_start = candidate.empty() ? spread(now) : spread(candidate);
      rec.spread_window_end = spread(now);
      trace->push_back(std::move(rec));
    }

    for (int i = 0; i < n; ++i) {
      states[i].detect_bit = rhat[i] < opts.eps;
      states[i].R = 0.0;
      states[i].window = boundary;
    }
    candidate = std::move(now);

    if (boundary >= opts.max_windows)
      throw ConsensusBudgetError("consensus budget exhausted after " +
                                     std::to_string(boundary) + " windows",
                                 std::move(history));
  }
}

std::vector<bool> global_detection(const std::vector<bool>& flags, Network& net, int rounds) {
  std::vector<Vec> payloads(flags.size());
  std::vector<double> bits(flags.size());
  for (std::size_t i = 0; i < flags.size(); ++i) bits[i] = flags[i] ? 1.0 : 0.0;
  for (int r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < flags.size(); ++i) payloads[i] = {bits[i]};
    RoundMailbox mb = net.exchange(payloads);
    for (std::size_t i = 0; i < flags.size(); ++i) {
      double b = 1.0;
      for (const auto& entry : mb.inbox[i]) b = std::min(b, entry.payload[0]);
      bits[i] = b;
    }
  }
  std::vector<bool> out(flags.size());
  for (std::size_t i = 0; i < flags.size(); ++i) out[i] = bits[i] != 0.0;
  return out;
}

}  // namespace dcadmm
