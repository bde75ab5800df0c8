#pragma once

#include <cstdint>

#include "specprice/simulator.hpp"

namespace specprice {

// Probability that at least m of n-1 independent rivals are available.
double w_mn(int m, int n, double x);
double W_mn(int m, int n, double x);

struct NPrimaryReport {
  double all_acquire_payoff = 0;  // (v-c) W - s
  double deviation_payoff = 0;    // (NoAcquire, v) against all-acquire rivals
  double gap = 0;                 // deviation - all-acquire, equals s
  double symmetric_constant = 0;  // payoff any symmetric equilibrium must give
};
NPrimaryReport n_primary_payoff_checks(double v, double c, double q, double s, int n, int m);

// Monte Carlo of the all-acquire profile: every available primary posts v
// when at most m primaries are available and c otherwise; the focal primary's
// payoff is averaged over rounds where it is available.
Estimate simulate_all_acquire(double v, double c, double q, double s, int n, int m,
                              std::uint64_t rounds, std::uint64_t seed);

struct MultiStateParams {
  double v = 1, c = 0;
  double q_state1 = 0.3, q_state2 = 0.3;
  double h1 = 0, h2 = 1;
};

struct MultiStatePayoffs {
  double payoff_state2 = 0;
  double payoff_state1 = 0;
  double L = 0;
};
MultiStatePayoffs multistate_payoffs(const MultiStateParams& p);

}  // namespace specprice
