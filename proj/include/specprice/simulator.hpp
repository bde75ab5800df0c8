#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "specprice/equilibria.hpp"

namespace specprice {

struct SimConfig {
  std::uint64_t rounds = 1;
  std::uint64_t seed = 0;
  MarketParams params;
  std::array<PrimaryStrategy, 2> strategies;
  unsigned threads = 0;  // 0: hardware concurrency; results do not depend on it
};

struct Estimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t count = 0;
};

struct PrimaryStats {
  Estimate payoff;              // conditioned on own availability
  Estimate payoff_uncond;       // unavailable rounds count as 0
  Estimate sale;                // sale frequency among available rounds
  Estimate acquire;             // acquisition frequency among available rounds
  Estimate estimate_correct;    // among acquisitions
  Estimate posted_price;        // among available rounds
  double posted_price_variance = 0;
};

struct SimStats {
  std::array<PrimaryStats, 2> primary;
  Estimate price;                // price paid, rounds with at least one posted channel
  double price_variance = 0;
  Estimate sale_fraction;        // over all rounds
};

SimStats run_market(const SimConfig& cfg);

struct WelfareRow {
  double s = 0;
  double p1 = 0, p2 = 0;
  double mean_price = 0, mean_price_se = 0;
  double price_variance = 0;
  double posted_variance = 0;  // exact variance of one primary's posted price
  double payoff1 = 0, payoff1_se = 0;
  double payoff2 = 0, payoff2_se = 0;
};

// Basic or estimation-error scenario; s overrides s1 = s2.
std::vector<WelfareRow> welfare_sweep(const MarketParams& params, const std::vector<double>& s_grid,
                                      std::uint64_t rounds, std::uint64_t seed);

// Exact variance of a primary's posted price under its own mixed strategy.
double posted_price_variance(const PrimaryStrategy& st, double q_opp, double qs);

// Stream derivation used by the simulator, exposed for the extension checks.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace specprice
