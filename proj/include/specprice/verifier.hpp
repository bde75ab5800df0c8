#pragma once

#include <string>
#include <vector>

#include "specprice/equilibria.hpp"

namespace specprice {

enum class Decision { NoAcquire, Acquire };
const char* to_string(Decision d);

double win_probability(const MarketParams& params, int me, InfoState info, double x,
                       const PrimaryStrategy& opp);
double expected_payoff(const MarketParams& params, int me, InfoState info, double x,
                       const PrimaryStrategy& opp);

struct InfoRow {
  InfoState info;
  bool on_path = false;      // the primary's own strategy uses this state
  double eq_payoff = 0;      // own strategy's payoff in this state (on_path only)
  double best_price = 0;
  double best_payoff = 0;    // includes -s for acquired states
  double gain = 0;           // best_payoff - eq_payoff, 0 when off path
};

struct DeviationRow {
  int primary = 0;
  double eq_payoff = 0;       // value of the primary's own strategy
  Decision best_decision = Decision::NoAcquire;
  double best_price = 0;      // for Acquire: the price used on estimate 1
  double best_price_est0 = 0; // Acquire only
  double best_payoff = 0;
  double gain = 0;
  std::vector<InfoRow> by_info;
};

struct DeviationReport {
  std::vector<DeviationRow> rows;
  double max_gain = 0;
};

// Own strategy is needed to value the equilibrium payoff; opp is what the
// deviation is evaluated against.
DeviationRow best_response(const MarketParams& params, int me, const PrimaryStrategy& own,
                           const PrimaryStrategy& opp, int grid_size);
DeviationReport certify_ne(const MarketParams& params, const EquilibriumProfile& profile,
                           int grid_size);

struct StructuralReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
StructuralReport structural_checks(const EquilibriumProfile& profile);

}  // namespace specprice
