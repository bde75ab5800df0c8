#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specprice/market.hpp"
#include "specprice/price_cdf.hpp"

namespace specprice {

struct PrimaryStrategy {
  double p_acquire = 0;
  std::map<InfoState, PriceCdf> cdf_by_info;

  bool has(InfoState i) const { return cdf_by_info.count(i) != 0; }
  const PriceCdf& cdf(InfoState i) const;
};

struct EquilibriumProfile {
  Regime regime;
  std::array<PrimaryStrategy, 2> strategies;
  std::array<double, 2> payoffs{0, 0};
  // support knots, keyed by ASCII names: pt, pt1, pt2, pt3, L, LN, L0, pbar, ptN, pt1N
  std::map<std::string, double> endpoints;
  // true when primary labels were exchanged relative to the caller's input;
  // strategies/payoffs are then already in caller order, endpoint names
  // follow the canonical (low cost / high availability first) labelling
  bool swapped = false;

  double endpoint(const std::string& name) const;
};

// Estimate-1 probability given own availability and the rival's q: q*qs + (1-q)(1-qs).
double prob_est1(double q_opp, double qs);
// Posterior that the rival is available given an estimate.
double posterior_available(double q_opp, double qs, InfoState info);

Regime thresholds(const MarketParams& params);

EquilibriumProfile ne_basic(const MarketParams& params);
double solve_error_mixing(const MarketParams& params);
// Residual of the mixing equation at p, scaled by nothing (money units).
double error_mixing_residual(const MarketParams& params, double p);
EquilibriumProfile ne_estimation_error(const MarketParams& params);
EquilibriumProfile ne_unequal_costs(const MarketParams& params);
EquilibriumProfile ne_unequal_availability(const MarketParams& params);

// Dispatches on the scenario; result is in the caller's primary order.
EquilibriumProfile solve(const MarketParams& params);

// Profile in which both primaries always acquire: price c on estimate 1,
// v on estimate 0. Used as a non-equilibrium witness.
EquilibriumProfile all_acquire_profile(const MarketParams& params);
// Basic model: primary `y` acquires w.p. 1 and prices by phi on estimate 1,
// the other never acquires and prices by the jump-at-v psi.
EquilibriumProfile pure_y_vs_pure_n_profile(const MarketParams& params, int y = 0);
// Both never acquire and price by phi regardless of s.
EquilibriumProfile pure_n_profile(const MarketParams& params);

// phi: 1/q (1 - (v-c)(1-q)/(x-c)) on [c+(v-c)(1-q), v]
PriceCdf phi_cdf(double v, double c, double q);

}  // namespace specprice
