#pragma once

#include <string>
#include <utility>
#include <vector>

namespace specprice {

// Two primaries compete to lease one channel each to a single secondary.
struct MarketParams {
  double v = 1.0;   // highest price the secondary pays
  double c = 0.0;   // transaction cost per sale
  double s1 = 0.0;  // cost of learning the rival's channel state
  double s2 = 0.0;
  double q1 = 0.5;  // channel availability
  double q2 = 0.5;
  double qs = 1.0;  // estimate accuracy
  int n = 2;        // extensions only
  int m = 1;

  bool operator==(const MarketParams&) const = default;
};

enum class Scenario {
  Basic,
  EstimationError,
  UnequalCosts,
  UnequalAvailability,
  NPrimary,
  MultiState,
};

enum class CostBand { PureN, OneSidedMix, BothMix };

enum class InfoState { NoAcquire = 0, AcquiredEst1 = 1, AcquiredEst0 = 2 };

inline constexpr InfoState kAllInfoStates[] = {
    InfoState::NoAcquire, InfoState::AcquiredEst1, InfoState::AcquiredEst0};

struct Regime {
  Scenario scenario = Scenario::Basic;
  CostBand cost_band = CostBand::PureN;
  std::vector<std::pair<std::string, double>> thresholds;

  double threshold(const std::string& name) const;
};

struct Canonical {
  MarketParams params;
  bool swapped = false;  // primaries 1 and 2 were exchanged
};

const char* to_string(Scenario s);
const char* to_string(CostBand b);
const char* to_string(InfoState i);

// Parameters within this relative distance are treated as equal when
// classifying, so sweeps that land on q1 = q2 by float steps behave.
inline constexpr double kEqualRel = 1e-12;
bool nearly_equal(double a, double b);

// Range checks only, no canonical ordering.
void check_ranges(const MarketParams& p);

Scenario classify(const MarketParams& p);

// Range check, classify, and reorder so s1 <= s2 or q1 >= q2.
Canonical canonicalize(const MarketParams& raw);
MarketParams validate_params(const MarketParams& raw);

MarketParams swapped(const MarketParams& p);

}  // namespace specprice
