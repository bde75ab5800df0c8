#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specprice/simulator.hpp"
#include "specprice/verifier.hpp"

namespace specprice {

// 12 significant digits, "%.12g".
std::string fmt_num(double x);

std::string profile_json(const MarketParams& params, const EquilibriumProfile& prof);
// columns: primary,info,x,F
std::string cdf_table_csv(const EquilibriumProfile& prof, double c, double v, int points);
// columns: s,statistic,primary,value,std_error
std::string sim_stats_csv(const MarketParams& params, const SimStats& st);
// columns: primary,info,eq_payoff,best_decision,best_price,best_payoff,gain
std::string deviation_csv(const DeviationReport& rep);

enum class SweepAxis { S, Q, Qs, Q2, S2 };
SweepAxis parse_axis(const std::string& name);
const char* to_string(SweepAxis a);
MarketParams apply_axis(MarketParams p, SweepAxis axis, double value);

struct SweepOptions {
  bool verify_each = false;
  int grid = 1000;
  double eps = -1;             // verification bound; negative means 1e-5 (v-c)
  std::uint64_t rounds = 0;    // 0: no simulation
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

struct SweepRow {
  double axis_value = 0;
  MarketParams params;
  EquilibriumProfile profile;
  double eps = 0;
  bool verified = true;
  bool simulated = false;
  SimStats sim;
};

std::vector<SweepRow> run_sweep(const MarketParams& base, SweepAxis axis, double lo, double hi,
                                int steps, const SweepOptions& opt);
std::string sweep_csv(const std::vector<SweepRow>& rows, const SweepOptions& opt);

extern const char* const kEndpointNames[10];

}  // namespace specprice
