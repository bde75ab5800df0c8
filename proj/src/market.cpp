#include "specprice/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specprice/error.hpp"

namespace specprice {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Range: return "RangeError";
    case ErrorCode::AmbiguousScenario: return "AmbiguousScenario";
    case ErrorCode::ScenarioMismatch: return "ScenarioMismatch";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::MissingCdf: return "MissingCdf";
    case ErrorCode::Internal: return "InternalError";
  }
  return "Error";
}

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Basic: return "Basic";
    case Scenario::EstimationError: return "EstimationError";
    case Scenario::UnequalCosts: return "UnequalCosts";
    case Scenario::UnequalAvailability: return "UnequalAvailability";
    case Scenario::NPrimary: return "NPrimary";
    case Scenario::MultiState: return "MultiState";
  }
  return "?";
}

const char* to_string(CostBand b) {
  switch (b) {
    case CostBand::PureN: return "PureN";
    case CostBand::OneSidedMix: return "OneSidedMix";
    case CostBand::BothMix: return "BothMix";
  }
  return "?";
}

const char* to_string(InfoState i) {
  switch (i) {
    case InfoState::NoAcquire: return "NoAcquire";
    case InfoState::AcquiredEst1: return "AcquiredEst1";
    case InfoState::AcquiredEst0: return "AcquiredEst0";
  }
  return "?";
}

double Regime::threshold(const std::string& name) const {
  for (const auto& [k, val] : thresholds)
    if (k == name) return val;
  fail(ErrorCode::Domain, "regime has no threshold named " + name);
}

bool nearly_equal(double a, double b) {
  return std::fabs(a - b) <= kEqualRel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

void check_ranges(const MarketParams& p) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p.v) || !finite(p.c) || !finite(p.s1) || !finite(p.s2) ||
      !finite(p.q1) || !finite(p.q2) || !finite(p.qs))
    fail(ErrorCode::Range, "parameters must be finite");
  if (!(p.c >= 0)) fail(ErrorCode::Range, "c must be >= 0, got " + fmt(p.c));
  if (!(p.v > p.c))
    fail(ErrorCode::Range, "need v > c, got v=" + fmt(p.v) + " c=" + fmt(p.c));
  if (!(p.q1 > 0 && p.q1 < 1)) fail(ErrorCode::Range, "q1 must lie in (0,1), got " + fmt(p.q1));
  if (!(p.q2 > 0 && p.q2 < 1)) fail(ErrorCode::Range, "q2 must lie in (0,1), got " + fmt(p.q2));
  if (!(p.s1 >= 0)) fail(ErrorCode::Range, "s1 must be >= 0, got " + fmt(p.s1));
  if (!(p.s2 >= 0)) fail(ErrorCode::Range, "s2 must be >= 0, got " + fmt(p.s2));
  if (!(p.qs > 0.5 && p.qs <= 1)) fail(ErrorCode::Range, "qs must lie in (1/2,1], got " + fmt(p.qs));
  if (p.n < 2) fail(ErrorCode::Range, "n must be >= 2");
  if (p.m < 1 || p.m >= p.n) fail(ErrorCode::Range, "need 1 <= m < n");
}

Scenario classify(const MarketParams& p) {
  check_ranges(p);
  if (p.n > 2) return Scenario::NPrimary;
  bool eq_q = nearly_equal(p.q1, p.q2);
  bool eq_s = nearly_equal(p.s1, p.s2);
  if (!eq_q && !eq_s)
    fail(ErrorCode::AmbiguousScenario,
         "costs and availabilities are both asymmetric; that game is not covered");
  if (p.qs < 1) {
    // the estimation-error analysis is symmetric only
    if (!eq_q || !eq_s)
      fail(ErrorCode::AmbiguousScenario,
           "qs < 1 requires symmetric costs and availabilities");
    return Scenario::EstimationError;
  }
  if (eq_q && eq_s) return Scenario::Basic;
  return eq_q ? Scenario::UnequalCosts : Scenario::UnequalAvailability;
}

MarketParams swapped(const MarketParams& p) {
  MarketParams out = p;
  std::swap(out.q1, out.q2);
  std::swap(out.s1, out.s2);
  return out;
}

Canonical canonicalize(const MarketParams& raw) {
  Scenario sc = classify(raw);
  Canonical out{raw, false};
  if (sc == Scenario::NPrimary) return out;
  MarketParams& p = out.params;
  bool eq_q = nearly_equal(p.q1, p.q2);
  bool eq_s = nearly_equal(p.s1, p.s2);
  if (eq_q) p.q2 = p.q1;
  if (eq_s) p.s2 = p.s1;
  if (sc == Scenario::UnequalCosts && p.s1 > p.s2) out.swapped = true;
  if (sc == Scenario::UnequalAvailability && p.q1 < p.q2) out.swapped = true;
  if (out.swapped) p = swapped(p);
  return out;
}

MarketParams validate_params(const MarketParams& raw) { return canonicalize(raw).params; }

}  // namespace specprice
