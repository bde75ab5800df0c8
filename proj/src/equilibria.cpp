#include "specprice/equilibria.hpp"

#include <cmath>
#include <sstream>

#include "specprice/error.hpp"

namespace specprice {

const PriceCdf& PrimaryStrategy::cdf(InfoState i) const {
  auto it = cdf_by_info.find(i);
  if (it == cdf_by_info.end())
    fail(ErrorCode::MissingCdf, std::string("strategy has no CDF for ") + to_string(i));
  return it->second;
}

double EquilibriumProfile::endpoint(const std::string& name) const {
  auto it = endpoints.find(name);
  if (it == endpoints.end()) fail(ErrorCode::Domain, "profile has no endpoint " + name);
  return it->second;
}

double prob_est1(double q_opp, double qs) { return q_opp * qs + (1 - q_opp) * (1 - qs); }

double posterior_available(double q_opp, double qs, InfoState info) {
  switch (info) {
    case InfoState::NoAcquire: return q_opp;
    case InfoState::AcquiredEst1: return q_opp * qs / prob_est1(q_opp, qs);
    case InfoState::AcquiredEst0: return q_opp * (1 - qs) / (1 - prob_est1(q_opp, qs));
  }
  return q_opp;
}

namespace {

// Segment given by its end values.
HyperbolicSegment seg(double lo, double hi, double flo, double fhi) { return {lo, hi, flo, fhi}; }

// Segment from the closed-form A - B/(x - c), for moderate coefficients.
HyperbolicSegment hseg(double c, double lo, double hi, double A, double B) {
  return HyperbolicSegment::from_ab(c, lo, hi, A, B);
}

// Construction-time consistency check between the simplified closed form
// and the raw defining relation.
void expect_close(double a, double b, double scale, const char* what) {
  if (!(std::fabs(a - b) <= 1e-9 * std::max(1.0, scale))) {
    std::ostringstream os;
    os.precision(15);
    os << what << ": " << a << " vs " << b;
    fail(ErrorCode::Internal, os.str());
  }
}

// The end-value segment must trace the closed form A - B/(x - c). The
// tolerance grows with the coefficients, since the closed form itself loses
// digits when they are large.
void agree(double c, const HyperbolicSegment& s, double A, double B, const char* what) {
  const double scale = std::fabs(A) + std::fabs(B) / (s.lo - c);
  PriceCdf probe;
  probe.c_ref = c;
  for (double t : {0.0, 0.5, 1.0}) {
    double x = s.lo + t * (s.hi - s.lo);
    expect_close(probe.seg_value(s, x), A - B / (x - c), scale, what);
  }
}

MarketParams canonical_for(const MarketParams& raw, std::initializer_list<Scenario> ok,
                           const char* who, bool& swapped, Scenario& sc) {
  Canonical can = canonicalize(raw);
  sc = classify(can.params);
  for (Scenario s : ok)
    if (s == sc) {
      swapped = can.swapped;
      return can.params;
    }
  fail(ErrorCode::ScenarioMismatch,
       std::string(who) + " does not handle scenario " + to_string(sc));
}

EquilibriumProfile to_caller_order(EquilibriumProfile prof, bool swapped) {
  if (swapped) {
    std::swap(prof.strategies[0], prof.strategies[1]);
    std::swap(prof.payoffs[0], prof.payoffs[1]);
    prof.swapped = true;
  }
  return prof;
}

void check_cdfs(const EquilibriumProfile& prof) {
  for (int i = 0; i < 2; ++i)
    for (const auto& [info, d] : prof.strategies[i].cdf_by_info) {
      auto bad = validate_cdf(d);
      // the Bertrand point mass at c is a legitimate limit at s = 0
      if (!bad.empty() && !(d.segments.empty() && d.jump == 1.0)) {
        std::ostringstream os;
        os << "constructed CDF for primary " << i + 1 << " " << to_string(info)
           << " invalid: " << bad.front().kind << " " << bad.front().detail;
        fail(ErrorCode::Internal, os.str());
      }
    }
}

PrimaryStrategy pure_n_strategy(PriceCdf d) {
  PrimaryStrategy st;
  st.p_acquire = 0;
  st.cdf_by_info.emplace(InfoState::NoAcquire, std::move(d));
  return st;
}

// Everyone acquires; estimate 1 prices at c, estimate 0 at v.
PrimaryStrategy bertrand_strategy(double c, double v) {
  PrimaryStrategy st;
  st.p_acquire = 1;
  st.cdf_by_info.emplace(InfoState::AcquiredEst1, PriceCdf::point_mass(c, v, c));
  st.cdf_by_info.emplace(InfoState::AcquiredEst0, PriceCdf::point_mass(c, v, v));
  return st;
}

Regime make_regime(Scenario sc, CostBand band, std::vector<std::pair<std::string, double>> th) {
  Regime r;
  r.scenario = sc;
  r.cost_band = band;
  r.thresholds = std::move(th);
  return r;
}

}  // namespace

PriceCdf phi_cdf(double v, double c, double q) {
  double base = (v - c) * (1 - q);
  return PriceCdf::from_segments(c, v, {seg(c + base, v, 0.0, 1.0)});
}

Regime thresholds(const MarketParams& raw) {
  Canonical can = canonicalize(raw);
  const MarketParams& p = can.params;
  Scenario sc = classify(p);
  const double vc = p.v - p.c;
  switch (sc) {
    case Scenario::Basic: {
      double T = p.q1 * vc * (1 - p.q1);
      return make_regime(sc, p.s1 >= T ? CostBand::PureN : CostBand::BothMix, {{"T", T}});
    }
    case Scenario::EstimationError: {
      double q = p.q1;
      double T = vc * (1 - q) * (2 * q * p.qs - q);
      return make_regime(sc, p.s1 >= T ? CostBand::PureN : CostBand::BothMix, {{"T", T}});
    }
    case Scenario::UnequalCosts: {
      double T = p.q1 * vc * (1 - p.q1);
      CostBand b = p.s1 >= T   ? CostBand::PureN
                   : p.s2 >= T ? CostBand::OneSidedMix
                               : CostBand::BothMix;
      return make_regime(sc, b, {{"T", T}});
    }
    case Scenario::UnequalAvailability: {
      double T1 = p.q2 * vc * (1 - p.q2);
      double T2 = p.q2 * vc * (1 - p.q1) / (1 - p.q1 + p.q2);
      CostBand b = p.s1 >= T1   ? CostBand::PureN
                   : p.s1 >= T2 ? CostBand::OneSidedMix
                                : CostBand::BothMix;
      return make_regime(sc, b, {{"T1", T1}, {"T2", T2}});
    }
    default:
      fail(ErrorCode::ScenarioMismatch,
           std::string("no two-primary regime for scenario ") + to_string(sc));
  }
}

EquilibriumProfile ne_basic(const MarketParams& raw) {
  bool sw;
  Scenario sc;
  MarketParams p = canonical_for(raw, {Scenario::Basic}, "ne_basic", sw, sc);
  const double v = p.v, c = p.c, q = p.q1, s = p.s1, vc = v - c;
  EquilibriumProfile prof;
  prof.regime = thresholds(p);
  const double T = prof.regime.threshold("T");
  const double payoff = vc * (1 - q);
  prof.payoffs = {payoff, payoff};

  if (s >= T) {
    PriceCdf phi = phi_cdf(v, c, q);
    prof.strategies = {pure_n_strategy(phi), pure_n_strategy(phi)};
    prof.endpoints["pt"] = c + vc * (1 - q);
  } else if (s == 0) {
    prof.strategies = {bertrand_strategy(c, v), bertrand_strategy(c, v)};
    prof.endpoints["pt2"] = v;
  } else {
    double pm = (T - s) / (T - s * q);
    // 1 - p and 1 - qp without cancellation
    double om = s * (1 - q) / (T - s * q);
    double oqp = T * (1 - q) / (T - s * q);
    double pt1 = c + vc * (1 - q) * om / oqp;
    double pt2 = c + vc * (1 - q) / oqp;
    // acquiring and pricing at pt1 on estimate 1 earns the equilibrium payoff
    expect_close(q * (pt1 - c) + (1 - q) * vc - s, payoff, vc, "basic Y indifference");
    PrimaryStrategy st;
    st.p_acquire = pm;
    HyperbolicSegment y1 = seg(pt1, pt2, 0.0, 1.0);
    agree(c, y1, 1 / pm, (pt1 - c) / pm, "basic estimate-1 CDF");
    HyperbolicSegment n = seg(pt2, v, 0.0, 1.0);
    agree(c, n, oqp / (q * om), vc * (1 - q) / (q * om), "basic blind CDF");
    st.cdf_by_info.emplace(InfoState::AcquiredEst1, PriceCdf::from_segments(c, v, {y1}));
    st.cdf_by_info.emplace(InfoState::AcquiredEst0, PriceCdf::point_mass(c, v, v));
    st.cdf_by_info.emplace(InfoState::NoAcquire, PriceCdf::from_segments(c, v, {n}));
    prof.strategies = {st, st};
    prof.endpoints["pt1"] = pt1;
    prof.endpoints["pt2"] = pt2;
  }
  check_cdfs(prof);
  return to_caller_order(std::move(prof), sw);
}

namespace {

struct ErrorKnots {
  double pt1, pt2, pt3, LN, L0;  // all measured from c
};

ErrorKnots error_knots(double vc, double q, double qs, double p) {
  ErrorKnots k;
  double e1 = prob_est1(q, qs), e0 = 1 - e1;
  k.pt3 = vc * (1 - q) * qs / e0;
  double g = 1 - (1 - p) * q - p * q * qs;
  k.pt2 = vc * (1 - q) * qs * g / (p * q * (1 - qs) * (1 - qs) + qs * (1 - q));
  k.L0 = k.pt2 / g;
  k.LN = k.pt2 / (1 - p * q * qs);
  k.pt1 = k.LN * (q * qs * (1 - p * qs) + (1 - q) * (1 - qs)) / e1;
  return k;
}

}  // namespace

double error_mixing_residual(const MarketParams& p, double pm) {
  const double vc = p.v - p.c, q = p.q1, qs = p.qs;
  double lhs = vc * (1 - q) * qs *
               ((1 - (1 - pm) * q - pm * q * qs) /
                (pm * q * (1 - qs) * (1 - qs) + qs * (1 - q))) *
               (1 - (q * qs * (1 - pm * qs) + (1 - q) * (1 - qs)) / (1 - pm * q * qs));
  return lhs - (vc * (1 - q) * qs - p.s1);
}

double solve_error_mixing(const MarketParams& raw) {
  bool sw;
  Scenario sc;
  MarketParams p = canonical_for(raw, {Scenario::EstimationError, Scenario::Basic},
                                 "solve_error_mixing", sw, sc);
  const double vc = p.v - p.c;
  const double tol = 1e-10 * vc;
  const double T = vc * (1 - p.q1) * (2 * p.q1 * p.qs - p.q1);
  if (p.s1 == 0) return 1.0;  // the residual vanishes exactly at p = 1
  if (!(p.s1 < T)) {
    std::ostringstream os;
    os << "mixing equation has no root in (0,1) for s=" << p.s1 << " >= T=" << T;
    fail(ErrorCode::NoRoot, os.str());
  }
  double lo = 1e-12, hi = 1 - 1e-12;
  double flo = error_mixing_residual(p, lo), fhi = error_mixing_residual(p, hi);
  if (std::fabs(flo) <= tol && flo >= 0) return lo;
  if (std::fabs(fhi) <= tol && fhi <= 0) return hi;
  if (!(flo < 0 && fhi > 0)) {
    std::ostringstream os;
    os << "no sign change on bracket: f(lo)=" << flo << " f(hi)=" << fhi;
    fail(ErrorCode::NoRoot, os.str());
  }
  // bisect all the way down; the residual tolerance is checked afterwards
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = error_mixing_residual(p, mid);
    if (fm == 0) return mid;
    if (fm < 0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  double root = std::fabs(flo) < std::fabs(fhi) ? lo : hi;
  double res = std::fabs(error_mixing_residual(p, root));
  if (res > tol) {
    std::ostringstream os;
    os << "bisection stalled with residual " << res;
    fail(ErrorCode::NoRoot, os.str());
  }
  return root;
}

EquilibriumProfile ne_estimation_error(const MarketParams& raw) {
  bool sw;
  Scenario sc;
  MarketParams p = canonical_for(raw, {Scenario::EstimationError, Scenario::Basic},
                                 "ne_estimation_error", sw, sc);
  if (sc == Scenario::Basic) return ne_basic(p);
  const double v = p.v, c = p.c, q = p.q1, qs = p.qs, s = p.s1, vc = v - c;
  EquilibriumProfile prof;
  prof.regime = thresholds(p);
  const double T = prof.regime.threshold("T");

  if (s >= T) {
    PriceCdf phi = phi_cdf(v, c, q);
    prof.strategies = {pure_n_strategy(phi), pure_n_strategy(phi)};
    prof.payoffs = {vc * (1 - q), vc * (1 - q)};
    prof.endpoints["pt"] = c + vc * (1 - q);
    check_cdfs(prof);
    return to_caller_order(std::move(prof), sw);
  }

  const double pm = solve_error_mixing(p);
  const ErrorKnots k = error_knots(vc, q, qs, pm);
  const double e1 = prob_est1(q, qs), e0 = 1 - e1;
  expect_close(k.pt2, k.pt1 * e1 + k.pt3 * e0 - s, vc, "error payoff identity");

  PrimaryStrategy st;
  st.p_acquire = pm;
  double a1 = e1 / (pm * q * qs * qs);
  HyperbolicSegment y1 = seg(c + k.pt1, c + k.LN, 0.0, 1.0);
  agree(c, y1, a1, a1 * k.pt1, "estimate-1 CDF");
  st.cdf_by_info.emplace(InfoState::AcquiredEst1, PriceCdf::from_segments(c, v, {y1}));
  if (pm < 1) {
    double aN = 1 / ((1 - pm) * q), bN = pm * q * qs;
    HyperbolicSegment n = seg(c + k.LN, c + k.L0, 0.0, 1.0);
    agree(c, n, aN * (1 - bN), aN * k.pt2, "blind CDF");
    st.cdf_by_info.emplace(InfoState::NoAcquire, PriceCdf::from_segments(c, v, {n}));
  }
  // support [L0, v] shrinks to nothing as qs -> 1
  if (qs < 1 && c + k.L0 < v) {
    double a0 = e0 / (pm * q * (1 - qs) * (1 - qs));
    double b0 = (pm * q * (1 - qs) * qs + (1 - pm) * q * (1 - qs)) / e0;
    HyperbolicSegment y0 = seg(c + k.L0, v, 0.0, 1.0);
    agree(c, y0, a0 * (1 - b0), a0 * k.pt3, "estimate-0 CDF");
    st.cdf_by_info.emplace(InfoState::AcquiredEst0, PriceCdf::from_segments(c, v, {y0}));
  } else {
    st.cdf_by_info.emplace(InfoState::AcquiredEst0, PriceCdf::point_mass(c, v, v));
  }

  prof.strategies = {st, st};
  prof.payoffs = {k.pt2, k.pt2};
  prof.endpoints = {{"pt1", c + k.pt1}, {"pt2", c + k.pt2}, {"pt3", c + k.pt3},
                    {"LN", c + k.LN},   {"L0", c + k.L0}};
  check_cdfs(prof);
  return to_caller_order(std::move(prof), sw);
}

EquilibriumProfile ne_unequal_costs(const MarketParams& raw) {
  bool sw;
  Scenario sc;
  MarketParams p = canonical_for(raw, {Scenario::UnequalCosts, Scenario::Basic},
                                 "ne_unequal_costs", sw, sc);
  if (sc == Scenario::Basic) return ne_basic(p);
  const double v = p.v, c = p.c, q = p.q1, s1 = p.s1, s2 = p.s2, vc = v - c;
  const double base = vc * (1 - q);
  EquilibriumProfile prof;
  prof.regime = thresholds(p);
  const double T = prof.regime.threshold("T");

  switch (prof.regime.cost_band) {
    case CostBand::PureN: {
      PriceCdf phi = phi_cdf(v, c, q);
      prof.strategies = {pure_n_strategy(phi), pure_n_strategy(phi)};
      prof.payoffs = {base, base};
      prof.endpoints["pt"] = c + base;
      break;
    }
    case CostBand::OneSidedMix: {
      double p1 = (1 / q) * (1 - vc * (1 - q) * (1 - q) / (base - s1));
      double pt = c + base;
      double pt1 = c + (base - s1) / (1 - q);
      double ptN = c + base + q * base - s1;
      expect_close(pt1 - c, base / (1 - q * p1), vc, "unequal-cost pt1");
      PrimaryStrategy a;
      a.p_acquire = p1;
      HyperbolicSegment y1 = seg(pt, pt1, 0.0, 1.0);
      agree(c, y1, 1 / (q * p1), base / (q * p1), "unequal-cost estimate-1 CDF");
      a.cdf_by_info.emplace(InfoState::AcquiredEst1, PriceCdf::from_segments(c, v, {y1}));
      a.cdf_by_info.emplace(InfoState::AcquiredEst0, PriceCdf::point_mass(c, v, v));
      if (p1 < 1) {
        HyperbolicSegment n = seg(pt1, v, 0.0, 1.0);
        agree(c, n, (1 - q * p1) / (q * (1 - p1)), base / (q * (1 - p1)), "unequal-cost blind CDF");
        a.cdf_by_info.emplace(InfoState::NoAcquire, PriceCdf::from_segments(c, v, {n}));
      }
      // the pure-N side: 1 - base/y up to pt1, then a jump of 1 - q - s1/(q(v-c)) at v
      HyperbolicSegment b1 = seg(pt, pt1, 0.0, q * p1);
      agree(c, b1, 1.0, base, "unequal-cost pure-N CDF, lower piece");
      HyperbolicSegment b2 = seg(pt1, v, q * p1, q + s1 / (q * vc));
      agree(c, b2, 1 / q, (ptN - c) / q, "unequal-cost pure-N CDF, upper piece");
      PrimaryStrategy b = pure_n_strategy(PriceCdf::from_segments(c, v, {b1, b2}));
      prof.strategies = {a, b};
      prof.payoffs = {base + q * base - s1, base};
      prof.endpoints = {{"pt", pt}, {"pt1", pt1}, {"ptN", ptN}};
      break;
    }
    case CostBand::BothMix: {
      double p1 = (T - s1) / (T - q * s1);
      double p2 = (T - s2) / (T - q * s2);
      double L = c + s2 / q;
      double pt2 = c + (base - s2) / (1 - q);
      double pt1 = c + (base - s1) / (1 - q);
      double pt1N = c + base + s2 - s1;
      // 1 - p without cancellation
      double om1 = s1 * (1 - q) / (T - q * s1), om2 = s2 * (1 - q) / (T - q * s2);
      expect_close(pt2 - c, (L - c) / om2, vc, "unequal-cost pt2");
      expect_close(pt1 - c, base / (1 - p1 * q), vc, "unequal-cost pt1");
      PrimaryStrategy a;
      a.p_acquire = p1;
      HyperbolicSegment a1 = seg(L, pt2, 0.0, p2 / p1);
      agree(c, a1, 1 / p1, (L - c) / p1, "unequal-cost estimate-1 CDF, lower piece");
      HyperbolicSegment a2 = seg(pt2, pt1, p2 / p1, 1.0);
      agree(c, a2, 1 / (p1 * q), base / (p1 * q), "unequal-cost estimate-1 CDF, upper piece");
      a.cdf_by_info.emplace(InfoState::AcquiredEst1, PriceCdf::from_segments(c, v, {a1, a2}));
      a.cdf_by_info.emplace(InfoState::AcquiredEst0, PriceCdf::point_mass(c, v, v));
      if (p1 < 1) {
        HyperbolicSegment n = seg(pt1, v, 0.0, 1.0);
        agree(c, n, (1 - p1 * q) / (q * om1), base / (q * om1), "unequal-cost blind CDF");
        a.cdf_by_info.emplace(InfoState::NoAcquire, PriceCdf::from_segments(c, v, {n}));
      }
      PrimaryStrategy b;
      b.p_acquire = p2;
      HyperbolicSegment y2 = seg(L, pt2, 0.0, 1.0);
      agree(c, y2, 1 / p2, (L - c) / p2, "unequal-cost high-cost estimate-1 CDF");
      b.cdf_by_info.emplace(InfoState::AcquiredEst1, PriceCdf::from_segments(c, v, {y2}));
      b.cdf_by_info.emplace(InfoState::AcquiredEst0, PriceCdf::point_mass(c, v, v));
      double mid = (s2 - s1) / (base - s1);
      double top = s2 / base + s1 * (base - s2) / (base * s2);
      HyperbolicSegment n1 = seg(pt2, pt1, 0.0, mid);
      agree(c, n1, 1.0, (L - c) / om2, "unequal-cost high-cost blind CDF, lower piece");
      HyperbolicSegment n2 = seg(pt1, v, mid, top);
      agree(c, n2, (1 - p2 * q) / (q * om2), (pt1N - c) / (q * om2),
            "unequal-cost high-cost blind CDF, upper piece");
      b.cdf_by_info.emplace(InfoState::NoAcquire, PriceCdf::from_segments(c, v, {n1, n2}));
      prof.strategies = {a, b};
      prof.payoffs = {base + s2 - s1, base};
      prof.endpoints = {{"L", L}, {"pt1", pt1}, {"pt2", pt2}, {"pt1N", pt1N}};
      break;
    }
  }
  check_cdfs(prof);
  return to_caller_order(std::move(prof), sw);
}

EquilibriumProfile ne_unequal_availability(const MarketParams& raw) {
  bool sw;
  Scenario sc;
  MarketParams p = canonical_for(raw, {Scenario::UnequalAvailability, Scenario::Basic},
                                 "ne_unequal_availability", sw, sc);
  if (sc == Scenario::Basic) return ne_basic(p);
  const double v = p.v, c = p.c, q1 = p.q1, q2 = p.q2, s = p.s1, vc = v - c;
  EquilibriumProfile prof;
  prof.regime = thresholds(p);

  switch (prof.regime.cost_band) {
    case CostBand::PureN: {
      double base = vc * (1 - q2);
      double pbar = c + base;
      HyperbolicSegment s1 = seg(pbar, v, 0.0, q2 / q1);
      agree(c, s1, 1 / q1, base / q1, "high-availability pure-N CDF");
      HyperbolicSegment s2 = seg(pbar, v, 0.0, 1.0);
      agree(c, s2, 1 / q2, base / q2, "low-availability pure-N CDF");
      PriceCdf d1 = PriceCdf::from_segments(c, v, {s1});
      PriceCdf d2 = PriceCdf::from_segments(c, v, {s2});
      prof.strategies = {pure_n_strategy(d1), pure_n_strategy(d2)};
      prof.payoffs = {base, base};
      prof.endpoints["pbar"] = pbar;
      break;
    }
    case CostBand::OneSidedMix: {
      double base = vc * (1 - q2);
      double L = c + s / q2;
      double p1 = (base - s / q2) / (q1 * base - q1 * s);
      double pt = c + (base - s) / (1 - q2);
      expect_close(pt - c, (L - c) / (1 - p1 * q1), vc, "unequal-availability pt");
      PrimaryStrategy a;
      a.p_acquire = p1;
      HyperbolicSegment y1 = seg(L, pt, 0.0, 1.0);
      agree(c, y1, 1 / (p1 * q1), (L - c) / (p1 * q1), "unequal-availability estimate-1 CDF");
      a.cdf_by_info.emplace(InfoState::AcquiredEst1, PriceCdf::from_segments(c, v, {y1}));
      a.cdf_by_info.emplace(InfoState::AcquiredEst0, PriceCdf::point_mass(c, v, v));
      double An = (1 - p1 * q1) / ((1 - p1) * q1), Bn = (L - c) / ((1 - p1) * q1);
      HyperbolicSegment n = seg(pt, v, 0.0, An - Bn / vc);
      agree(c, n, An, Bn, "unequal-availability blind CDF");
      a.cdf_by_info.emplace(InfoState::NoAcquire, PriceCdf::from_segments(c, v, {n}));
      HyperbolicSegment b1 = seg(L, pt, 0.0, p1 * q1);
      agree(c, b1, 1.0, L - c, "low-availability CDF, lower piece");
      HyperbolicSegment b2 = seg(pt, v, p1 * q1, 1.0);
      agree(c, b2, 1 / q2, base / q2, "low-availability CDF, upper piece");
      PrimaryStrategy b = pure_n_strategy(PriceCdf::from_segments(c, v, {b1, b2}));
      prof.strategies = {a, b};
      prof.payoffs = {base, s / q2};
      prof.endpoints = {{"L", L}, {"pt", pt}};
      break;
    }
    case CostBand::BothMix: {
      if (s == 0) {
        prof.strategies = {bertrand_strategy(c, v), bertrand_strategy(c, v)};
        prof.payoffs = {vc * (1 - q2), vc * (1 - q1)};
        break;
      }
      double pbar = c + vc * (1 - q1) + s * (q1 - q2) / q2;
      double p1 = (q1 * vc * (1 - q2) - s * (q1 / q2 - q1 + q2)) / (q1 * vc * (1 - q2) - q1 * s);
      double p2 = (q2 * vc * (1 - q1) - s * (1 - q1 + q2)) / (q2 * vc * (1 - q1) - q2 * s);
      double L = c + s / q2;
      double pt2 = c + (vc * (1 - q1) - s) / (1 - q1);
      double pt1 = c + (vc * (1 - q2) - s) / (1 - q2);
      expect_close(pt2 - c, (pbar - c) / (1 - p2 * q1), vc, "unequal-availability pt2");
      expect_close(pt1 - c, (pbar - c) / (1 - p1 * q1), vc, "unequal-availability pt1");
      // 1 - p without cancellation
      double om1 = s * (q1 - 2 * q1 * q2 + q2 * q2) / (q2 * q1 * (vc * (1 - q2) - s));
      double om2 = s * (1 - q1) / (q2 * (vc * (1 - q1) - s));
      expect_close(om1, 1 - p1, 1.0, "unequal-availability 1 - p1");
      expect_close(om2, 1 - p2, 1.0, "unequal-availability 1 - p2");
      PrimaryStrategy a;
      a.p_acquire = p1;
      HyperbolicSegment a1 = seg(L, pt2, 0.0, p2 / p1);
      agree(c, a1, 1 / p1, (L - c) / p1, "unequal-availability estimate-1 CDF, lower piece");
      HyperbolicSegment a2 = seg(pt2, pt1, p2 / p1, 1.0);
      agree(c, a2, 1 / (p1 * q1), (pbar - c) / (p1 * q1),
            "unequal-availability estimate-1 CDF, upper piece");
      a.cdf_by_info.emplace(InfoState::AcquiredEst1, PriceCdf::from_segments(c, v, {a1, a2}));
      a.cdf_by_info.emplace(InfoState::AcquiredEst0, PriceCdf::point_mass(c, v, v));
      double jump = (q1 - q2) * (vc * (1 - q2) - s) / (vc * (q1 - 2 * q1 * q2 + q2 * q2));
      HyperbolicSegment n = seg(pt1, v, 0.0, 1 - jump);
      agree(c, n, (1 - p1 * q1) / (om1 * q1), (pbar - c) / (om1 * q1),
            "high-availability blind CDF");
      a.cdf_by_info.emplace(InfoState::NoAcquire, PriceCdf::from_segments(c, v, {n}));
      PrimaryStrategy b;
      b.p_acquire = p2;
      HyperbolicSegment y2 = seg(L, pt2, 0.0, 1.0);
      agree(c, y2, 1 / p2, (L - c) / p2, "low-availability estimate-1 CDF");
      b.cdf_by_info.emplace(InfoState::AcquiredEst1, PriceCdf::from_segments(c, v, {y2}));
      b.cdf_by_info.emplace(InfoState::AcquiredEst0, PriceCdf::point_mass(c, v, v));
      double mid = 1 - (pt2 - c) / (pt1 - c);
      HyperbolicSegment n1 = seg(pt2, pt1, 0.0, mid);
      agree(c, n1, 1.0, (L - c) / om2, "low-availability blind CDF, lower piece");
      HyperbolicSegment n2 = seg(pt1, v, mid, 1.0);
      agree(c, n2, (1 - p2 * q2) / (om2 * q2), vc * (1 - q2) / (om2 * q2),
            "low-availability blind CDF, upper piece");
      b.cdf_by_info.emplace(InfoState::NoAcquire, PriceCdf::from_segments(c, v, {n1, n2}));
      prof.strategies = {a, b};
      prof.payoffs = {vc * (1 - q2), vc * (1 - q1) + s * (q1 - q2) / q2};
      prof.endpoints = {{"L", L}, {"pbar", pbar}, {"pt1", pt1}, {"pt2", pt2}};
      break;
    }
  }
  check_cdfs(prof);
  return to_caller_order(std::move(prof), sw);
}

EquilibriumProfile solve(const MarketParams& params) {
  switch (classify(params)) {
    case Scenario::Basic: return ne_basic(params);
    case Scenario::EstimationError: return ne_estimation_error(params);
    case Scenario::UnequalCosts: return ne_unequal_costs(params);
    case Scenario::UnequalAvailability: return ne_unequal_availability(params);
    default:
      fail(ErrorCode::ScenarioMismatch,
           "no two-primary equilibrium constructor for n > 2; use the extension checks");
  }
}

EquilibriumProfile all_acquire_profile(const MarketParams& raw) {
  check_ranges(raw);
  if (raw.qs != 1) fail(ErrorCode::Domain, "all-acquire witness assumes qs = 1");
  EquilibriumProfile prof;
  prof.regime.scenario = classify(raw);
  prof.regime.cost_band = CostBand::BothMix;
  prof.strategies = {bertrand_strategy(raw.c, raw.v), bertrand_strategy(raw.c, raw.v)};
  const double vc = raw.v - raw.c;
  prof.payoffs = {vc * (1 - raw.q2) - raw.s1, vc * (1 - raw.q1) - raw.s2};
  return prof;
}

EquilibriumProfile pure_y_vs_pure_n_profile(const MarketParams& raw, int y) {
  bool sw;
  Scenario sc;
  MarketParams p = canonical_for(raw, {Scenario::Basic}, "pure_y_vs_pure_n_profile", sw, sc);
  if (y != 0 && y != 1) fail(ErrorCode::Domain, "primary index must be 0 or 1");
  const double v = p.v, c = p.c, q = p.q1, vc = v - c, base = vc * (1 - q);
  PrimaryStrategy ys;
  ys.p_acquire = 1;
  ys.cdf_by_info.emplace(InfoState::AcquiredEst1, phi_cdf(v, c, q));
  ys.cdf_by_info.emplace(InfoState::AcquiredEst0, PriceCdf::point_mass(c, v, v));
  PrimaryStrategy ns = pure_n_strategy(PriceCdf::from_segments(c, v, {hseg(c, c + base, v, 1.0, base)}));
  EquilibriumProfile prof;
  prof.regime = thresholds(p);
  prof.strategies[y] = ys;
  prof.strategies[1 - y] = ns;
  prof.payoffs[y] = base + q * base - p.s1;
  prof.payoffs[1 - y] = base;
  prof.endpoints["pt"] = c + base;
  return prof;
}

EquilibriumProfile pure_n_profile(const MarketParams& raw) {
  bool sw;
  Scenario sc;
  MarketParams p = canonical_for(raw, {Scenario::Basic}, "pure_n_profile", sw, sc);
  EquilibriumProfile prof;
  prof.regime = thresholds(p);
  PriceCdf phi = phi_cdf(p.v, p.c, p.q1);
  prof.strategies = {pure_n_strategy(phi), pure_n_strategy(phi)};
  double base = (p.v - p.c) * (1 - p.q1);
  prof.payoffs = {base, base};
  prof.endpoints["pt"] = p.c + base;
  return prof;
}

}  // namespace specprice
