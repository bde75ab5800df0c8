#include "specprice/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specprice/error.hpp"

namespace specprice {

const char* to_string(Decision d) { return d == Decision::Acquire ? "Acquire" : "NoAcquire"; }

namespace {

double opp_q(const MarketParams& p, int me) { return me == 0 ? p.q2 : p.q1; }
double own_s(const MarketParams& p, int me) { return me == 0 ? p.s1 : p.s2; }

// P(opp < x) + half of any atom at x.
double tie_cdf(const PriceCdf& d, double x) { return cdf_below(d, x) + 0.5 * atom_mass(d, x); }

void check_me(int me) {
  if (me != 0 && me != 1) fail(ErrorCode::Domain, "primary index must be 0 or 1");
}

}  // namespace

double win_probability(const MarketParams& params, int me, InfoState info, double x,
                       const PrimaryStrategy& opp) {
  check_me(me);
  if (!(x > params.c) || !(x <= params.v)) {
    std::ostringstream os;
    os << "price " << x << " outside (c, v]";
    fail(ErrorCode::Domain, os.str());
  }
  const double qs = params.qs;
  const double qt = posterior_available(opp_q(params, me), qs, info);
  const double po = opp.p_acquire;
  double below = 0;
  if (po > 0) {
    below += po * qs * tie_cdf(opp.cdf(InfoState::AcquiredEst1), x);
    if (qs < 1) below += po * (1 - qs) * tie_cdf(opp.cdf(InfoState::AcquiredEst0), x);
  }
  if (po < 1) below += (1 - po) * tie_cdf(opp.cdf(InfoState::NoAcquire), x);
  return 1 - qt * below;
}

double expected_payoff(const MarketParams& params, int me, InfoState info, double x,
                       const PrimaryStrategy& opp) {
  check_me(me);
  double cost = info == InfoState::NoAcquire ? 0.0 : own_s(params, me);
  if (x == params.c) return -cost;
  if (x < params.c) fail(ErrorCode::Domain, "price below c");
  return (x - params.c) * win_probability(params, me, info, x, opp) - cost;
}

namespace {

struct Weighted {
  double x, w;
};

// Midpoint quantile nodes of a CDF plus its atom; weights sum to 1.
std::vector<Weighted> quantile_nodes(const PriceCdf& d, int m) {
  std::vector<Weighted> out;
  double cont = 1 - d.jump;
  if (!d.segments.empty() && cont > 0) {
    out.reserve(m + 1);
    for (int j = 0; j < m; ++j) {
      double u = (j + 0.5) / m * cont;
      out.push_back({quantile(d, u), cont / m});
    }
  }
  if (d.jump > 0) out.push_back({d.jump_at, d.jump});
  return out;
}

}  // namespace

DeviationRow best_response(const MarketParams& params, int me, const PrimaryStrategy& own,
                           const PrimaryStrategy& opp, int grid_size) {
  check_me(me);
  if (grid_size < 100) fail(ErrorCode::Domain, "grid_size must be >= 100");
  const double v = params.v, c = params.c, vc = v - c;
  const double delta = 1e-6 * vc;
  const double s = own_s(params, me);
  const double e1 = prob_est1(opp_q(params, me), params.qs), e0 = 1 - e1;

  std::vector<double> xs;
  xs.reserve(grid_size * 5);
  for (int k = 1; k <= grid_size; ++k) xs.push_back(c + vc * k / grid_size);
  auto add_knot = [&](double x) {
    xs.push_back(x);
    xs.push_back(x - delta);
    xs.push_back(x + delta);
  };
  for (const auto& [info, d] : opp.cdf_by_info) {
    for (const auto& sg : d.segments) {
      add_knot(sg.lo);
      add_knot(sg.hi);
    }
    if (d.jump > 0) add_knot(d.jump_at);
  }
  xs.push_back(v);
  xs.push_back(v - delta);

  std::map<InfoState, std::vector<Weighted>> nodes;
  for (const auto& [info, d] : own.cdf_by_info) {
    nodes[info] = quantile_nodes(d, grid_size);
    for (const auto& n : nodes[info]) xs.push_back(n.x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return !(x > c && x <= v); }),
           xs.end());

  auto gross = [&](InfoState info, double x) {
    return x <= c ? 0.0 : (x - c) * win_probability(params, me, info, x, opp);
  };

  DeviationRow row;
  row.primary = me;
  std::map<InfoState, std::pair<double, double>> best;  // price, gross payoff
  for (InfoState info : kAllInfoStates) {
    double bx = c, bv = 0;  // pricing at c always earns zero
    for (double x : xs) {
      double g = gross(info, x);
      if (g > bv) {
        bv = g;
        bx = x;
      }
    }
    best[info] = {bx, bv};
  }

  auto own_gross = [&](InfoState info) {
    double tot = 0;
    for (const auto& n : nodes.at(info)) tot += n.w * gross(info, n.x);
    return tot;
  };

  const double pown = own.p_acquire;
  double own_total = 0;
  for (InfoState info : kAllInfoStates) {
    InfoRow ir;
    ir.info = info;
    double cost = info == InfoState::NoAcquire ? 0.0 : s;
    bool reachable = info == InfoState::NoAcquire ? pown < 1 : pown > 0;
    ir.on_path = reachable && own.has(info);
    if (reachable && !own.has(info))
      fail(ErrorCode::MissingCdf,
           std::string("own strategy lacks CDF for reachable ") + to_string(info));
    ir.best_price = best[info].first;
    ir.best_payoff = best[info].second - cost;
    if (ir.on_path) {
      ir.eq_payoff = own_gross(info) - cost;
      ir.gain = ir.best_payoff - ir.eq_payoff;
    }
    row.by_info.push_back(ir);
  }
  double own_n = row.by_info[0].eq_payoff;
  double own_y = e1 * row.by_info[1].eq_payoff + (e0 > 0 ? e0 * row.by_info[2].eq_payoff : 0.0);
  if (pown < 1) own_total += (1 - pown) * own_n;
  if (pown > 0) own_total += pown * own_y;

  double val_n = best[InfoState::NoAcquire].second;
  double val_y = e1 * best[InfoState::AcquiredEst1].second +
                 e0 * best[InfoState::AcquiredEst0].second - s;
  row.eq_payoff = own_total;
  if (val_y > val_n) {
    row.best_decision = Decision::Acquire;
    row.best_price = best[InfoState::AcquiredEst1].first;
    row.best_price_est0 = best[InfoState::AcquiredEst0].first;
    row.best_payoff = val_y;
  } else {
    row.best_decision = Decision::NoAcquire;
    row.best_price = best[InfoState::NoAcquire].first;
    row.best_payoff = val_n;
  }
  row.gain = row.best_payoff - own_total;
  return row;
}

DeviationReport certify_ne(const MarketParams& params, const EquilibriumProfile& profile,
                           int grid_size) {
  DeviationReport rep;
  for (int i = 0; i < 2; ++i) {
    rep.rows.push_back(
        best_response(params, i, profile.strategies[i], profile.strategies[1 - i], grid_size));
  }
  rep.max_gain = std::max(rep.rows[0].gain, rep.rows[1].gain);
  return rep;
}

StructuralReport structural_checks(const EquilibriumProfile& profile) {
  StructuralReport rep;
  auto add = [&](const std::string& s) { rep.violations.push_back(s); };
  const auto& st = profile.strategies;
  if (st[0].cdf_by_info.empty() || st[1].cdf_by_info.empty()) {
    add("profile has a primary without any CDF");
    return rep;
  }
  const PriceCdf& any = st[0].cdf_by_info.begin()->second;
  const double v = any.v;
  const double tol = kCdfTol * std::max(1.0, std::fabs(v));
  // estimate-0 only meets an available rival when the estimate can be wrong
  bool exact_info = true;
  for (int i = 0; i < 2; ++i)
    for (const auto& [info, d] : st[i].cdf_by_info)
      if (info == InfoState::AcquiredEst0 && !(d.segments.empty() && d.jump_at == v))
        exact_info = false;

  std::array<bool, 2> atom_at_v{false, false};
  for (int i = 0; i < 2; ++i) {
    std::string who = "primary " + std::to_string(i + 1);
    const PrimaryStrategy& ps = st[i];
    if (ps.p_acquire < 0 || ps.p_acquire > 1) add(who + ": acquisition probability outside [0,1]");
    if (ps.p_acquire == 0 && (ps.has(InfoState::AcquiredEst1) || ps.has(InfoState::AcquiredEst0)))
      add(who + ": acquired-state CDF present with p = 0");
    if (ps.p_acquire < 1 && !ps.has(InfoState::NoAcquire)) add(who + ": missing NoAcquire CDF");
    if (ps.p_acquire > 0 && !ps.has(InfoState::AcquiredEst1)) add(who + ": missing AcquiredEst1 CDF");

    std::vector<std::pair<double, double>> spans;
    for (const auto& [info, d] : ps.cdf_by_info) {
      for (const auto& bad : validate_cdf(d))
        add(who + " " + to_string(info) + ": " + bad.kind + ": " + bad.detail);
      bool meets_rival = !(info == InfoState::AcquiredEst0 && exact_info);
      if (meets_rival && d.jump > kCdfTol && std::fabs(d.jump_at - v) <= tol) atom_at_v[i] = true;
      bool reachable = info == InfoState::NoAcquire ? ps.p_acquire < 1 : ps.p_acquire > 0;
      if (reachable) spans.push_back({d.support_lo(), d.support_hi()});
    }
    if (ps.has(InfoState::AcquiredEst1) && ps.has(InfoState::NoAcquire) && ps.p_acquire > 0 &&
        ps.p_acquire < 1) {
      double hi1 = ps.cdf(InfoState::AcquiredEst1).support_hi();
      double loN = ps.cdf(InfoState::NoAcquire).support_lo();
      if (hi1 > loN + tol) add(who + ": AcquiredEst1 support reaches above NoAcquire support");
    }
    std::sort(spans.begin(), spans.end());
    for (size_t k = 1; k < spans.size(); ++k) {
      double reach = spans[0].second;
      for (size_t j = 0; j < k; ++j) reach = std::max(reach, spans[j].second);
      if (spans[k].first > reach + tol) {
        std::ostringstream os;
        os << who << ": supports not contiguous, gap (" << reach << ", " << spans[k].first << ")";
        add(os.str());
      }
    }
  }
  if (atom_at_v[0] && atom_at_v[1]) add("both primaries place an atom at v against an available rival");
  Scenario sc = profile.regime.scenario;
  if ((sc == Scenario::Basic || sc == Scenario::EstimationError) &&
      std::fabs(st[0].p_acquire - st[1].p_acquire) > 1e-12)
    add("symmetric scenario with unequal mixing probabilities");
  return rep;
}

}  // namespace specprice
