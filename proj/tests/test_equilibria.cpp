#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "specprice/equilibria.hpp"
#include "specprice/error.hpp"

using namespace specprice;
using doctest::Approx;

namespace {

MarketParams mp(double v, double c, double q1, double q2, double s1, double s2, double qs = 1) {
  MarketParams p;
  p.v = v;
  p.c = c;
  p.q1 = q1;
  p.q2 = q2;
  p.s1 = s1;
  p.s2 = s2;
  p.qs = qs;
  return p;
}

MarketParams sym(double v, double c, double q, double s, double qs = 1) {
  return mp(v, c, q, q, s, s, qs);
}

double lo_of(const EquilibriumProfile& pr, int i, InfoState info) {
  return pr.strategies[i].cdf(info).support_lo();
}
double hi_of(const EquilibriumProfile& pr, int i, InfoState info) {
  return pr.strategies[i].cdf(info).support_hi();
}

}  // namespace

TEST_CASE("threshold examples") {
  CHECK(thresholds(sym(11, 1, 0.5, 1)).threshold("T") == Approx(2.5));
  CHECK(thresholds(sym(50, 0, 0.5, 1, 0.75)).threshold("T") == Approx(6.25));
  Regime r = thresholds(mp(25, 0, 0.7, 0.4, 1, 1));
  CHECK(r.threshold("T1") == Approx(6));
  CHECK(r.threshold("T2") == Approx(30.0 / 7));
  // the boundary itself is pure N
  CHECK(thresholds(sym(11, 1, 0.5, 2.5)).cost_band == CostBand::PureN);
  CHECK(thresholds(sym(11, 1, 0.5, 2.4999)).cost_band == CostBand::BothMix);
}

TEST_CASE("basic: worked example") {
  auto pr = ne_basic(sym(50, 0, 0.5, 8));
  CHECK(pr.regime.cost_band == CostBand::BothMix);
  CHECK(pr.strategies[0].p_acquire == Approx(9.0 / 17).epsilon(1e-12));
  CHECK(pr.strategies[1].p_acquire == Approx(9.0 / 17).epsilon(1e-12));
  CHECK(lo_of(pr, 0, InfoState::AcquiredEst1) == Approx(16).epsilon(1e-12));
  CHECK(hi_of(pr, 0, InfoState::AcquiredEst1) == Approx(34).epsilon(1e-12));
  CHECK(lo_of(pr, 0, InfoState::NoAcquire) == Approx(34).epsilon(1e-12));
  CHECK(hi_of(pr, 0, InfoState::NoAcquire) == Approx(50).epsilon(1e-12));
  CHECK(pr.payoffs[0] == 25.0);
  CHECK(pr.payoffs[1] == 25.0);
  // independent enumeration of the game
  CHECK(oracle::enum_payoff(sym(50, 0, 0.5, 8), 0, pr.strategies) == Approx(25).epsilon(2e-3));
}

TEST_CASE("basic: limits and fig-2 style maximum") {
  auto zero = ne_basic(sym(50, 0, 0.5, 0));
  CHECK(zero.strategies[0].p_acquire == 1.0);
  CHECK(zero.payoffs[0] == Approx(25));

  auto near = ne_basic(sym(11, 1, 0.55, 2));
  CHECK(near.strategies[0].p_acquire == Approx(0.346).epsilon(0.003));
  // brute-force maximizer over q
  double best_q = 0, best_p = -1;
  for (int k = 1; k < 10000; ++k) {
    double q = k / 10000.0;
    double p = ne_basic(sym(11, 1, q, 2)).strategies[0].p_acquire;
    if (p > best_p) {
      best_p = p;
      best_q = q;
    }
  }
  CHECK(best_q == Approx(1 - std::sqrt(2.0 / 10)).epsilon(2e-4));
}

TEST_CASE("[T,p] shape across scenarios") {
  struct Case {
    MarketParams p;
    double T;
  };
  std::vector<Case> cases = {
      {sym(11, 1, 0.5, 0), 2.5},
      {sym(50, 0, 0.5, 0, 0.8), 50 * 0.5 * (2 * 0.5 * 0.8 - 0.5)},
      {mp(25, 0, 0.7, 0.4, 0, 0), 6},
  };
  for (const auto& cs : cases) {
    double prev = 2;
    for (int k = 0; k < 100; ++k) {
      double s = cs.T * 1.2 * k / 99.0;
      MarketParams p = cs.p;
      p.s1 = p.s2 = s;
      double pa = solve(p).strategies[0].p_acquire;
      if (s >= cs.T) {
        CHECK(pa == 0.0);
      } else {
        CHECK(pa > 0);
        CHECK(pa < prev);
      }
      prev = pa;
    }
    MarketParams tiny = cs.p;
    tiny.s1 = tiny.s2 = 1e-9;
    CHECK(solve(tiny).strategies[0].p_acquire == Approx(1).epsilon(1e-6));
  }
}

TEST_CASE("basic payoff is constant in s") {
  for (int k = 0; k <= 60; ++k) {
    double s = 15.0 * k / 60;
    auto pr = ne_basic(sym(50, 0, 0.5, s));
    CHECK(pr.payoffs[0] == Approx(25).epsilon(1e-12));
    CHECK(pr.payoffs[1] == Approx(25).epsilon(1e-12));
  }
}

TEST_CASE("estimation error: mixing root") {
  MarketParams p = sym(50, 0, 0.5, 4, 0.8);
  double pm = solve_error_mixing(p);
  // reference root from an independent scipy brentq on the same equation
  CHECK(pm == Approx(0.5781542603111296).epsilon(1e-9));
  CHECK(std::fabs(error_mixing_residual(p, pm)) <= 1e-10 * 50);
  CHECK(error_mixing_residual(p, 1e-12) < 0);
  CHECK(error_mixing_residual(p, 1 - 1e-12) > 0);

  CHECK(solve_error_mixing(sym(50, 0, 0.5, 8, 1.0)) == Approx(9.0 / 17).epsilon(1e-9));

  double T = 50 * 0.5 * (2 * 0.5 * 0.8 - 0.5);
  CHECK(solve_error_mixing(sym(50, 0, 0.5, T * (1 - 1e-7), 0.8)) < 1e-5);
  CHECK_THROWS_AS(solve_error_mixing(sym(50, 0, 0.5, T, 0.8)), Error);
}

TEST_CASE("estimation error: equilibrium") {
  MarketParams p = sym(50, 0, 0.5, 4, 0.8);
  auto pr = ne_estimation_error(p);
  CHECK(pr.payoffs[0] == Approx(27.107165).epsilon(1e-6));
  CHECK(pr.payoffs[0] > 25);
  // supports are disjoint and ordered Est1 | N | Est0
  double a = lo_of(pr, 0, InfoState::AcquiredEst1), b = hi_of(pr, 0, InfoState::AcquiredEst1);
  double c = lo_of(pr, 0, InfoState::NoAcquire), d = hi_of(pr, 0, InfoState::NoAcquire);
  double e = lo_of(pr, 0, InfoState::AcquiredEst0), f = hi_of(pr, 0, InfoState::AcquiredEst0);
  CHECK(b == Approx(c).epsilon(1e-12));
  CHECK(d == Approx(e).epsilon(1e-12));
  CHECK(f == Approx(50));
  // within 10% of coarse reference endpoints
  CHECK(std::fabs(a - 21.08) / 21.08 < 0.10);
  CHECK(std::fabs(b - 38.3) / 38.3 < 0.10);
  CHECK(std::fabs(d - 48.3) / 48.3 < 0.10);
  // payoff identity: N at its lower end equals Y aggregated over estimates
  double e1 = prob_est1(0.5, 0.8);
  CHECK(pr.endpoint("pt2") ==
        Approx((pr.endpoint("pt1")) * e1 + pr.endpoint("pt3") * (1 - e1) - 4).epsilon(1e-12));
  CHECK(oracle::enum_payoff(p, 0, pr.strategies) == Approx(pr.payoffs[0]).epsilon(2e-3));
}

TEST_CASE("estimation error: payoff decreasing in s and above the basic payoff") {
  const double T = 50 * 0.5 * (2 * 0.5 * 0.8 - 0.5);
  double prev = 1e300;
  for (int k = 1; k < 100; ++k) {
    double s = T * k / 100;
    auto pr = ne_estimation_error(sym(50, 0, 0.5, s, 0.8));
    CHECK(pr.payoffs[0] > 25);
    CHECK(pr.payoffs[0] < prev);
    prev = pr.payoffs[0];
  }
}

TEST_CASE("estimation error reduces to the basic model") {
  auto basic = ne_basic(sym(50, 0, 0.5, 8));
  auto err1 = ne_estimation_error(sym(50, 0, 0.5, 8, 1.0));
  CHECK(err1.strategies[0].p_acquire == basic.strategies[0].p_acquire);
  CHECK(err1.payoffs[0] == basic.payoffs[0]);
  auto close = ne_estimation_error(sym(50, 0, 0.5, 8, 1 - 1e-9));
  CHECK(close.strategies[0].p_acquire == Approx(basic.strategies[0].p_acquire).epsilon(1e-6));
  CHECK(close.payoffs[0] == Approx(25).epsilon(1e-6));
  CHECK(close.endpoint("pt1") == Approx(basic.endpoint("pt1")).epsilon(1e-5));
  CHECK(close.endpoint("LN") == Approx(basic.endpoint("pt2")).epsilon(1e-5));
}

TEST_CASE("unequal costs: worked examples") {
  auto both = ne_unequal_costs(mp(50, 0, 0.5, 0.5, 4, 8));
  CHECK(both.regime.cost_band == CostBand::BothMix);
  CHECK(both.strategies[0].p_acquire == Approx(0.80952).epsilon(1e-5));
  CHECK(both.strategies[1].p_acquire == Approx(0.52941).epsilon(1e-5));
  CHECK(both.endpoint("L") == Approx(16));
  CHECK(both.endpoint("pt2") == Approx(34));
  CHECK(both.endpoint("pt1") == Approx(42));
  CHECK(both.payoffs[0] == Approx(29));
  CHECK(both.payoffs[1] == Approx(25));
  CHECK(oracle::enum_payoff(mp(50, 0, 0.5, 0.5, 4, 8), 0, both.strategies) == Approx(29).epsilon(2e-3));
  CHECK(oracle::enum_payoff(mp(50, 0, 0.5, 0.5, 4, 8), 1, both.strategies) == Approx(25).epsilon(2e-3));

  auto one = ne_unequal_costs(mp(50, 0, 0.5, 0.5, 4, 13));
  CHECK(one.regime.cost_band == CostBand::OneSidedMix);
  CHECK(one.strategies[0].p_acquire == Approx(0.80952).epsilon(1e-5));
  CHECK(one.strategies[1].p_acquire == 0.0);
  CHECK(one.payoffs[0] == Approx(33.5));
  CHECK(one.payoffs[1] == Approx(25));
  CHECK(oracle::enum_payoff(mp(50, 0, 0.5, 0.5, 4, 13), 0, one.strategies) == Approx(33.5).epsilon(2e-3));
  // the high-cost primary's blind price has a jump at v
  CHECK(one.strategies[1].cdf(InfoState::NoAcquire).jump > 0);

  auto sym_case = ne_unequal_costs(sym(50, 0, 0.5, 8));
  auto basic = ne_basic(sym(50, 0, 0.5, 8));
  CHECK(sym_case.strategies[0].p_acquire == basic.strategies[0].p_acquire);
  CHECK(sym_case.payoffs == basic.payoffs);
}

TEST_CASE("unequal costs: p1 agrees between the two mixed bands") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 2000; ++k) {
    double v = 5 + 100 * U(rng), c = 3 * U(rng), q = 0.02 + 0.96 * U(rng);
    double T = q * (v - c) * (1 - q);
    double s1 = T * U(rng);
    double base = (v - c) * (1 - q);
    double one_sided = (1 / q) * (1 - (v - c) * (1 - q) * (1 - q) / (base - s1));
    double both = (T - s1) / (T - q * s1);
    CHECK(one_sided == Approx(both).epsilon(1e-12));
    // and the constructor uses them consistently across s2 = T
    auto a = ne_unequal_costs(mp(v, c, q, q, s1, T * (1 - 1e-9)));
    auto b = ne_unequal_costs(mp(v, c, q, q, s1, T));
    CHECK(a.strategies[0].p_acquire == Approx(b.strategies[0].p_acquire).epsilon(1e-12));
    CHECK(a.payoffs[0] == Approx(b.payoffs[0]).epsilon(1e-7));
    CHECK(a.payoffs[1] == Approx(base).epsilon(1e-12));
    CHECK(b.payoffs[1] == Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("unequal availability: worked examples") {
  auto mid = ne_unequal_availability(mp(25, 0, 0.7, 0.4, 5, 5));
  CHECK(mid.regime.cost_band == CostBand::OneSidedMix);
  CHECK(mid.strategies[0].p_acquire == Approx(0.35714).epsilon(1e-5));
  CHECK(mid.strategies[1].p_acquire == 0.0);
  CHECK(mid.endpoint("L") == Approx(12.5));
  CHECK(mid.payoffs[0] == Approx(15));
  CHECK(mid.payoffs[1] == Approx(12.5));

  auto low = ne_unequal_availability(mp(25, 0, 0.7, 0.4, 2, 2));
  CHECK(low.regime.cost_band == CostBand::BothMix);
  CHECK(low.strategies[0].p_acquire == Approx(0.83516).epsilon(1e-5));
  CHECK(low.strategies[1].p_acquire == Approx(0.72727).epsilon(1e-5));
  CHECK(low.strategies[0].p_acquire > low.strategies[1].p_acquire);
  CHECK(low.endpoint("L") == Approx(5));
  CHECK(low.payoffs[0] == Approx(15));
  CHECK(low.payoffs[1] == Approx(9));

  auto pure = ne_unequal_availability(mp(25, 0, 0.7, 0.4, 6, 6));
  CHECK(pure.regime.cost_band == CostBand::PureN);
  CHECK(pure.payoffs[0] == Approx(15));
  CHECK(pure.payoffs[1] == Approx(15));
  CHECK(pure.strategies[0].cdf(InfoState::NoAcquire).jump == Approx(3.0 / 7).epsilon(1e-12));

  for (double s : {6.0, 5.0, 2.0}) {
    MarketParams p = mp(25, 0, 0.7, 0.4, s, s);
    auto pr = ne_unequal_availability(p);
    CHECK(oracle::enum_payoff(p, 0, pr.strategies) == Approx(pr.payoffs[0]).epsilon(2e-3));
    CHECK(oracle::enum_payoff(p, 1, pr.strategies) == Approx(pr.payoffs[1]).epsilon(2e-3));
  }
}

TEST_CASE("unequal availability: low-availability payoff continuous at T2, slope 1/q2") {
  const double q1 = 0.7, q2 = 0.4, T2 = 30.0 / 7;
  auto below = ne_unequal_availability(mp(25, 0, q1, q2, T2 * (1 - 1e-10), T2 * (1 - 1e-10)));
  auto at = ne_unequal_availability(mp(25, 0, q1, q2, T2, T2));
  CHECK(below.payoffs[1] == Approx(at.payoffs[1]).epsilon(1e-8));
  double prev = -1;
  for (int k = 1; k < 100; ++k) {
    double s = 6.0 * k / 100;
    auto pr = ne_unequal_availability(mp(25, 0, q1, q2, s, s));
    CHECK(pr.payoffs[1] >= prev);
    if (pr.regime.cost_band == CostBand::OneSidedMix) CHECK(pr.payoffs[1] == Approx(s / q2));
    prev = pr.payoffs[1];
  }
}

TEST_CASE("every constructed profile is structurally sound") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 400; ++k) {
    double v = 5 + 60 * U(rng), c = 2 * U(rng), vc = v - c;
    MarketParams p;
    switch (k % 4) {
      case 0: p = sym(v, c, 0.05 + 0.9 * U(rng), 0.3 * vc * U(rng)); break;
      case 1: p = sym(v, c, 0.05 + 0.9 * U(rng), 0.3 * vc * U(rng), 0.51 + 0.49 * U(rng)); break;
      case 2: {
        double q = 0.05 + 0.9 * U(rng), s1 = 0.2 * vc * U(rng);
        p = mp(v, c, q, q, s1, s1 + 0.1 * vc * U(rng));
        break;
      }
      case 3: {
        double s = 0.3 * vc * U(rng);
        p = mp(v, c, 0.05 + 0.9 * U(rng), 0.05 + 0.9 * U(rng), s, s);
        break;
      }
    }
    auto pr = solve(p);
    for (const auto& [name, x] : pr.endpoints) {
      CHECK_MESSAGE(x > c, name);
      CHECK_MESSAGE(x <= v + 1e-9, name);
    }
    for (const auto& st : pr.strategies) {
      CHECK(st.p_acquire >= 0);
      CHECK(st.p_acquire < 1);
      for (const auto& [info, d] : st.cdf_by_info) CHECK(validate_cdf(d).empty());
      if (st.has(InfoState::AcquiredEst1) && st.has(InfoState::NoAcquire))
        CHECK(st.cdf(InfoState::AcquiredEst1).support_hi() <=
              st.cdf(InfoState::NoAcquire).support_lo() + 1e-9);
      if (st.p_acquire == 0) CHECK_FALSE(st.has(InfoState::AcquiredEst1));
    }
  }
}

TEST_CASE("labels follow the caller's order") {
  auto fwd = solve(mp(50, 0, 0.5, 0.5, 4, 8));
  auto rev = solve(mp(50, 0, 0.5, 0.5, 8, 4));
  CHECK(rev.swapped);
  CHECK(rev.payoffs[0] == fwd.payoffs[1]);
  CHECK(rev.payoffs[1] == fwd.payoffs[0]);
  CHECK(rev.strategies[0].p_acquire == fwd.strategies[1].p_acquire);
}

TEST_CASE("constructors reject other scenarios") {
  CHECK_THROWS_AS(ne_basic(mp(50, 0, 0.5, 0.5, 4, 8)), Error);
  CHECK_THROWS_AS(ne_unequal_costs(mp(25, 0, 0.7, 0.4, 5, 5)), Error);
  CHECK_THROWS_AS(ne_unequal_availability(sym(50, 0, 0.5, 4, 0.8)), Error);
  try {
    ne_basic(mp(50, 0, 0.5, 0.5, 4, 8));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScenarioMismatch);
  }
}
