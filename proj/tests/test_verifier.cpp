#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "specprice/error.hpp"
#include "specprice/simulator.hpp"
#include "specprice/verifier.hpp"

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

PrimaryStrategy always_v(double c, double v) {
  PrimaryStrategy st;
  st.p_acquire = 0;
  st.cdf_by_info.emplace(InfoState::NoAcquire, PriceCdf::point_mass(c, v, v));
  return st;
}

// one point per band per scenario
std::vector<MarketParams> band_points() {
  return {
      sym(50, 0, 0.5, 8),            // basic, mixed
      sym(50, 0, 0.5, 15),           // basic, pure N
      sym(50, 0, 0.5, 4, 0.8),       // error, mixed
      sym(50, 0, 0.5, 7, 0.8),       // error, pure N
      mp(50, 0, 0.5, 0.5, 4, 8),     // costs, both mix
      mp(50, 0, 0.5, 0.5, 4, 13),    // costs, one-sided
      mp(25, 0, 0.7, 0.4, 2, 2),     // availability, both mix
      mp(25, 0, 0.7, 0.4, 5, 5),     // availability, one-sided
      mp(25, 0, 0.7, 0.4, 6.5, 6.5), // availability, pure N
  };
}

}  // namespace

TEST_CASE("win probability examples") {
  MarketParams p = sym(50, 0, 0.5, 8);
  auto pr = ne_basic(p);
  CHECK(win_probability(p, 0, InfoState::NoAcquire, 50 - 1e-9, pr.strategies[1]) ==
        Approx(0.5).epsilon(1e-6));
  PrimaryStrategy v_only = always_v(0, 50);
  CHECK(win_probability(p, 0, InfoState::NoAcquire, 30, v_only) == 1.0);
  CHECK(win_probability(p, 0, InfoState::NoAcquire, 50, v_only) == Approx(1 - 0.5 / 2));
  CHECK_THROWS_AS(win_probability(p, 0, InfoState::NoAcquire, 0, v_only), Error);
  CHECK_THROWS_AS(win_probability(p, 0, InfoState::NoAcquire, -1, v_only), Error);
  CHECK_THROWS_AS(win_probability(p, 0, InfoState::NoAcquire, 50.5, v_only), Error);
}

TEST_CASE("expected payoff examples") {
  MarketParams p = sym(50, 0, 0.5, 8);
  auto pr = ne_basic(p);
  for (double x = 34; x < 50; x += 0.37)
    CHECK(expected_payoff(p, 0, InfoState::NoAcquire, x, pr.strategies[1]) == Approx(25).epsilon(1e-12));
  CHECK(expected_payoff(p, 0, InfoState::NoAcquire, 0, pr.strategies[1]) == 0.0);
  CHECK(expected_payoff(p, 0, InfoState::AcquiredEst1, 0, pr.strategies[1]) == -8.0);

  MarketParams ua = mp(25, 0, 0.7, 0.4, 5, 5);
  auto mid = ne_unequal_availability(ua);
  double L = mid.endpoint("L");
  for (double x = L; x < 25; x += 0.5)
    CHECK(expected_payoff(ua, 1, InfoState::NoAcquire, x, mid.strategies[0]) == Approx(5 / 0.4).epsilon(1e-12));
}

TEST_CASE("on-support indifference and off-support dominance") {
  for (const auto& p : band_points()) {
    auto pr = solve(p);
    for (int me = 0; me < 2; ++me) {
      const auto& own = pr.strategies[me];
      const auto& opp = pr.strategies[1 - me];
      for (const auto& [info, d] : own.cdf_by_info) {
        if (info == InfoState::AcquiredEst0 && p.qs == 1) continue;  // unreachable
        if (d.segments.empty()) continue;
        double ref = expected_payoff(p, me, info, d.support_lo(), opp);
        for (int k = 0; k <= 200; ++k) {
          double x = d.support_lo() + (d.support_hi() - d.support_lo()) * k / 200.0;
          if (x >= p.v) x = p.v - 1e-9 * (p.v - p.c);
          CHECK(expected_payoff(p, me, info, x, opp) == Approx(ref).epsilon(1e-9).scale(p.v - p.c));
        }
        for (int k = 1; k < 400; ++k) {
          double x = p.c + (p.v - p.c) * k / 400.0;
          CHECK(expected_payoff(p, me, info, x, opp) <= ref + 1e-9 * (p.v - p.c));
        }
      }
    }
  }
}

TEST_CASE("certification of each band") {
  for (const auto& p : band_points()) {
    auto pr = solve(p);
    auto rep = certify_ne(p, pr, 10000);
    CHECK(rep.max_gain <= 1e-6 * (p.v - p.c));
    for (const auto& row : rep.rows) {
      CHECK(row.gain >= -1e-9);
      CHECK(row.eq_payoff == Approx(pr.payoffs[row.primary]).epsilon(1e-9));
    }
  }
}

TEST_CASE("non-equilibrium witnesses") {
  for (double s : {0.5, 3.0, 8.0}) {
    MarketParams p = sym(50, 0, 0.5, s);
    auto all = all_acquire_profile(p);
    DeviationRow row = best_response(p, 0, all.strategies[0], all.strategies[1], 1000);
    CHECK(row.eq_payoff == Approx(25 - s).epsilon(1e-12));
    CHECK(row.gain == Approx(s).epsilon(1e-9));
    CHECK(row.best_decision == Decision::NoAcquire);
    CHECK(row.best_price == Approx(50));
  }

  MarketParams p = sym(50, 0, 0.5, 8);
  auto yn = pure_y_vs_pure_n_profile(p, 0);
  auto rep = certify_ne(p, yn, 2000);
  CHECK(rep.rows[0].gain > 1e-3);
  CHECK(rep.max_gain > 1e-3);

  auto pn = pure_n_profile(p);
  auto rep2 = certify_ne(p, pn, 2000);
  CHECK(rep2.rows[0].gain > 1e-3);
  CHECK(rep2.rows[0].best_decision == Decision::Acquire);
  // above the threshold the same profile is the equilibrium
  MarketParams hi = sym(50, 0, 0.5, 13);
  CHECK(certify_ne(hi, pure_n_profile(hi), 2000).max_gain <= 1e-6 * 50);
}

TEST_CASE("perturbing the mixing probability breaks indifference") {
  for (const auto& p : {sym(50, 0, 0.5, 8), sym(50, 0, 0.5, 4, 0.8)}) {
    auto pr = solve(p);
    PrimaryStrategy opp = pr.strategies[1];
    opp.p_acquire += 0.1;
    DeviationRow row = best_response(p, 0, pr.strategies[0], opp, 2000);
    CHECK(row.gain > 1e-3);
  }
}

TEST_CASE("epsilon shrinks as the grid is refined") {
  // a profile that is close to, but not exactly, an equilibrium exposes grid effects
  MarketParams p = sym(50, 0, 0.5, 8);
  auto pr = ne_basic(p);
  PrimaryStrategy opp = pr.strategies[1];
  opp.p_acquire += 1e-3;
  double prev = -1;
  for (int g : {100, 1000, 10000}) {
    double gain = best_response(p, 0, pr.strategies[0], opp, g).gain;
    CHECK(gain >= prev - 1e-12);
    prev = gain;
  }
}

TEST_CASE("structural checks") {
  for (const auto& p : band_points()) CHECK(structural_checks(solve(p)).ok());

  auto pr = ne_basic(sym(50, 0, 0.5, 8));
  pr.strategies[0].cdf_by_info[InfoState::NoAcquire] = PriceCdf::point_mass(0, 50, 40);
  CHECK_FALSE(structural_checks(pr).ok());

  auto uneq = ne_unequal_costs(mp(50, 0, 0.5, 0.5, 4, 8));
  CHECK(uneq.strategies[1].cdf(InfoState::NoAcquire).jump > 0);
  CHECK(structural_checks(uneq).ok());
  // a second atom at v on the low-cost primary is flagged
  uneq.strategies[0].cdf_by_info[InfoState::NoAcquire] = uneq.strategies[1].cdf(InfoState::NoAcquire);
  CHECK_FALSE(structural_checks(uneq).ok());

  auto unequal_mix = ne_basic(sym(50, 0, 0.5, 8));
  unequal_mix.strategies[1].p_acquire = 0.4;
  CHECK_FALSE(structural_checks(unequal_mix).ok());
}

TEST_CASE("expected_payoff agrees with a simulated fixed-price deviation") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> U(0, 1);
  const std::uint64_t rounds = 100000;
  int checked = 0, outside = 0;
  for (const auto& p : {sym(50, 0, 0.5, 8), sym(50, 0, 0.5, 4, 0.8), mp(50, 0, 0.5, 0.5, 4, 8),
                        mp(25, 0, 0.7, 0.4, 2, 2)}) {
    auto pr = solve(p);
    for (int k = 0; k < 40; ++k) {
      int me = k % 2;
      bool acquire = (k / 2) % 2;
      double x = p.c + (p.v - p.c) * (0.05 + 0.95 * U(rng));
      PrimaryStrategy dev;
      dev.p_acquire = acquire ? 1 : 0;
      PriceCdf at_x = PriceCdf::point_mass(p.c, p.v, x);
      if (acquire) {
        dev.cdf_by_info.emplace(InfoState::AcquiredEst1, at_x);
        dev.cdf_by_info.emplace(InfoState::AcquiredEst0, at_x);
      } else {
        dev.cdf_by_info.emplace(InfoState::NoAcquire, at_x);
      }
      SimConfig cfg;
      cfg.rounds = rounds;
      cfg.seed = 1000 + k;
      cfg.params = p;
      cfg.strategies = pr.strategies;
      cfg.strategies[me] = dev;
      SimStats st = run_market(cfg);
      const double q_opp = me == 0 ? p.q2 : p.q1;
      double analytic;
      if (acquire) {
        double e1 = prob_est1(q_opp, p.qs);
        analytic = e1 * expected_payoff(p, me, InfoState::AcquiredEst1, x, pr.strategies[1 - me]) +
                   (1 - e1) * expected_payoff(p, me, InfoState::AcquiredEst0, x, pr.strategies[1 - me]);
      } else {
        analytic = expected_payoff(p, me, InfoState::NoAcquire, x, pr.strategies[1 - me]);
      }
      const auto& est = st.primary[me].payoff;
      // summation rounding when the payoff is deterministic
      const double slack = 1e-9 * (p.v - p.c);
      ++checked;
      if (std::fabs(est.mean - analytic) > 3 * est.std_error + slack) ++outside;
      // 4 sigma is a hard failure; 3 sigma misses are counted
      CHECK(std::fabs(est.mean - analytic) <= 4 * est.std_error + slack);
    }
  }
  // about 0.3% expected outside 3 sigma
  CHECK(outside <= 3);
  CHECK(checked == 160);
}

TEST_CASE("oracle agreement: enumeration matches the verifier's own value") {
  for (const auto& p : band_points()) {
    auto pr = solve(p);
    for (int me = 0; me < 2; ++me) {
      double enumerated = oracle::enum_payoff(p, me, pr.strategies);
      DeviationRow row = best_response(p, me, pr.strategies[me], pr.strategies[1 - me], 1000);
      CHECK(enumerated == Approx(row.eq_payoff).epsilon(3e-3));
    }
  }
}
