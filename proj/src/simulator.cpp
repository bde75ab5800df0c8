#include "specprice/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "specprice/error.hpp"

namespace specprice {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kShard = 1u << 16;

struct Acc {
  std::uint64_t n = 0;
  double sum = 0, sumsq = 0;
  void add(double x) {
    ++n;
    sum += x;
    sumsq += x * x;
  }
  void merge(const Acc& o) {
    n += o.n;
    sum += o.sum;
    sumsq += o.sumsq;
  }
  double variance() const {
    if (n < 2) return 0;
    double m = sum / n;
    return std::max(0.0, (sumsq - n * m * m) / (n - 1));
  }
  Estimate estimate() const {
    Estimate e;
    e.count = n;
    if (n == 0) return e;
    e.mean = sum / n;
    e.std_error = std::sqrt(variance() / n);
    return e;
  }
};

struct PrimaryAcc {
  Acc payoff, payoff_uncond, sale, acquire, correct, posted;
  void merge(const PrimaryAcc& o) {
    payoff.merge(o.payoff);
    payoff_uncond.merge(o.payoff_uncond);
    sale.merge(o.sale);
    acquire.merge(o.acquire);
    correct.merge(o.correct);
    posted.merge(o.posted);
  }
};

struct ShardAcc {
  std::array<PrimaryAcc, 2> pr;
  Acc price, sale_any;
  void merge(const ShardAcc& o) {
    pr[0].merge(o.pr[0]);
    pr[1].merge(o.pr[1]);
    price.merge(o.price);
    sale_any.merge(o.sale_any);
  }
};

void require_cdfs(const SimConfig& cfg) {
  for (int i = 0; i < 2; ++i) {
    const PrimaryStrategy& st = cfg.strategies[i];
    if (st.p_acquire < 0 || st.p_acquire > 1)
      fail(ErrorCode::Domain, "acquisition probability outside [0,1]");
    auto need = [&](InfoState info) {
      if (!st.has(info))
        fail(ErrorCode::MissingCdf, "primary " + std::to_string(i + 1) + " lacks a CDF for " +
                                        to_string(info));
    };
    if (st.p_acquire < 1) need(InfoState::NoAcquire);
    if (st.p_acquire > 0) {
      need(InfoState::AcquiredEst1);
      need(InfoState::AcquiredEst0);
    }
  }
}

ShardAcc run_shard(const SimConfig& cfg, std::uint64_t shard, std::uint64_t rounds) {
  const MarketParams& p = cfg.params;
  std::array<std::mt19937_64, 2> rng{std::mt19937_64(derive_seed(cfg.seed, shard, 0)),
                                     std::mt19937_64(derive_seed(cfg.seed, shard, 1))};
  std::mt19937_64 market(derive_seed(cfg.seed, shard, 2));
  const std::array<double, 2> q{p.q1, p.q2}, s{p.s1, p.s2};
  ShardAcc acc;
  for (std::uint64_t r = 0; r < rounds; ++r) {
    std::array<bool, 2> avail;
    for (int i = 0; i < 2; ++i) avail[i] = uniform01(rng[i]) < q[i];
    std::array<double, 2> price{0, 0}, cost{0, 0};
    for (int i = 0; i < 2; ++i) {
      if (!avail[i]) continue;
      const PrimaryStrategy& st = cfg.strategies[i];
      bool acq = uniform01(rng[i]) < st.p_acquire;
      InfoState info = InfoState::NoAcquire;
      if (acq) {
        bool truth = avail[1 - i];
        bool correct = uniform01(rng[i]) < p.qs;
        bool est = correct ? truth : !truth;
        info = est ? InfoState::AcquiredEst1 : InfoState::AcquiredEst0;
        cost[i] = s[i];
        acc.pr[i].correct.add(correct ? 1.0 : 0.0);
      }
      acc.pr[i].acquire.add(acq ? 1.0 : 0.0);
      price[i] = sample(st.cdf_by_info.at(info), rng[i]);
      acc.pr[i].posted.add(price[i]);
    }
    int winner = -1;
    if (avail[0] && avail[1]) {
      if (price[0] < price[1]) winner = 0;
      else if (price[1] < price[0]) winner = 1;
      else winner = uniform01(market) < 0.5 ? 0 : 1;
    } else if (avail[0]) {
      winner = 0;
    } else if (avail[1]) {
      winner = 1;
    }
    acc.sale_any.add(winner >= 0 ? 1.0 : 0.0);
    if (winner >= 0) acc.price.add(price[winner]);
    for (int i = 0; i < 2; ++i) {
      if (!avail[i]) {
        acc.pr[i].payoff_uncond.add(0.0);
        continue;
      }
      bool sold = winner == i;
      double pay = (sold ? price[i] - p.c : 0.0) - cost[i];
      acc.pr[i].payoff.add(pay);
      acc.pr[i].payoff_uncond.add(pay);
      acc.pr[i].sale.add(sold ? 1.0 : 0.0);
    }
  }
  return acc;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd1342543de82ef95ULL));
}

SimStats run_market(const SimConfig& cfg) {
  if (cfg.rounds < 1) fail(ErrorCode::Domain, "rounds must be >= 1");
  check_ranges(cfg.params);
  require_cdfs(cfg);

  const std::uint64_t nshards = (cfg.rounds + kShard - 1) / kShard;
  std::vector<ShardAcc> shards(nshards);
  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, nshards));
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t k; (k = next.fetch_add(1)) < nshards;) {
      std::uint64_t n = std::min(kShard, cfg.rounds - k * kShard);
      shards[k] = run_shard(cfg, k, n);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  ShardAcc all;
  for (const auto& sh : shards) all.merge(sh);  // fixed order keeps sums bit-identical

  SimStats out;
  for (int i = 0; i < 2; ++i) {
    const PrimaryAcc& a = all.pr[i];
    PrimaryStats& ps = out.primary[i];
    ps.payoff = a.payoff.estimate();
    ps.payoff_uncond = a.payoff_uncond.estimate();
    ps.sale = a.sale.estimate();
    ps.acquire = a.acquire.estimate();
    ps.estimate_correct = a.correct.estimate();
    ps.posted_price = a.posted.estimate();
    ps.posted_price_variance = a.posted.variance();
  }
  out.price = all.price.estimate();
  out.price_variance = all.price.variance();
  out.sale_fraction = all.sale_any.estimate();
  return out;
}

double posted_price_variance(const PrimaryStrategy& st, double q_opp, double qs) {
  std::vector<std::pair<double, const PriceCdf*>> parts;
  double e1 = prob_est1(q_opp, qs);
  if (st.p_acquire < 1) parts.push_back({1 - st.p_acquire, &st.cdf(InfoState::NoAcquire)});
  if (st.p_acquire > 0) {
    parts.push_back({st.p_acquire * e1, &st.cdf(InfoState::AcquiredEst1)});
    parts.push_back({st.p_acquire * (1 - e1), &st.cdf(InfoState::AcquiredEst0)});
  }
  return mixture_moments(parts).variance;
}

std::vector<WelfareRow> welfare_sweep(const MarketParams& params, const std::vector<double>& s_grid,
                                      std::uint64_t rounds, std::uint64_t seed) {
  Scenario sc = classify(params);
  if (sc != Scenario::Basic && sc != Scenario::EstimationError)
    fail(ErrorCode::ScenarioMismatch, "welfare sweep needs the basic or estimation-error setting");
  std::vector<WelfareRow> rows;
  for (size_t k = 0; k < s_grid.size(); ++k) {
    MarketParams p = params;
    p.s1 = p.s2 = s_grid[k];
    EquilibriumProfile prof = solve(p);
    SimConfig cfg;
    cfg.rounds = rounds;
    cfg.seed = derive_seed(seed, 0x5eed, k);
    cfg.params = p;
    cfg.strategies = prof.strategies;
    SimStats st = run_market(cfg);
    WelfareRow row;
    row.s = s_grid[k];
    row.p1 = prof.strategies[0].p_acquire;
    row.p2 = prof.strategies[1].p_acquire;
    row.mean_price = st.price.mean;
    row.mean_price_se = st.price.std_error;
    row.price_variance = st.price_variance;
    row.posted_variance = posted_price_variance(prof.strategies[0], p.q2, p.qs);
    row.payoff1 = st.primary[0].payoff.mean;
    row.payoff1_se = st.primary[0].payoff.std_error;
    row.payoff2 = st.primary[1].payoff.mean;
    row.payoff2_se = st.primary[1].payoff.std_error;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace specprice
