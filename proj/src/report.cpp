#include "specprice/report.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "specprice/error.hpp"

namespace specprice {

const char* const kEndpointNames[10] = {"pt", "pt1", "pt2", "pt3", "L",
                                        "LN", "L0",  "pbar", "ptN", "pt1N"};

std::string fmt_num(double x) {
  if (x == 0) x = 0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

nlohmann::ordered_json cdf_json(const PriceCdf& d) {
  nlohmann::ordered_json j;
  j["c"] = d.c_ref;
  j["v"] = d.v;
  auto segs = nlohmann::ordered_json::array();
  for (const auto& s : d.segments)
    segs.push_back({{"lo", s.lo}, {"hi", s.hi}, {"F_lo", s.flo}, {"F_hi", s.fhi}});
  j["segments"] = segs;
  j["jump"] = d.jump;
  j["jump_at"] = d.jump_at;
  auto m = moments(d);
  j["mean"] = m.mean;
  j["variance"] = m.variance;
  return j;
}

}  // namespace

std::string profile_json(const MarketParams& p, const EquilibriumProfile& prof) {
  nlohmann::ordered_json j;
  j["params"] = {{"v", p.v},   {"c", p.c},   {"q1", p.q1}, {"q2", p.q2},
                 {"s1", p.s1}, {"s2", p.s2}, {"qs", p.qs}};
  j["scenario"] = to_string(prof.regime.scenario);
  j["cost_band"] = to_string(prof.regime.cost_band);
  auto th = nlohmann::ordered_json::object();
  for (const auto& [k, val] : prof.regime.thresholds) th[k] = val;
  j["thresholds"] = th;
  j["swapped"] = prof.swapped;
  auto ep = nlohmann::ordered_json::object();
  for (const char* name : kEndpointNames) {
    auto it = prof.endpoints.find(name);
    if (it != prof.endpoints.end()) ep[name] = it->second;
  }
  j["endpoints"] = ep;
  auto prim = nlohmann::ordered_json::array();
  for (int i = 0; i < 2; ++i) {
    nlohmann::ordered_json pj;
    pj["primary"] = i + 1;
    pj["p_acquire"] = prof.strategies[i].p_acquire;
    pj["payoff"] = prof.payoffs[i];
    auto cd = nlohmann::ordered_json::object();
    for (const auto& [info, d] : prof.strategies[i].cdf_by_info) cd[to_string(info)] = cdf_json(d);
    pj["cdfs"] = cd;
    prim.push_back(pj);
  }
  j["primaries"] = prim;
  return j.dump(2) + "\n";
}

std::string cdf_table_csv(const EquilibriumProfile& prof, double c, double v, int points) {
  if (points < 2) fail(ErrorCode::Domain, "need at least 2 grid points");
  std::string out = "primary,info,x,F\n";
  for (int i = 0; i < 2; ++i)
    for (const auto& [info, d] : prof.strategies[i].cdf_by_info)
      for (int k = 0; k < points; ++k) {
        double x = k == points - 1 ? v : c + (v - c) * k / (points - 1);
        out += std::to_string(i + 1) + "," + to_string(info) + "," + fmt_num(x) + "," +
               fmt_num(cdf_eval(d, x)) + "\n";
      }
  return out;
}

std::string sim_stats_csv(const MarketParams& p, const SimStats& st) {
  std::string out = "s,statistic,primary,value,std_error\n";
  const std::string s = fmt_num(p.s1);
  auto row = [&](const char* name, const std::string& who, double val, const std::string& se) {
    out += s + "," + name + "," + who + "," + fmt_num(val) + "," + se + "\n";
  };
  auto est = [&](const char* name, const std::string& who, const Estimate& e) {
    row(name, who, e.mean, fmt_num(e.std_error));
  };
  for (int i = 0; i < 2; ++i) {
    const PrimaryStats& ps = st.primary[i];
    std::string who = std::to_string(i + 1);
    est("payoff", who, ps.payoff);
    est("payoff_unconditional", who, ps.payoff_uncond);
    est("sale_frequency", who, ps.sale);
    est("acquire_frequency", who, ps.acquire);
    est("estimate_correct", who, ps.estimate_correct);
    est("posted_price_mean", who, ps.posted_price);
    row("posted_price_variance", who, ps.posted_price_variance, "");
  }
  est("price_mean", "market", st.price);
  row("price_variance", "market", st.price_variance, "");
  est("sale_fraction", "market", st.sale_fraction);
  return out;
}

std::string deviation_csv(const DeviationReport& rep) {
  std::string out = "primary,info,eq_payoff,best_decision,best_price,best_payoff,gain\n";
  for (const auto& r : rep.rows) {
    std::string who = std::to_string(r.primary + 1);
    for (const auto& ir : r.by_info) {
      out += who + "," + to_string(ir.info) + "," + (ir.on_path ? fmt_num(ir.eq_payoff) : "") +
             "," + (ir.info == InfoState::NoAcquire ? "NoAcquire" : "Acquire") + "," +
             fmt_num(ir.best_price) + "," + fmt_num(ir.best_payoff) + "," +
             (ir.on_path ? fmt_num(ir.gain) : "") + "\n";
    }
    out += who + ",total," + fmt_num(r.eq_payoff) + "," + to_string(r.best_decision) + "," +
           fmt_num(r.best_price) + "," + fmt_num(r.best_payoff) + "," + fmt_num(r.gain) + "\n";
  }
  out += "all,max_gain,,,,," + fmt_num(rep.max_gain) + "\n";
  return out;
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "s") return SweepAxis::S;
  if (name == "q") return SweepAxis::Q;
  if (name == "qs") return SweepAxis::Qs;
  if (name == "q2") return SweepAxis::Q2;
  if (name == "s2") return SweepAxis::S2;
  fail(ErrorCode::Domain, "sweep axis must be one of s, q, qs, q2, s2; got '" + name + "'");
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::S: return "s";
    case SweepAxis::Q: return "q";
    case SweepAxis::Qs: return "qs";
    case SweepAxis::Q2: return "q2";
    case SweepAxis::S2: return "s2";
  }
  return "?";
}

MarketParams apply_axis(MarketParams p, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::S: p.s1 = p.s2 = value; break;
    case SweepAxis::Q: p.q1 = p.q2 = value; break;
    case SweepAxis::Qs: p.qs = value; break;
    case SweepAxis::Q2: p.q2 = value; break;
    case SweepAxis::S2: p.s2 = value; break;
  }
  return p;
}

std::vector<SweepRow> run_sweep(const MarketParams& base, SweepAxis axis, double lo, double hi,
                                int steps, const SweepOptions& opt) {
  if (steps < 2) fail(ErrorCode::Domain, "sweep needs at least 2 steps");
  if (!(std::isfinite(lo) && std::isfinite(hi))) fail(ErrorCode::Domain, "sweep bounds must be finite");
  if (opt.rounds > 0 && !opt.seed) fail(ErrorCode::Domain, "simulation in a sweep needs an explicit seed");
  std::vector<SweepRow> rows(steps);
  std::vector<std::exception_ptr> errs(steps);
  for (int k = 0; k < steps; ++k) {
    rows[k].axis_value = k == steps - 1 ? hi : lo + (hi - lo) * k / (steps - 1);
    rows[k].params = apply_axis(base, axis, rows[k].axis_value);
  }
  // validate everything up front so errors surface in axis order
  for (auto& r : rows) canonicalize(r.params);

  std::atomic<int> next{0};
  auto work = [&] {
    for (int k; (k = next.fetch_add(1)) < steps;) {
      try {
        SweepRow& r = rows[k];
        r.profile = solve(r.params);
        if (opt.verify_each) {
          double bound = opt.eps >= 0 ? opt.eps : 1e-5 * (r.params.v - r.params.c);
          r.eps = certify_ne(r.params, r.profile, opt.grid).max_gain;
          r.verified = r.eps <= bound;
        }
        if (opt.rounds > 0) {
          SimConfig cfg;
          cfg.rounds = opt.rounds;
          cfg.seed = derive_seed(*opt.seed, 0x5eed, k);
          cfg.params = r.params;
          cfg.strategies = r.profile.strategies;
          cfg.threads = 1;
          r.sim = run_market(cfg);
          r.simulated = true;
        }
      } catch (...) {
        errs[k] = std::current_exception();
      }
    }
  };
  unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, steps);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const SweepOptions& opt) {
  std::string out = "axis_value,p1,p2,payoff1,payoff2";
  for (const char* name : kEndpointNames) out += std::string(",") + name;
  out += ",band";
  if (opt.verify_each) out += ",eps,verified";
  if (opt.rounds > 0)
    out += ",mean_price,mean_price_se,price_variance,sim_payoff1,sim_payoff1_se,sim_payoff2,sim_payoff2_se";
  out += "\n";
  for (const auto& r : rows) {
    const auto& pr = r.profile;
    out += fmt_num(r.axis_value) + "," + fmt_num(pr.strategies[0].p_acquire) + "," +
           fmt_num(pr.strategies[1].p_acquire) + "," + fmt_num(pr.payoffs[0]) + "," +
           fmt_num(pr.payoffs[1]);
    for (const char* name : kEndpointNames) {
      auto it = pr.endpoints.find(name);
      out += ",";
      if (it != pr.endpoints.end()) out += fmt_num(it->second);
    }
    out += std::string(",") + to_string(pr.regime.cost_band);
    if (opt.verify_each) out += "," + fmt_num(r.eps) + "," + (r.verified ? "1" : "0");
    if (opt.rounds > 0) {
      const SimStats& s = r.sim;
      out += "," + fmt_num(s.price.mean) + "," + fmt_num(s.price.std_error) + "," +
             fmt_num(s.price_variance) + "," + fmt_num(s.primary[0].payoff.mean) + "," +
             fmt_num(s.primary[0].payoff.std_error) + "," + fmt_num(s.primary[1].payoff.mean) +
             "," + fmt_num(s.primary[1].payoff.std_error);
    }
    out += "\n";
  }
  return out;
}

}  // namespace specprice
