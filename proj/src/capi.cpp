#include "specprice/specprice.h"

#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "specprice/error.hpp"
#include "specprice/extensions.hpp"
#include "specprice/report.hpp"

using namespace specprice;

struct spm_profile {
  MarketParams params;
  EquilibriumProfile prof;
  std::string text;
};

struct spm_sim {
  MarketParams params;
  SimStats stats;
  std::string text;
};

struct spm_report {
  DeviationReport rep;
  std::string text;
};

struct spm_sweep {
  std::vector<SweepRow> rows;
  SweepOptions opt;
  std::string text;
};

namespace {

thread_local std::string g_last_error;

int status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Range: return SPM_ERR_RANGE;
    case ErrorCode::AmbiguousScenario: return SPM_ERR_AMBIGUOUS;
    case ErrorCode::ScenarioMismatch: return SPM_ERR_SCENARIO;
    case ErrorCode::Domain: return SPM_ERR_DOMAIN;
    case ErrorCode::NoRoot: return SPM_ERR_NO_ROOT;
    case ErrorCode::MissingCdf: return SPM_ERR_MISSING_CDF;
    case ErrorCode::Internal: return SPM_ERR_INTERNAL;
  }
  return SPM_ERR_INTERNAL;
}

template <class F>
int guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return SPM_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SPM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPM_ERR_INTERNAL;
  }
}

#define SPM_NOT_NULL(ptr)                                \
  do {                                                   \
    if (!(ptr)) {                                        \
      g_last_error = "null argument: " #ptr;             \
      return SPM_ERR_NULL;                               \
    }                                                    \
  } while (0)

MarketParams from_c(const spm_params& p) {
  MarketParams m;
  m.v = p.v;
  m.c = p.c;
  m.s1 = p.s1;
  m.s2 = p.s2;
  m.q1 = p.q1;
  m.q2 = p.q2;
  m.qs = p.qs;
  m.n = p.n;
  m.m = p.m;
  return m;
}

spm_params to_c(const MarketParams& m) {
  return spm_params{m.v, m.c, m.s1, m.s2, m.q1, m.q2, m.qs, m.n, m.m};
}

InfoState info_of(int info) {
  if (info < 0 || info > 2) fail(ErrorCode::Domain, "info state must be 0, 1 or 2");
  return static_cast<InfoState>(info);
}

int primary_of(int primary) {
  if (primary != 1 && primary != 2) fail(ErrorCode::Domain, "primary must be 1 or 2");
  return primary - 1;
}

const PriceCdf& cdf_of(const spm_profile* prof, int primary, int info) {
  return prof->prof.strategies[primary_of(primary)].cdf(info_of(info));
}

}  // namespace

extern "C" {

const char* spm_last_error(void) { return g_last_error.c_str(); }

const char* spm_status_name(int status) {
  switch (status) {
    case SPM_OK: return "ok";
    case SPM_ERR_RANGE: return "RangeError";
    case SPM_ERR_AMBIGUOUS: return "AmbiguousScenario";
    case SPM_ERR_SCENARIO: return "ScenarioMismatch";
    case SPM_ERR_DOMAIN: return "DomainError";
    case SPM_ERR_NO_ROOT: return "NoRoot";
    case SPM_ERR_MISSING_CDF: return "MissingCdf";
    case SPM_ERR_INTERNAL: return "InternalError";
    case SPM_ERR_IO: return "IOError";
    case SPM_ERR_NULL: return "NullArgument";
  }
  return "unknown";
}

void spm_params_default(spm_params* p) {
  if (p) *p = to_c(MarketParams{});
}

void spm_sweep_options_default(spm_sweep_options* o) {
  if (!o) return;
  SweepOptions d;
  *o = spm_sweep_options{0, d.grid, -1.0, 0, 0, 0};
}

int spm_validate(const spm_params* in, spm_params* canonical, int* swapped, int* scenario) {
  SPM_NOT_NULL(in);
  return guarded([&] {
    Canonical can = canonicalize(from_c(*in));
    if (canonical) *canonical = to_c(can.params);
    if (swapped) *swapped = can.swapped ? 1 : 0;
    if (scenario) *scenario = static_cast<int>(classify(can.params));
  });
}

int spm_thresholds(const spm_params* p, int* band, double* T, double* T1, double* T2) {
  SPM_NOT_NULL(p);
  return guarded([&] {
    Regime r = thresholds(from_c(*p));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto get = [&](const char* name) {
      for (const auto& [k, val] : r.thresholds)
        if (k == name) return val;
      return nan;
    };
    if (band) *band = static_cast<int>(r.cost_band);
    if (T) *T = get("T");
    if (T1) *T1 = get("T1");
    if (T2) *T2 = get("T2");
  });
}

int spm_solve(const spm_params* p, spm_profile** out) {
  SPM_NOT_NULL(p);
  SPM_NOT_NULL(out);
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<spm_profile>();
    h->params = from_c(*p);
    h->prof = solve(h->params);
    *out = h.release();
  });
}

void spm_profile_free(spm_profile* prof) { delete prof; }

int spm_profile_scenario(const spm_profile* prof, int* scenario, int* band) {
  SPM_NOT_NULL(prof);
  if (scenario) *scenario = static_cast<int>(prof->prof.regime.scenario);
  if (band) *band = static_cast<int>(prof->prof.regime.cost_band);
  return SPM_OK;
}

int spm_profile_p_acquire(const spm_profile* prof, int primary, double* out) {
  SPM_NOT_NULL(prof);
  SPM_NOT_NULL(out);
  return guarded([&] { *out = prof->prof.strategies[primary_of(primary)].p_acquire; });
}

int spm_profile_payoff(const spm_profile* prof, int primary, double* out) {
  SPM_NOT_NULL(prof);
  SPM_NOT_NULL(out);
  return guarded([&] { *out = prof->prof.payoffs[primary_of(primary)]; });
}

int spm_profile_endpoint(const spm_profile* prof, const char* name, double* out) {
  SPM_NOT_NULL(prof);
  SPM_NOT_NULL(name);
  SPM_NOT_NULL(out);
  return guarded([&] { *out = prof->prof.endpoint(name); });
}

int spm_profile_has_cdf(const spm_profile* prof, int primary, int info, int* out) {
  SPM_NOT_NULL(prof);
  SPM_NOT_NULL(out);
  return guarded([&] { *out = prof->prof.strategies[primary_of(primary)].has(info_of(info)) ? 1 : 0; });
}

int spm_profile_cdf_eval(const spm_profile* prof, int primary, int info, double x, double* out) {
  SPM_NOT_NULL(prof);
  SPM_NOT_NULL(out);
  return guarded([&] { *out = cdf_eval(cdf_of(prof, primary, info), x); });
}

int spm_profile_quantile(const spm_profile* prof, int primary, int info, double u, double* out) {
  SPM_NOT_NULL(prof);
  SPM_NOT_NULL(out);
  return guarded([&] { *out = quantile(cdf_of(prof, primary, info), u); });
}

int spm_profile_moments(const spm_profile* prof, int primary, int info, double* mean,
                        double* variance) {
  SPM_NOT_NULL(prof);
  return guarded([&] {
    Moments m = moments(cdf_of(prof, primary, info));
    if (mean) *mean = m.mean;
    if (variance) *variance = m.variance;
  });
}

int spm_profile_json(spm_profile* prof, const char** out) {
  SPM_NOT_NULL(prof);
  SPM_NOT_NULL(out);
  return guarded([&] {
    prof->text = profile_json(prof->params, prof->prof);
    *out = prof->text.c_str();
  });
}

int spm_profile_cdf_csv(spm_profile* prof, int points, const char** out) {
  SPM_NOT_NULL(prof);
  SPM_NOT_NULL(out);
  return guarded([&] {
    prof->text = cdf_table_csv(prof->prof, prof->params.c, prof->params.v, points);
    *out = prof->text.c_str();
  });
}

int spm_simulate(const spm_profile* prof, uint64_t rounds, uint64_t seed, spm_sim** out) {
  SPM_NOT_NULL(prof);
  SPM_NOT_NULL(out);
  *out = nullptr;
  return guarded([&] {
    SimConfig cfg;
    cfg.rounds = rounds;
    cfg.seed = seed;
    cfg.params = prof->params;
    cfg.strategies = prof->prof.strategies;
    auto h = std::make_unique<spm_sim>();
    h->params = prof->params;
    h->stats = run_market(cfg);
    *out = h.release();
  });
}

void spm_sim_free(spm_sim* sim) { delete sim; }

int spm_sim_payoff(const spm_sim* sim, int primary, double* mean, double* se) {
  SPM_NOT_NULL(sim);
  return guarded([&] {
    const Estimate& e = sim->stats.primary[primary_of(primary)].payoff;
    if (mean) *mean = e.mean;
    if (se) *se = e.std_error;
  });
}

int spm_sim_acquire(const spm_sim* sim, int primary, double* mean, double* se) {
  SPM_NOT_NULL(sim);
  return guarded([&] {
    const Estimate& e = sim->stats.primary[primary_of(primary)].acquire;
    if (mean) *mean = e.mean;
    if (se) *se = e.std_error;
  });
}

int spm_sim_price(const spm_sim* sim, double* mean, double* se, double* variance) {
  SPM_NOT_NULL(sim);
  if (mean) *mean = sim->stats.price.mean;
  if (se) *se = sim->stats.price.std_error;
  if (variance) *variance = sim->stats.price_variance;
  return SPM_OK;
}

int spm_sim_csv(spm_sim* sim, const char** out) {
  SPM_NOT_NULL(sim);
  SPM_NOT_NULL(out);
  return guarded([&] {
    sim->text = sim_stats_csv(sim->params, sim->stats);
    *out = sim->text.c_str();
  });
}

int spm_certify(const spm_profile* prof, int grid, spm_report** out) {
  SPM_NOT_NULL(prof);
  SPM_NOT_NULL(out);
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<spm_report>();
    h->rep = certify_ne(prof->params, prof->prof, grid);
    *out = h.release();
  });
}

void spm_report_free(spm_report* rep) { delete rep; }

int spm_report_max_gain(const spm_report* rep, double* out) {
  SPM_NOT_NULL(rep);
  SPM_NOT_NULL(out);
  *out = rep->rep.max_gain;
  return SPM_OK;
}

int spm_report_csv(spm_report* rep, const char** out) {
  SPM_NOT_NULL(rep);
  SPM_NOT_NULL(out);
  return guarded([&] {
    rep->text = deviation_csv(rep->rep);
    *out = rep->text.c_str();
  });
}

int spm_sweep_run(const spm_params* base, const char* axis, double lo, double hi, int steps,
                  const spm_sweep_options* opt, spm_sweep** out) {
  SPM_NOT_NULL(base);
  SPM_NOT_NULL(axis);
  SPM_NOT_NULL(out);
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<spm_sweep>();
    if (opt) {
      h->opt.verify_each = opt->verify_each != 0;
      h->opt.grid = opt->grid;
      h->opt.eps = opt->eps;
      h->opt.rounds = opt->rounds;
      if (opt->has_seed) h->opt.seed = opt->seed;
    }
    h->rows = run_sweep(from_c(*base), parse_axis(axis), lo, hi, steps, h->opt);
    *out = h.release();
  });
}

void spm_sweep_free(spm_sweep* sw) { delete sw; }

int spm_sweep_size(const spm_sweep* sw, int* out) {
  SPM_NOT_NULL(sw);
  SPM_NOT_NULL(out);
  *out = static_cast<int>(sw->rows.size());
  return SPM_OK;
}

int spm_sweep_all_verified(const spm_sweep* sw, int* out) {
  SPM_NOT_NULL(sw);
  SPM_NOT_NULL(out);
  *out = 1;
  for (const auto& r : sw->rows)
    if (!r.verified) *out = 0;
  return SPM_OK;
}

int spm_sweep_csv(spm_sweep* sw, const char** out) {
  SPM_NOT_NULL(sw);
  SPM_NOT_NULL(out);
  return guarded([&] {
    sw->text = sweep_csv(sw->rows, sw->opt);
    *out = sw->text.c_str();
  });
}

int spm_w_mn(int m, int n, double x, double* out) {
  SPM_NOT_NULL(out);
  return guarded([&] { *out = w_mn(m, n, x); });
}

int spm_W_mn(int m, int n, double x, double* out) {
  SPM_NOT_NULL(out);
  return guarded([&] { *out = W_mn(m, n, x); });
}

int spm_n_primary_checks(double v, double c, double q, double s, int n, int m,
                         double* all_acquire, double* deviation, double* gap,
                         double* symmetric_constant) {
  return guarded([&] {
    NPrimaryReport r = n_primary_payoff_checks(v, c, q, s, n, m);
    if (all_acquire) *all_acquire = r.all_acquire_payoff;
    if (deviation) *deviation = r.deviation_payoff;
    if (gap) *gap = r.gap;
    if (symmetric_constant) *symmetric_constant = r.symmetric_constant;
  });
}

int spm_multistate_payoffs(double v, double c, double q1, double q2, double h1, double h2,
                           double* payoff_state2, double* payoff_state1, double* L) {
  return guarded([&] {
    MultiStatePayoffs r = multistate_payoffs(MultiStateParams{v, c, q1, q2, h1, h2});
    if (payoff_state2) *payoff_state2 = r.payoff_state2;
    if (payoff_state1) *payoff_state1 = r.payoff_state1;
    if (L) *L = r.L;
  });
}

}  // extern "C"
