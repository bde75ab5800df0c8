#ifndef SPECPRICE_H
#define SPECPRICE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SPM_API __declspec(dllexport)
#else
#define SPM_API __attribute__((visibility("default")))
#endif

/* Every function returning int returns one of these. */
typedef enum spm_status {
  SPM_OK = 0,
  SPM_ERR_RANGE = 1,
  SPM_ERR_AMBIGUOUS = 2,
  SPM_ERR_SCENARIO = 3,
  SPM_ERR_DOMAIN = 4,
  SPM_ERR_NO_ROOT = 5,
  SPM_ERR_MISSING_CDF = 6,
  SPM_ERR_INTERNAL = 7,
  SPM_ERR_IO = 8,
  SPM_ERR_NULL = 9
} spm_status;

typedef enum spm_info { SPM_NO_ACQUIRE = 0, SPM_EST1 = 1, SPM_EST0 = 2 } spm_info;

typedef enum spm_scenario {
  SPM_BASIC = 0,
  SPM_ESTIMATION_ERROR = 1,
  SPM_UNEQUAL_COSTS = 2,
  SPM_UNEQUAL_AVAILABILITY = 3,
  SPM_N_PRIMARY = 4,
  SPM_MULTI_STATE = 5
} spm_scenario;

typedef enum spm_band { SPM_PURE_N = 0, SPM_ONE_SIDED_MIX = 1, SPM_BOTH_MIX = 2 } spm_band;

typedef struct spm_params {
  double v, c, s1, s2, q1, q2, qs;
  int n, m;
} spm_params;

typedef struct spm_sweep_options {
  int verify_each;
  int grid;       /* verifier grid, >= 100 */
  double eps;     /* negative: 1e-5 (v - c) */
  uint64_t rounds; /* 0: no simulation */
  uint64_t seed;
  int has_seed;
} spm_sweep_options;

typedef struct spm_profile spm_profile;
typedef struct spm_sim spm_sim;
typedef struct spm_report spm_report;
typedef struct spm_sweep spm_sweep;

/* Message for the last failure on this thread; empty after success. */
SPM_API const char* spm_last_error(void);
SPM_API const char* spm_status_name(int status);

SPM_API void spm_params_default(spm_params* p);
SPM_API void spm_sweep_options_default(spm_sweep_options* o);
SPM_API int spm_validate(const spm_params* in, spm_params* canonical, int* swapped, int* scenario);
/* Missing thresholds come back as NaN. */
SPM_API int spm_thresholds(const spm_params* p, int* band, double* T, double* T1, double* T2);

SPM_API int spm_solve(const spm_params* p, spm_profile** out);
SPM_API void spm_profile_free(spm_profile* prof);
SPM_API int spm_profile_scenario(const spm_profile* prof, int* scenario, int* band);
SPM_API int spm_profile_p_acquire(const spm_profile* prof, int primary, double* out);
SPM_API int spm_profile_payoff(const spm_profile* prof, int primary, double* out);
SPM_API int spm_profile_endpoint(const spm_profile* prof, const char* name, double* out);
SPM_API int spm_profile_has_cdf(const spm_profile* prof, int primary, int info, int* out);
SPM_API int spm_profile_cdf_eval(const spm_profile* prof, int primary, int info, double x,
                                 double* out);
SPM_API int spm_profile_quantile(const spm_profile* prof, int primary, int info, double u,
                                 double* out);
SPM_API int spm_profile_moments(const spm_profile* prof, int primary, int info, double* mean,
                                double* variance);
/* Returned strings are owned by the handle and live until the next call on it. */
SPM_API int spm_profile_json(spm_profile* prof, const char** out);
SPM_API int spm_profile_cdf_csv(spm_profile* prof, int points, const char** out);

SPM_API int spm_simulate(const spm_profile* prof, uint64_t rounds, uint64_t seed, spm_sim** out);
SPM_API void spm_sim_free(spm_sim* sim);
SPM_API int spm_sim_payoff(const spm_sim* sim, int primary, double* mean, double* se);
SPM_API int spm_sim_acquire(const spm_sim* sim, int primary, double* mean, double* se);
SPM_API int spm_sim_price(const spm_sim* sim, double* mean, double* se, double* variance);
SPM_API int spm_sim_csv(spm_sim* sim, const char** out);

SPM_API int spm_certify(const spm_profile* prof, int grid, spm_report** out);
SPM_API void spm_report_free(spm_report* rep);
SPM_API int spm_report_max_gain(const spm_report* rep, double* out);
SPM_API int spm_report_csv(spm_report* rep, const char** out);

SPM_API int spm_sweep_run(const spm_params* base, const char* axis, double lo, double hi, int steps,
                          const spm_sweep_options* opt, spm_sweep** out);
SPM_API void spm_sweep_free(spm_sweep* sw);
SPM_API int spm_sweep_size(const spm_sweep* sw, int* out);
SPM_API int spm_sweep_all_verified(const spm_sweep* sw, int* out);
SPM_API int spm_sweep_csv(spm_sweep* sw, const char** out);

SPM_API int spm_w_mn(int m, int n, double x, double* out);
SPM_API int spm_W_mn(int m, int n, double x, double* out);
SPM_API int spm_n_primary_checks(double v, double c, double q, double s, int n, int m,
                                 double* all_acquire, double* deviation, double* gap,
                                 double* symmetric_constant);
SPM_API int spm_multistate_payoffs(double v, double c, double q1, double q2, double h1, double h2,
                                   double* payoff_state2, double* payoff_state1, double* L);

#ifdef __cplusplus
}
#endif

#endif
