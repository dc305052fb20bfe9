/* SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The uniqaudit Authors
 *
 * uniqaudit — public C API.
 *
 * Quantifies how uniquely identifiable the members of a population are
 * from the AND-combination of a public location and profile skills, the
 * way an ads-manager audience estimator exposes them: seeded synthetic
 * populations, censored audience-size queries, censored log-linear
 * uniqueness fits with bootstrap CIs, success-probability curves,
 * affected-population estimates and a nanotargeting campaign simulator.
 *
 * Conventions:
 *   - every function returning ua_status yields UA_OK (0) on success and
 *     a nonzero error class otherwise; ua_last_error() describes the most
 *     recent failure on the calling thread;
 *   - objects are opaque handles released with their ua_*_free function;
 *   - strings returned through char** are UTF-8, owned by the caller and
 *     released with ua_string_free;
 *   - structured inputs and outputs are JSON documents (see README).
 */

#ifndef UNIQAUDIT_H
#define UNIQAUDIT_H

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32
#define UA_API __declspec(dllexport)
#else
#define UA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ua_status {
    UA_OK = 0,
    UA_ERR_CONFIG = 1, /* invalid parameters or flags */
    UA_ERR_DATA = 2,   /* malformed or inconsistent input data */
    UA_ERR_FIT = 3,    /* degenerate, non-decaying or unstable fit */
    UA_ERR_IO = 4,     /* file system failure */
    UA_ERR_OTHER = 5
} ua_status;

typedef struct ua_population ua_population;
typedef struct ua_oracle ua_oracle;
typedef struct ua_curve ua_curve;

UA_API const char* ua_version(void);

/* Message for the calling thread's most recent failure; empty when the
 * last call succeeded. The pointer stays valid until the next API call on
 * the same thread. */
UA_API const char* ua_last_error(void);

UA_API void ua_string_free(char* s);

/* ---- population ------------------------------------------------------ */

/* config_json: {"n_users":..,"n_skills":..,"skill_popularity_exponent":..,
 *   "n_locations":..,"location_popularity_exponent":..,"p_zero_skills":..,
 *   "skill_count_log_mean":..,"skill_count_log_sigma":..,"total_base":..,
 *   "seed":..} — omitted keys take the calibrated defaults. */
UA_API ua_status ua_population_generate(const char* config_json, ua_population** out);

/* JSON-lines profile file: one {"id","location","skills"} object per
 * line, optional {"_meta":...} header. */
UA_API ua_status ua_population_load(const char* path, ua_population** out);
UA_API ua_status ua_population_save(const ua_population* pop, const char* path);
UA_API void ua_population_free(ua_population* pop);

UA_API uint64_t ua_population_user_count(const ua_population* pop);
UA_API ua_status ua_population_summary(const ua_population* pop, char** out_json);
UA_API ua_status ua_population_summary_cdf_csv(const ua_population* pop, char** out_csv);
UA_API ua_status ua_population_audiences_csv(const ua_population* pop, char** out_csv);
/* warnings emitted by the last load (JSON array of strings) */
UA_API ua_status ua_population_warnings(const ua_population* pop, char** out_json);

/* ---- audience oracle -------------------------------------------------- */

UA_API ua_status ua_oracle_new(const ua_population* pop, int64_t floor, ua_oracle** out);
UA_API void ua_oracle_free(ua_oracle* oracle);

/* skills: comma-separated skill ids (NULL or "" = none); location: NULL =
 * no location constraint. censored=0 returns the ground-truth count. */
UA_API ua_status ua_oracle_audience_size(const ua_oracle* oracle, const char* location,
                                         const char* skills_csv, int censored, int64_t* out);
/* JSON array of matching user ids (ground truth, never censored). */
UA_API ua_status ua_oracle_matched_users(const ua_oracle* oracle, const char* location,
                                         const char* skills_csv, char** out_json);

/* ---- estimator -------------------------------------------------------- */

/* Censored log-linear fit over one quantile vector. values[i] is the
 * audience size at N = i+1; pass NaN for absent slots. Writes
 * {"a","b","n_p","r2","n_asymp","points_used","points"}. */
UA_API ua_status ua_fit_np(const double* values, size_t count, int64_t floor,
                           int min_uncensored_points, char** out_json);

/* Table-shaped uniqueness report over the four scenarios.
 * config_json: {"seed":..,"floor":..,"quantiles":[50,75,90],
 *   "bootstrap_iterations":..,"threads":..}. Per-cell fit failures appear
 * as annotated empty cells. */
UA_API ua_status ua_run_scenarios(const ua_population* pop, const char* config_json,
                                  char** out_json);
/* Same report as Table-1-layout CSV plus (N,Q,AS) plot data per scenario. */
UA_API ua_status ua_run_scenarios_csv(const ua_population* pop, const char* config_json,
                                      char** out_csv, char** out_plot_csv);

/* ---- risk ------------------------------------------------------------- */

/* config_json: {"scenario":"lo_r","seed":..,"floor":..,"threads":..} */
UA_API ua_status ua_success_curve(const ua_population* pop, const char* config_json,
                                  ua_curve** out);
UA_API void ua_curve_free(ua_curve* curve);
UA_API ua_status ua_curve_value(const ua_curve* curve, int n_skills, double* out_p);
UA_API ua_status ua_curve_csv(const ua_curve* curve, char** out_csv);

/* Brute-force uniqueness oracle: fraction of eligible users whose
 * location+first-N-skills spec matches exactly one user. */
UA_API ua_status ua_uniqueness_ground_truth(const ua_population* pop, const char* config_json,
                                            int n_skills, double* out_fraction);

/* Affected-population arithmetic: p x frac x base. */
UA_API ua_status ua_estimate_affected(double p, int n_required, double frac, uint64_t base,
                                      char** out_json);

/* Success probability for one user at N = their reported skill count. */
UA_API ua_status ua_user_risk(const ua_population* pop, const ua_curve* curve,
                              const char* user_id, char** out_json);

/* ---- campaign simulator ------------------------------------------------ */

UA_API double ua_expected_successes(double p, int campaigns);

/* config_json: {"target":"u123","skills_count":13,
 *   "policy":"enforced"|"clientside","days":3,"budget":10.0,"seed":..,
 *   "floor":..,"campaign_id":..,"activity":{"daily_impression_prob":..,
 *   "target_click_prob":..,"bystander_click_prob":..,
 *   "cost_per_impression":..}}
 * or an explicit spec: {"location":"..","skills":["..",".."],...}. */
UA_API ua_status ua_campaign_run(const ua_population* pop, const char* config_json,
                                 char** out_json);

/* config_json: {"targets":["u1",..],"skill_counts":[7,10,13,16,19],
 *   "repetitions":1,"seed":..,"floor":..,"days":3,"activity":{...},
 *   "curve_scenario":"lo_r"|null} */
UA_API ua_status ua_experiment_run(const ua_population* pop, const char* config_json,
                                   char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* UNIQAUDIT_H */
