// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#include "uniqaudit.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "core/campaign.hpp"
#include "core/estimator.hpp"
#include "core/methodology.hpp"
#include "core/oracle.hpp"
#include "core/population.hpp"
#include "core/reports.hpp"
#include "core/risk.hpp"

using nlohmann::ordered_json;
namespace ua = uniqaudit;

struct ua_population {
    std::shared_ptr<const ua::Population> pop;
    std::vector<std::string> warnings;
    // one lazily built index per floor-independent population
    mutable std::shared_ptr<const ua::AudienceIndex> index;

    const ua::AudienceIndex& get_index() const {
        if (!index) index = std::make_shared<ua::AudienceIndex>(*pop);
        return *index;
    }
};

struct ua_oracle {
    std::shared_ptr<const ua::Population> pop;
    std::shared_ptr<const ua::AudienceIndex> index;
    int64_t floor = 300;
};

struct ua_curve {
    std::shared_ptr<const ua::SuccessCurve> curve;
};

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ua_status fail(ua_status code, const std::string& message) {
    t_last_error = message;
    return code;
}

template <typename Fn>
ua_status guarded(Fn&& fn) {
    try {
        fn();
        t_last_error.clear();
        return UA_OK;
    } catch (const ua::ConfigError& e) {
        return fail(UA_ERR_CONFIG, e.what());
    } catch (const ua::FitError& e) {
        return fail(UA_ERR_FIT, e.what());
    } catch (const ua::DataError& e) {
        return fail(UA_ERR_DATA, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(UA_ERR_CONFIG, std::string("invalid JSON: ") + e.what());
    } catch (const std::exception& e) {
        return fail(UA_ERR_OTHER, e.what());
    }
}

ordered_json parse_config(const char* config_json) {
    if (config_json == nullptr || *config_json == '\0') return ordered_json::object();
    return ordered_json::parse(config_json);
}

ua::GeneratorConfig generator_config_from_json(const ordered_json& j) {
    ua::GeneratorConfig cfg;
    if (j.contains("n_users")) cfg.n_users = j["n_users"].get<uint32_t>();
    if (j.contains("n_skills")) cfg.n_skills = j["n_skills"].get<uint32_t>();
    if (j.contains("skill_popularity_exponent"))
        cfg.skill_popularity_exponent = j["skill_popularity_exponent"].get<double>();
    if (j.contains("n_locations")) cfg.n_locations = j["n_locations"].get<uint32_t>();
    if (j.contains("location_popularity_exponent"))
        cfg.location_popularity_exponent = j["location_popularity_exponent"].get<double>();
    if (j.contains("p_zero_skills")) cfg.p_zero_skills = j["p_zero_skills"].get<double>();
    if (j.contains("skill_count_log_mean"))
        cfg.skill_count_log_mean = j["skill_count_log_mean"].get<double>();
    if (j.contains("skill_count_log_sigma"))
        cfg.skill_count_log_sigma = j["skill_count_log_sigma"].get<double>();
    if (j.contains("total_base")) cfg.total_base = j["total_base"].get<uint64_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
    return cfg;
}

ua::OracleConfig oracle_config_from_json(const ordered_json& j) {
    ua::OracleConfig cfg;
    cfg.floor = 300;
    if (j.contains("floor")) cfg.floor = j["floor"].get<int64_t>();
    if (j.contains("censored")) cfg.censored = j["censored"].get<bool>();
    return cfg;
}

ua::EstimatorConfig estimator_config_from_json(const ordered_json& j) {
    ua::EstimatorConfig cfg;
    if (j.contains("bootstrap_iterations"))
        cfg.bootstrap_iterations = j["bootstrap_iterations"].get<int>();
    if (j.contains("quantiles")) cfg.quantiles = j["quantiles"].get<std::vector<double>>();
    if (j.contains("min_uncensored_points"))
        cfg.min_uncensored_points = j["min_uncensored_points"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
    return cfg;
}

std::vector<std::string> split_csv_list(const char* csv) {
    std::vector<std::string> out;
    if (csv == nullptr) return out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

ua::ActivityModel activity_from_json(const ordered_json& j) {
    ua::ActivityModel a;
    if (!j.contains("activity")) return a;
    const auto& aj = j["activity"];
    if (aj.contains("daily_impression_prob"))
        a.daily_impression_prob = aj["daily_impression_prob"].get<double>();
    if (aj.contains("target_click_prob")) a.target_click_prob = aj["target_click_prob"].get<double>();
    if (aj.contains("bystander_click_prob"))
        a.bystander_click_prob = aj["bystander_click_prob"].get<double>();
    if (aj.contains("cost_per_impression"))
        a.cost_per_impression = aj["cost_per_impression"].get<double>();
    return a;
}

ua::SampleMatrix build_matrix_for(const ua_population* pop, const ordered_json& j) {
    ua::Scenario scenario = ua::Scenario::parse(j.value("scenario", std::string("lo_r")));
    ua::OracleConfig ocfg = oracle_config_from_json(j);
    uint64_t seed = j.value("seed", uint64_t{0});
    unsigned threads = j.value("threads", 0u);
    return ua::SampleMatrix(*pop->pop, pop->get_index(), scenario, ocfg, seed, threads);
}

}  // namespace

extern "C" {

const char* ua_version(void) { return "0.1.0"; }

const char* ua_last_error(void) { return t_last_error.c_str(); }

void ua_string_free(char* s) { std::free(s); }

ua_status ua_population_generate(const char* config_json, ua_population** out) {
    return guarded([&] {
        if (out == nullptr) throw ua::ConfigError("out must not be null");
        auto cfg = generator_config_from_json(parse_config(config_json));
        auto handle = std::make_unique<ua_population>();
        handle->pop = std::make_shared<ua::Population>(ua::generate(cfg));
        *out = handle.release();
    });
}

ua_status ua_population_load(const char* path, ua_population** out) {
    return guarded([&] {
        if (out == nullptr || path == nullptr) throw ua::ConfigError("path/out must not be null");
        ua::LoadResult loaded = ua::ingest(path);
        auto handle = std::make_unique<ua_population>();
        handle->pop = std::make_shared<ua::Population>(std::move(loaded.population));
        handle->warnings = std::move(loaded.warnings);
        *out = handle.release();
    });
}

ua_status ua_population_save(const ua_population* pop, const char* path) {
    return guarded([&] {
        if (pop == nullptr || path == nullptr) throw ua::ConfigError("pop/path must not be null");
        ua::write_jsonl(*pop->pop, path);
    });
}

void ua_population_free(ua_population* pop) { delete pop; }

uint64_t ua_population_user_count(const ua_population* pop) {
    return pop == nullptr ? 0 : pop->pop->size();
}

ua_status ua_population_summary(const ua_population* pop, char** out_json) {
    return guarded([&] {
        if (pop == nullptr || out_json == nullptr)
            throw ua::ConfigError("pop/out must not be null");
        *out_json = dup_string(ua::reports::summary_json(ua::summarize(*pop->pop)).dump(2));
    });
}

ua_status ua_population_summary_cdf_csv(const ua_population* pop, char** out_csv) {
    return guarded([&] {
        if (pop == nullptr || out_csv == nullptr) throw ua::ConfigError("pop/out must not be null");
        *out_csv = dup_string(ua::reports::summary_cdf_csv(ua::summarize(*pop->pop)));
    });
}

ua_status ua_population_audiences_csv(const ua_population* pop, char** out_csv) {
    return guarded([&] {
        if (pop == nullptr || out_csv == nullptr) throw ua::ConfigError("pop/out must not be null");
        *out_csv = dup_string(ua::reports::audience_size_csv(ua::summarize(*pop->pop)));
    });
}

ua_status ua_population_warnings(const ua_population* pop, char** out_json) {
    return guarded([&] {
        if (pop == nullptr || out_json == nullptr)
            throw ua::ConfigError("pop/out must not be null");
        ordered_json arr = ordered_json::array();
        for (const auto& w : pop->warnings) arr.push_back(w);
        *out_json = dup_string(arr.dump());
    });
}

ua_status ua_oracle_new(const ua_population* pop, int64_t floor, ua_oracle** out) {
    return guarded([&] {
        if (pop == nullptr || out == nullptr) throw ua::ConfigError("pop/out must not be null");
        if (floor < 0) throw ua::ConfigError("reporting floor must be non-negative");
        auto handle = std::make_unique<ua_oracle>();
        handle->pop = pop->pop;
        handle->index = std::make_shared<ua::AudienceIndex>(*handle->pop);
        handle->floor = floor;
        *out = handle.release();
    });
}

void ua_oracle_free(ua_oracle* oracle) { delete oracle; }

ua_status ua_oracle_audience_size(const ua_oracle* oracle, const char* location,
                                  const char* skills_csv, int censored, int64_t* out) {
    return guarded([&] {
        if (oracle == nullptr || out == nullptr) throw ua::ConfigError("oracle/out must not be null");
        ua::AudienceSpec spec;
        if (location != nullptr && *location != '\0') spec.location = location;
        spec.skills = split_csv_list(skills_csv);
        ua::OracleConfig cfg{oracle->floor, censored != 0};
        *out = oracle->index->audience_size(spec, cfg);
    });
}

ua_status ua_oracle_matched_users(const ua_oracle* oracle, const char* location,
                                  const char* skills_csv, char** out_json) {
    return guarded([&] {
        if (oracle == nullptr || out_json == nullptr)
            throw ua::ConfigError("oracle/out must not be null");
        ua::AudienceSpec spec;
        if (location != nullptr && *location != '\0') spec.location = location;
        spec.skills = split_csv_list(skills_csv);
        ordered_json arr = ordered_json::array();
        for (const auto& id : oracle->index->matched_users(spec)) arr.push_back(id);
        *out_json = dup_string(arr.dump());
    });
}

ua_status ua_fit_np(const double* values, size_t count, int64_t floor, int min_uncensored_points,
                    char** out_json) {
    return guarded([&] {
        if (values == nullptr || out_json == nullptr)
            throw ua::ConfigError("values/out must not be null");
        if (count == 0 || count > ua::kMaxSkillsPerProfile)
            throw ua::ConfigError("count must lie in 1..50");
        ua::QuantileVector vec;
        vec.q = 50.0;
        for (size_t i = 0; i < count; ++i)
            if (!std::isnan(values[i])) vec.values[i] = values[i];
        ua::FitResult fit =
            ua::fit_np(vec, floor, min_uncensored_points > 0 ? min_uncensored_points : 3);
        *out_json = dup_string(ua::reports::fit_json(fit).dump(2));
    });
}

ua_status ua_run_scenarios(const ua_population* pop, const char* config_json, char** out_json) {
    return guarded([&] {
        if (pop == nullptr || out_json == nullptr) throw ua::ConfigError("pop/out must not be null");
        ordered_json j = parse_config(config_json);
        ua::ScenarioTable table = ua::run_scenarios(*pop->pop, pop->get_index(),
                                                    estimator_config_from_json(j),
                                                    oracle_config_from_json(j));
        *out_json = dup_string(ua::reports::scenario_table_json(table).dump(2));
    });
}

ua_status ua_run_scenarios_csv(const ua_population* pop, const char* config_json, char** out_csv,
                               char** out_plot_csv) {
    return guarded([&] {
        if (pop == nullptr || out_csv == nullptr || out_plot_csv == nullptr)
            throw ua::ConfigError("pop/out must not be null");
        ordered_json j = parse_config(config_json);
        ua::EstimatorConfig ecfg = estimator_config_from_json(j);
        ua::OracleConfig ocfg = oracle_config_from_json(j);
        ua::ScenarioTable table = ua::run_scenarios(*pop->pop, pop->get_index(), ecfg, ocfg);
        *out_csv = dup_string(ua::reports::scenario_table_csv(table));
        std::ostringstream plot;
        plot << "scenario,N,Q,AS\n";
        for (const ua::Scenario& scenario : ua::Scenario::all()) {
            ua::SampleMatrix matrix(*pop->pop, pop->get_index(), scenario, ocfg, ecfg.seed,
                                    ecfg.threads);
            std::istringstream rows(ua::quantile_plot_csv(matrix, ecfg.quantiles));
            std::string line;
            std::getline(rows, line);  // header
            while (std::getline(rows, line)) plot << scenario.name() << ',' << line << '\n';
        }
        *out_plot_csv = dup_string(plot.str());
    });
}

ua_status ua_success_curve(const ua_population* pop, const char* config_json, ua_curve** out) {
    return guarded([&] {
        if (pop == nullptr || out == nullptr) throw ua::ConfigError("pop/out must not be null");
        ordered_json j = parse_config(config_json);
        ua::SampleMatrix matrix = build_matrix_for(pop, j);
        ua::SuccessCurveConfig cfg;
        cfg.threads = j.value("threads", 0u);
        auto handle = std::make_unique<ua_curve>();
        handle->curve = std::make_shared<ua::SuccessCurve>(ua::success_curve(matrix, cfg));
        *out = handle.release();
    });
}

void ua_curve_free(ua_curve* curve) { delete curve; }

ua_status ua_curve_value(const ua_curve* curve, int n_skills, double* out_p) {
    return guarded([&] {
        if (curve == nullptr || out_p == nullptr) throw ua::ConfigError("curve/out must not be null");
        if (n_skills < 1 || n_skills > ua::kMaxSkillsPerProfile)
            throw ua::ConfigError("n_skills must lie in 1..50");
        *out_p = curve->curve->at(n_skills);
    });
}

ua_status ua_curve_csv(const ua_curve* curve, char** out_csv) {
    return guarded([&] {
        if (curve == nullptr || out_csv == nullptr)
            throw ua::ConfigError("curve/out must not be null");
        *out_csv = dup_string(ua::curve_csv(*curve->curve));
    });
}

ua_status ua_uniqueness_ground_truth(const ua_population* pop, const char* config_json,
                                     int n_skills, double* out_fraction) {
    return guarded([&] {
        if (pop == nullptr || out_fraction == nullptr)
            throw ua::ConfigError("pop/out must not be null");
        ordered_json j = parse_config(config_json);
        ua::SampleMatrix matrix = build_matrix_for(pop, j);
        auto gt = ua::uniqueness_ground_truth(matrix, n_skills);
        if (!gt) throw ua::DataError("no eligible users with >= " + std::to_string(n_skills) +
                                     " skills");
        *out_fraction = *gt;
    });
}

ua_status ua_estimate_affected(double p, int n_required, double frac, uint64_t base,
                               char** out_json) {
    return guarded([&] {
        if (out_json == nullptr) throw ua::ConfigError("out must not be null");
        auto e = ua::estimate_affected(p, n_required, frac, base);
        *out_json = dup_string(ua::reports::affected_json(e).dump(2));
    });
}

ua_status ua_user_risk(const ua_population* pop, const ua_curve* curve, const char* user_id,
                       char** out_json) {
    return guarded([&] {
        if (pop == nullptr || curve == nullptr || user_id == nullptr || out_json == nullptr)
            throw ua::ConfigError("pop/curve/user_id/out must not be null");
        auto risk = ua::user_risk(*pop->pop, user_id, *curve->curve);
        *out_json = dup_string(ua::reports::user_risk_json(risk).dump(2));
    });
}

double ua_expected_successes(double p, int campaigns) {
    double result = 0.0;
    guarded([&] { result = ua::expected_successes(p, campaigns); });
    return result;
}

ua_status ua_campaign_run(const ua_population* pop, const char* config_json, char** out_json) {
    return guarded([&] {
        if (pop == nullptr || out_json == nullptr) throw ua::ConfigError("pop/out must not be null");
        ordered_json j = parse_config(config_json);
        ua::CampaignConfig cfg;
        cfg.campaign_id = j.value("campaign_id", std::string("c1"));
        cfg.duration_days = j.value("days", 3);
        cfg.budget = j.value("budget", 10.0);
        cfg.policy = ua::parse_policy(j.value("policy", std::string("enforced")));
        cfg.seed = j.value("seed", uint64_t{0});
        cfg.activity = activity_from_json(j);
        ua::OracleConfig ocfg = oracle_config_from_json(j);
        const ua::Population& population = *pop->pop;
        if (j.contains("target") && !j["target"].is_null()) {
            const std::string target = j["target"].get<std::string>();
            auto idx = population.user_index(target);
            if (!idx) throw ua::ConfigError("target '" + target + "' is not in the population");
            const ua::UserProfile& user = population.users()[*idx];
            cfg.target_id = target;
            int k = j.value("skills_count", user.skill_count());
            if (k < 1 || k > user.skill_count())
                throw ua::ConfigError("skills_count " + std::to_string(k) +
                                      " exceeds the target's " +
                                      std::to_string(user.skill_count()) + " profile skills");
            ua::SelectionPlan plan =
                ua::plan_selection(pop->get_index(), *idx,
                                   ua::Scenario{true, ua::Selection::Random}, cfg.seed);
            if (user.has_location())
                cfg.spec.location = population.location_id(static_cast<uint32_t>(user.location));
            for (int i = 0; i < k; ++i)
                cfg.spec.skills.push_back(population.skill_id(plan.skill_order[i]));
        } else {
            if (j.contains("location") && !j["location"].is_null())
                cfg.spec.location = j["location"].get<std::string>();
            if (j.contains("skills")) cfg.spec.skills = j["skills"].get<std::vector<std::string>>();
            if (j.contains("target_id") && !j["target_id"].is_null())
                cfg.target_id = j["target_id"].get<std::string>();
        }
        ua::CampaignOutcome outcome = ua::launch(pop->get_index(), cfg, ocfg);
        *out_json = dup_string(ua::reports::outcome_json(outcome).dump(2));
    });
}

ua_status ua_experiment_run(const ua_population* pop, const char* config_json, char** out_json) {
    return guarded([&] {
        if (pop == nullptr || out_json == nullptr) throw ua::ConfigError("pop/out must not be null");
        ordered_json j = parse_config(config_json);
        ua::ExperimentPlan plan;
        if (j.contains("targets")) plan.target_ids = j["targets"].get<std::vector<std::string>>();
        if (j.contains("skill_counts")) plan.skill_counts = j["skill_counts"].get<std::vector<int>>();
        plan.repetitions = j.value("repetitions", 1);
        plan.seed = j.value("seed", uint64_t{0});
        ua::OracleConfig ocfg = oracle_config_from_json(j);
        ua::CampaignConfig defaults;
        defaults.duration_days = j.value("days", 3);
        defaults.budget = j.value("budget", 10.0);
        defaults.activity = activity_from_json(j);
        std::optional<ua::SuccessCurve> curve;
        if (j.contains("curve_scenario") && !j["curve_scenario"].is_null()) {
            ordered_json cj = j;
            cj["scenario"] = j["curve_scenario"];
            ua::SampleMatrix matrix = build_matrix_for(pop, cj);
            ua::SuccessCurveConfig ccfg;
            ccfg.threads = j.value("threads", 0u);
            curve = ua::success_curve(matrix, ccfg);
        }
        ua::ExperimentReport report = ua::run_experiment(
            pop->get_index(), plan, curve ? &*curve : nullptr, defaults, ocfg);
        *out_json = dup_string(ua::reports::experiment_json(report).dump(2));
    });
}

}  // extern "C"
