// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#include "campaign.hpp"

#include <algorithm>

namespace uniqaudit {

PolicyMode parse_policy(std::string_view name) {
    if (name == "enforced") return PolicyMode::Enforced;
    if (name == "clientside") return PolicyMode::ClientSideOnly;
    throw ConfigError("unknown policy '" + std::string(name) + "' (expected enforced|clientside)");
}

std::string policy_name(PolicyMode mode) {
    return mode == PolicyMode::Enforced ? "enforced" : "clientside";
}

void ActivityModel::validate() const {
    for (double p : {daily_impression_prob, target_click_prob, bystander_click_prob})
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("activity probabilities must lie in [0, 1]");
    if (!(cost_per_impression >= 0.0)) throw ConfigError("cost_per_impression must be >= 0");
}

void CampaignConfig::validate() const {
    if (duration_days < 1) throw ConfigError("duration_days must be >= 1");
    if (!(budget >= 0.0)) throw ConfigError("budget must be >= 0");
    if (campaign_id.empty()) throw ConfigError("campaign_id must be non-empty");
    activity.validate();
}

CampaignOutcome launch(const AudienceIndex& index, const CampaignConfig& cfg,
                       const OracleConfig& oracle_cfg) {
    cfg.validate();
    oracle_cfg.validate();
    const Population& pop = index.population();
    if (cfg.target_id && !pop.user_index(*cfg.target_id))
        throw ConfigError("designated target '" + *cfg.target_id + "' is not in the population");

    CampaignOutcome outcome;
    outcome.campaign_id = cfg.campaign_id;
    outcome.budget = cfg.budget;
    std::vector<uint32_t> matched = index.matched_user_indices(cfg.spec);
    int64_t exact = static_cast<int64_t>(matched.size());
    outcome.reported_audience = AudienceIndex::apply_floor(exact, oracle_cfg);
    if (cfg.policy == PolicyMode::Enforced && exact < oracle_cfg.floor) {
        outcome.launched = false;  // server-side check: "audience too small"
        return outcome;
    }
    outcome.launched = true;
    for (int day = 1; day <= cfg.duration_days; ++day) {
        int ordinal = 0;
        for (uint32_t u : matched) {
            const std::string& uid = pop.users()[u].id;
            Rng rng(derive_seed(cfg.seed, "delivery:" + cfg.campaign_id, uid,
                                static_cast<uint64_t>(day)));
            if (!rng.bernoulli(cfg.activity.daily_impression_prob)) continue;
            UserDelivery& d = outcome.per_user[uid];
            d.impressions += 1;
            outcome.impressions += 1;
            outcome.cost += cfg.activity.cost_per_impression;
            double click_p = cfg.target_id && uid == *cfg.target_id
                                 ? cfg.activity.target_click_prob
                                 : cfg.activity.bystander_click_prob;
            if (rng.bernoulli(click_p)) {
                d.clicks += 1;
                outcome.clicks += 1;
                outcome.backend_clicks.push_back(
                    {"d" + std::to_string(day) + "#" + std::to_string(ordinal), cfg.campaign_id});
            }
            ++ordinal;
        }
    }
    outcome.nanotarget_success = cfg.target_id && outcome.per_user.size() == 1 &&
                                 outcome.per_user.begin()->first == *cfg.target_id;
    return outcome;
}

double expected_successes(double p, int campaigns) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
    if (campaigns < 0) throw ConfigError("campaigns must be >= 0");
    return p * static_cast<double>(campaigns);
}

void ExperimentPlan::validate() const {
    if (target_ids.empty()) throw ConfigError("experiment needs at least one target");
    if (skill_counts.empty()) throw ConfigError("experiment needs at least one skill count");
    for (int k : skill_counts)
        if (k < 1 || k > kMaxSkillsPerProfile)
            throw ConfigError("skill counts must lie in 1..50");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
}

ExperimentReport run_experiment(const AudienceIndex& index, const ExperimentPlan& plan,
                                const SuccessCurve* curve, const CampaignConfig& defaults,
                                const OracleConfig& oracle_cfg) {
    plan.validate();
    const Population& pop = index.population();
    const int max_k = *std::max_element(plan.skill_counts.begin(), plan.skill_counts.end());

    struct TargetInfo {
        uint32_t idx;
        std::vector<uint32_t> order;  // nested random selection
    };
    std::vector<TargetInfo> targets;
    for (const auto& id : plan.target_ids) {
        auto idx = pop.user_index(id);
        if (!idx) throw ConfigError("experiment target '" + id + "' is not in the population");
        const UserProfile& u = pop.users()[*idx];
        if (u.skill_count() < max_k)
            throw ConfigError("target '" + id + "' lists " + std::to_string(u.skill_count()) +
                              " skills but the plan needs " + std::to_string(max_k));
        if (!u.has_location())
            throw ConfigError("target '" + id + "' has no location; campaigns use location+skills");
        SelectionPlan sel =
            plan_selection(index, *idx, Scenario{true, Selection::Random}, plan.seed);
        targets.push_back({*idx, std::move(sel.skill_order)});
    }

    ExperimentReport report;
    std::map<int, ExperimentSkillSummary> by_skills;
    for (int k : plan.skill_counts) {
        auto& s = by_skills[k];
        s.skills = k;
        if (curve) s.model_probability = curve->at(k);
    }
    for (int rep = 1; rep <= plan.repetitions; ++rep) {
        for (size_t t = 0; t < targets.size(); ++t) {
            const UserProfile& user = pop.users()[targets[t].idx];
            for (int k : plan.skill_counts) {
                CampaignConfig cfg = defaults;
                cfg.campaign_id = user.id + "-k" + std::to_string(k) + "-r" + std::to_string(rep);
                cfg.policy = PolicyMode::ClientSideOnly;
                cfg.target_id = user.id;
                cfg.seed = derive_seed(plan.seed, "experiment", cfg.campaign_id);
                cfg.spec.location = pop.location_id(static_cast<uint32_t>(user.location));
                cfg.spec.skills.clear();
                for (int j = 0; j < k; ++j)
                    cfg.spec.skills.push_back(pop.skill_id(targets[t].order[j]));
                ExperimentCampaignRow row;
                row.target_id = user.id;
                row.skills = k;
                row.repetition = rep;
                row.outcome = launch(index, cfg, oracle_cfg);
                auto& s = by_skills[k];
                s.campaigns += 1;
                if (row.outcome.nanotarget_success) s.observed_successes += 1;
                report.campaigns.push_back(std::move(row));
            }
        }
    }
    for (auto& [k, s] : by_skills) {
        if (s.model_probability) s.expected_successes = expected_successes(*s.model_probability, s.campaigns);
        report.by_skills.push_back(s);
    }
    return report;
}

}  // namespace uniqaudit
