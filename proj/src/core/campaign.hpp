// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "risk.hpp"

namespace uniqaudit {

/// Minimum-audience policy regime. Enforced rejects campaigns whose true
/// audience is below the floor at launch (server-side validation);
/// ClientSideOnly permits the launch regardless (the bypassable pre-fix
/// behavior).
enum class PolicyMode { Enforced, ClientSideOnly };

PolicyMode parse_policy(std::string_view name);
std::string policy_name(PolicyMode mode);

struct ActivityModel {
    double daily_impression_prob = 0.9;  // per user per day, at most one/day
    double target_click_prob = 1.0;      // designated targets click on sight
    double bystander_click_prob = 0.1;
    double cost_per_impression = 0.05;   // reporting only; never affects logic

    void validate() const;
};

struct CampaignConfig {
    std::string campaign_id = "c1";
    AudienceSpec spec;
    std::optional<std::string> target_id;  // designated target for success evaluation
    int duration_days = 3;
    double budget = 10.0;
    PolicyMode policy = PolicyMode::Enforced;
    ActivityModel activity;
    uint64_t seed = 0;

    void validate() const;
};

struct UserDelivery {
    int impressions = 0;
    int clicks = 0;
};

struct BackendClick {
    std::string timestamp;  // synthetic "d<day>#<ordinal>"
    std::string campaign_id;
};

struct CampaignOutcome {
    std::string campaign_id;
    bool launched = false;
    int64_t reported_audience = 0;  // what the ads manager showed (censored)
    int impressions = 0;            // platform report
    int clicks = 0;
    std::map<std::string, UserDelivery> per_user;  // only users with deliveries
    std::vector<BackendClick> backend_clicks;
    double cost = 0.0;
    double budget = 0.0;
    bool nanotarget_success = false;  // exactly one reached user == the target
};

/// Simulates one campaign under the policy regime. Per-user-day draws are
/// seeded from (seed, campaign_id, user id, day), so outcomes do not
/// depend on scheduling.
CampaignOutcome launch(const AudienceIndex& index, const CampaignConfig& cfg,
                       const OracleConfig& oracle_cfg);

/// Expected number of successful campaigns: p x campaigns.
double expected_successes(double p, int campaigns);

struct ExperimentPlan {
    std::vector<std::string> target_ids;
    std::vector<int> skill_counts = {7, 10, 13, 16, 19};
    int repetitions = 1;
    uint64_t seed = 0;

    void validate() const;
};

struct ExperimentCampaignRow {
    std::string target_id;
    int skills = 0;
    int repetition = 0;
    CampaignOutcome outcome;
};

struct ExperimentSkillSummary {
    int skills = 0;
    int campaigns = 0;
    std::optional<double> model_probability;  // from the success curve, when given
    std::optional<double> expected_successes;
    int observed_successes = 0;
};

struct ExperimentReport {
    std::vector<ExperimentCampaignRow> campaigns;
    std::vector<ExperimentSkillSummary> by_skills;
};

/// Runs ClientSideOnly campaigns for every (target, skill count,
/// repetition): the spec is the target's location plus a nested random
/// selection of their skills. Observed successes are tallied against the
/// model expectation when a curve is supplied.
ExperimentReport run_experiment(const AudienceIndex& index, const ExperimentPlan& plan,
                                const SuccessCurve* curve, const CampaignConfig& defaults,
                                const OracleConfig& oracle_cfg);

}  // namespace uniqaudit
