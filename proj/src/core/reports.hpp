// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#pragma once

#include <string>

#include <json.hpp>

#include "campaign.hpp"
#include "estimator.hpp"
#include "population.hpp"
#include "risk.hpp"

// Report serialization. All emitters use insertion-ordered JSON and
// shortest round-trip number formatting so that outputs are byte-stable
// across runs and thread counts.
namespace uniqaudit::reports {

using ordered_json = nlohmann::ordered_json;

ordered_json summary_json(const DistributionSummary& s);
std::string summary_cdf_csv(const DistributionSummary& s);        // Fig 1-style plot data
std::string audience_size_csv(const DistributionSummary& s);      // Fig 2-style plot data

ordered_json fit_json(const FitResult& fit);
ordered_json scenario_table_json(const ScenarioTable& table);
std::string scenario_table_csv(const ScenarioTable& table);       // Table 1 layout

ordered_json affected_json(const AffectedEstimate& e);
std::string affected_csv(const AffectedEstimate& e);              // Table 2 layout

ordered_json outcome_json(const CampaignOutcome& o);
ordered_json experiment_json(const ExperimentReport& r);

ordered_json user_risk_json(const UserRisk& r);

}  // namespace uniqaudit::reports
