// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#include "reports.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace uniqaudit::reports {

ordered_json summary_json(const DistributionSummary& s) {
    ordered_json j;
    j["n_users"] = s.n_users;
    j["n_skilled"] = s.n_skilled;
    j["n_with_location"] = s.n_with_location;
    j["zero_skill_fraction"] = s.zero_skill_fraction;
    j["median_skills"] = s.median_skills;
    j["mean_skills"] = s.mean_skills;
    j["unique_skills"] = s.unique_skills;
    j["total_skill_occurrences"] = s.total_skill_occurrences;
    j["mean_users_per_skill"] = s.mean_users_per_skill;
    j["count_histogram"] = s.count_histogram;
    ordered_json cdf = ordered_json::array();
    ordered_json at_least = ordered_json::array();
    for (int n = 1; n <= kMaxSkillsPerProfile; ++n) {
        cdf.push_back(s.cdf_skilled[n]);
        at_least.push_back(s.frac_with_at_least[n]);
    }
    j["cdf_skilled"] = std::move(cdf);
    j["frac_with_at_least"] = std::move(at_least);
    return j;
}

std::string summary_cdf_csv(const DistributionSummary& s) {
    std::ostringstream out;
    out << "skills,cdf_skilled,frac_with_at_least\n";
    for (int n = 1; n <= kMaxSkillsPerProfile; ++n)
        out << n << ',' << format_double(s.cdf_skilled[n]) << ','
            << format_double(s.frac_with_at_least[n]) << '\n';
    return out.str();
}

std::string audience_size_csv(const DistributionSummary& s) {
    std::ostringstream out;
    out << "kind,id,audience\n";
    for (const auto& [id, n] : s.skill_audiences) out << "skill," << id << ',' << n << '\n';
    for (const auto& [id, n] : s.location_audiences) out << "location," << id << ',' << n << '\n';
    return out.str();
}

ordered_json fit_json(const FitResult& fit) {
    ordered_json j;
    j["a"] = fit.decay_a;
    j["b"] = fit.intercept_b;
    j["n_p"] = fit.n_p;
    j["r2"] = fit.r_squared;
    if (fit.ci_low && fit.ci_high)
        j["ci"] = ordered_json::array({*fit.ci_low, *fit.ci_high});
    else
        j["ci"] = nullptr;
    j["n_asymp"] = fit.n_asymp ? ordered_json(*fit.n_asymp) : ordered_json(nullptr);
    j["points_used"] = fit.used_points.size();
    ordered_json pts = ordered_json::array();
    for (const auto& [n, as] : fit.used_points) pts.push_back(ordered_json::array({n, as}));
    j["points"] = std::move(pts);
    return j;
}

ordered_json scenario_table_json(const ScenarioTable& table) {
    ordered_json arr = ordered_json::array();
    for (const auto& cell : table.cells) {
        ordered_json j;
        j["scenario"] = cell.scenario;
        j["q"] = cell.q;
        if (cell.fit) {
            j["n_p"] = cell.fit->n_p;
            j["ci"] = cell.fit->ci_low && cell.fit->ci_high
                          ? ordered_json::array({*cell.fit->ci_low, *cell.fit->ci_high})
                          : ordered_json(nullptr);
            j["r2"] = cell.fit->r_squared;
            j["n_asymp"] =
                cell.fit->n_asymp ? ordered_json(*cell.fit->n_asymp) : ordered_json(nullptr);
            j["points_used"] = cell.fit->used_points.size();
        } else {
            j["n_p"] = nullptr;
            j["error"] = cell.error;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string scenario_table_csv(const ScenarioTable& table) {
    std::vector<double> qs;
    for (const auto& c : table.cells)
        if (std::find(qs.begin(), qs.end(), c.q) == qs.end()) qs.push_back(c.q);
    std::ostringstream out;
    out << "scenario";
    for (double q : qs)
        out << ",n_p@" << format_double(q) << ",ci_low@" << format_double(q) << ",ci_high@"
            << format_double(q) << ",r2@" << format_double(q);
    out << '\n';
    std::vector<std::string> names;
    for (const auto& c : table.cells)
        if (std::find(names.begin(), names.end(), c.scenario) == names.end())
            names.push_back(c.scenario);
    for (const auto& name : names) {
        out << name;
        for (double q : qs) {
            const ScenarioCell* cell = table.find(name, q);
            if (cell && cell->fit) {
                out << ',' << format_double(cell->fit->n_p);
                out << ',' << (cell->fit->ci_low ? format_double(*cell->fit->ci_low) : "");
                out << ',' << (cell->fit->ci_high ? format_double(*cell->fit->ci_high) : "");
                out << ',' << format_double(cell->fit->r_squared);
            } else {
                out << ",,,,";
            }
        }
        out << '\n';
    }
    return out.str();
}

ordered_json affected_json(const AffectedEstimate& e) {
    ordered_json j;
    j["p_uniqueness"] = e.p_uniqueness;
    j["n_required"] = e.n_required;
    j["frac_with_n_or_more"] = e.frac_with_n_or_more;
    j["base"] = e.base;
    j["affected_count"] = e.affected_count;
    j["affected_millions"] = e.affected_count / 1e6;
    j["affected_pct"] = e.affected_pct * 100.0;
    return j;
}

std::string affected_csv(const AffectedEstimate& e) {
    std::ostringstream out;
    out << "p_uniqueness,n_required,frac_with_n_or_more,base,affected_millions,affected_pct\n";
    out << format_double(e.p_uniqueness) << ',' << e.n_required << ','
        << format_double(e.frac_with_n_or_more) << ',' << e.base << ','
        << format_double(e.affected_count / 1e6) << ',' << format_double(e.affected_pct * 100.0)
        << '\n';
    return out.str();
}

ordered_json outcome_json(const CampaignOutcome& o) {
    ordered_json j;
    j["campaign_id"] = o.campaign_id;
    j["launched"] = o.launched;
    j["reported_audience"] = o.reported_audience;
    ordered_json platform;
    platform["impressions"] = o.impressions;
    platform["clicks"] = o.clicks;
    j["platform_report"] = std::move(platform);
    ordered_json per_user = ordered_json::object();
    for (const auto& [uid, d] : o.per_user) {
        ordered_json u;
        u["impressions"] = d.impressions;
        u["clicks"] = d.clicks;
        per_user[uid] = std::move(u);
    }
    j["per_user"] = std::move(per_user);
    ordered_json backend = ordered_json::array();
    for (const auto& b : o.backend_clicks)
        backend.push_back(ordered_json::array({b.timestamp, b.campaign_id}));
    j["backend_clicks"] = std::move(backend);
    j["cost"] = o.cost;
    j["budget"] = o.budget;
    j["nanotarget_success"] = o.nanotarget_success;
    return j;
}

ordered_json experiment_json(const ExperimentReport& r) {
    ordered_json j;
    ordered_json by_skills = ordered_json::array();
    for (const auto& s : r.by_skills) {
        ordered_json row;
        row["skills"] = s.skills;
        row["campaigns"] = s.campaigns;
        row["model_probability"] =
            s.model_probability ? ordered_json(*s.model_probability) : ordered_json(nullptr);
        row["expected_successes"] =
            s.expected_successes ? ordered_json(*s.expected_successes) : ordered_json(nullptr);
        row["observed_successes"] = s.observed_successes;
        by_skills.push_back(std::move(row));
    }
    j["by_skills"] = std::move(by_skills);
    ordered_json campaigns = ordered_json::array();
    for (const auto& c : r.campaigns) {
        ordered_json row;
        row["target"] = c.target_id;
        row["skills"] = c.skills;
        row["repetition"] = c.repetition;
        row["outcome"] = outcome_json(c.outcome);
        campaigns.push_back(std::move(row));
    }
    j["campaigns"] = std::move(campaigns);
    return j;
}

ordered_json user_risk_json(const UserRisk& r) {
    ordered_json j;
    j["user_id"] = r.user_id;
    j["skill_count"] = r.skill_count;
    j["p_success"] = r.p;
    j["zero_skills"] = r.zero_skills;
    j["extrapolated"] = r.extrapolated;
    return j;
}

}  // namespace uniqaudit::reports
