// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#pragma once

#include <array>
#include <optional>
#include <string>

#include "estimator.hpp"

namespace uniqaudit {

/// Probability that a campaign built from the location and N profile
/// skills reaches exactly the targeted user, for N = 1..50. Monotone
/// non-decreasing in N; entries outside the fitted quantile grid are
/// clamped and flagged extrapolated.
struct SuccessCurve {
    std::string scenario;
    std::array<double, kMaxSkillsPerProfile> p{};
    std::array<bool, kMaxSkillsPerProfile> extrapolated{};

    double at(int n) const { return p[n - 1]; }
};

struct SuccessCurveConfig {
    int grid_min = 1;   // quantile grid Q = grid_min..grid_max (percent)
    int grid_max = 99;
    int min_uncensored_points = 3;
    double max_unstable_fraction = 0.5;
    unsigned threads = 0;
};

/// Inverts n_p(Q) fitted over the quantile grid: p_success(N) solves
/// N_P(P) = N by linear interpolation, after isotonic adjustment. Throws
/// FitError when more than max_unstable_fraction of the grid fails to fit.
SuccessCurve success_curve(const SampleMatrix& matrix, const SuccessCurveConfig& cfg = {});

/// Brute-force validation oracle, independent of the fitting path:
/// fraction of eligible users (>= N skills) whose location+first-N-plan
/// spec matches exactly one user. Empty when no user is eligible.
std::optional<double> uniqueness_ground_truth(const SampleMatrix& matrix, int n);

struct AffectedEstimate {
    double p_uniqueness = 0.0;
    int n_required = 0;
    double frac_with_n_or_more = 0.0;
    uint64_t base = 0;
    double affected_count = 0.0;  // p * frac * base
    double affected_pct = 0.0;    // affected_count / base
};

AffectedEstimate estimate_affected(double p, int n_required, double frac, uint64_t base);

struct UserRisk {
    std::string user_id;
    int skill_count = 0;
    double p = 0.0;
    bool zero_skills = false;  // not targetable; risk 0 by convention
    bool extrapolated = false;
};

/// Success probability at N = the user's reported skill count (clamped to
/// 50), read from a Random-selection curve.
UserRisk user_risk(const Population& pop, std::string_view user_id, const SuccessCurve& curve);

/// Monotone non-decreasing least-squares fit (pool adjacent violators).
std::vector<double> isotonic_non_decreasing(std::vector<double> values);

/// CSV rows (N, p_success, extrapolated) for plotting.
std::string curve_csv(const SuccessCurve& curve);

}  // namespace uniqaudit
