// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "methodology.hpp"

namespace uniqaudit {

/// Result of the censored log-linear fit log(AS) = -A*N + B. n_p = B/A is
/// the N where the fitted line crosses log(AS) = 0; the paper-style
/// reading is a lower-bound-flavored estimate of the number of skills
/// that makes a user unique with probability Q/100.
struct FitResult {
    double decay_a = 0.0;    // A > 0
    double intercept_b = 0.0;
    double n_p = 0.0;        // B / A
    double r_squared = 0.0;
    std::optional<double> ci_low;   // 95% bootstrap percentile bounds on n_p
    std::optional<double> ci_high;
    std::optional<int> n_asymp;     // smallest N with a censored quantile value
    std::vector<std::pair<int, double>> used_points;  // uncensored (N, AS) pairs
};

struct EstimatorConfig {
    int bootstrap_iterations = 1000;   // paper-scale value is 10000
    std::vector<double> quantiles = {50.0, 75.0, 90.0};
    int min_uncensored_points = 3;
    uint64_t seed = 0;
    unsigned threads = 0;
    // fraction of degenerate bootstrap iterations tolerated before the
    // estimate is reported unstable
    double max_degenerate_fraction = 0.20;

    void validate() const;
};

/// OLS of ln(AS) on N over entries with AS > floor. Throws FitError when
/// fewer than min_points entries are uncensored or the slope does not
/// decay.
FitResult fit_np(const QuantileVector& vec, int64_t floor, int min_points = 3);

/// fit_np plus a user-resampling bootstrap CI. Iteration i draws its
/// resample from seed hash(seed, i), so the result is independent of the
/// thread count. Throws FitError when the full-sample fit fails or more
/// than max_degenerate_fraction of iterations degenerate.
FitResult bootstrap_np(const SampleMatrix& matrix, double q, const EstimatorConfig& cfg);

struct ScenarioCell {
    std::string scenario;
    double q = 0.0;
    std::optional<FitResult> fit;  // empty cell on per-cell fit errors
    std::string error;
};

struct ScenarioTable {
    std::vector<ScenarioCell> cells;  // scenario-major, quantile-minor

    const ScenarioCell* find(std::string_view scenario, double q) const;
};

/// Table-shaped report over all four scenarios and cfg.quantiles.
/// Per-cell fit errors are reported as annotated empty cells.
ScenarioTable run_scenarios(const Population& pop, const AudienceIndex& index,
                            const EstimatorConfig& cfg, const OracleConfig& oracle_cfg);

}  // namespace uniqaudit
