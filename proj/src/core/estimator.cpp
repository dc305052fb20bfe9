// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#include "estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uniqaudit {

void EstimatorConfig::validate() const {
    if (bootstrap_iterations < 1) throw ConfigError("bootstrap_iterations must be >= 1");
    if (min_uncensored_points < 3) throw ConfigError("min_uncensored_points must be >= 3");
    if (quantiles.empty()) throw ConfigError("at least one quantile is required");
    for (double q : quantiles)
        if (!(q > 0.0 && q < 100.0)) throw ConfigError("quantiles must lie in (0, 100)");
    if (!(max_degenerate_fraction >= 0.0 && max_degenerate_fraction <= 1.0))
        throw ConfigError("max_degenerate_fraction must lie in [0, 1]");
}

FitResult fit_np(const QuantileVector& vec, int64_t floor, int min_points) {
    FitResult result;
    for (int n = 1; n <= kMaxSkillsPerProfile; ++n) {
        auto v = vec.at(n);
        if (!v) continue;
        if (*v <= static_cast<double>(floor)) {
            if (!result.n_asymp) result.n_asymp = n;
            continue;  // censored entries never enter the fit
        }
        result.used_points.emplace_back(n, *v);
    }
    if (static_cast<int>(result.used_points.size()) < min_points)
        throw FitError("degenerate fit: " + std::to_string(result.used_points.size()) +
                       " uncensored points, need " + std::to_string(min_points));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(result.used_points.size());
    for (const auto& [N, as] : result.used_points) {
        double x = static_cast<double>(N);
        double y = std::log(as);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / n;
    // tolerance absorbs rounding on flat vectors, whose slope may land at
    // -1e-17 instead of exactly zero
    if (!(slope < -1e-12))
        throw FitError("non-decaying fit: slope " + format_double(slope) + " is not negative");
    result.decay_a = -slope;
    result.intercept_b = intercept;
    result.n_p = intercept / result.decay_a;
    double ss_res = 0, ss_tot = 0, mean_y = sy / n;
    for (const auto& [N, as] : result.used_points) {
        double y = std::log(as);
        double fitted = slope * static_cast<double>(N) + intercept;
        ss_res += (y - fitted) * (y - fitted);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    result.r_squared = ss_tot <= 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return result;
}

namespace {

// Quantile vector of one bootstrap resample, read off the pre-sorted rows
// by accumulating per-user multiplicities up to the interpolation ranks.
QuantileVector resampled_quantile_vector(const SampleMatrix& matrix,
                                         const std::vector<uint32_t>& counts,
                                         const std::vector<uint64_t>& m_by_n, double q) {
    QuantileVector vec;
    vec.q = q;
    for (int n = 1; n <= kMaxSkillsPerProfile; ++n) {
        uint64_t m = m_by_n[n];
        if (m == 0) continue;
        double h = (static_cast<double>(m) - 1.0) * (q / 100.0);
        uint64_t r0 = static_cast<uint64_t>(h);
        double g = h - static_cast<double>(r0);
        double v0 = -1.0, v1 = -1.0;
        uint64_t cum = 0;
        for (const auto& [size, ord] : matrix.sorted_row(n)) {
            uint32_t c = counts[ord];
            if (c == 0) continue;
            cum += c;
            if (v0 < 0.0 && cum > r0) v0 = matrix.reported(size);
            if (cum > r0 + 1) {
                v1 = matrix.reported(size);
                break;
            }
        }
        if (v1 < 0.0) v1 = v0;
        vec.values[n - 1] = v0 + g * (v1 - v0);
    }
    return vec;
}

}  // namespace

FitResult bootstrap_np(const SampleMatrix& matrix, double q, const EstimatorConfig& cfg) {
    cfg.validate();
    const int64_t floor = matrix.oracle_config().floor;
    FitResult full = fit_np(quantile_vector(matrix, q), floor, cfg.min_uncensored_points);

    const size_t n_eligible = matrix.eligible().size();
    std::vector<uint32_t> skill_counts(n_eligible);
    for (size_t j = 0; j < n_eligible; ++j)
        skill_counts[j] = static_cast<uint32_t>(matrix.user_sizes(j).size());

    const int iters = cfg.bootstrap_iterations;
    std::vector<double> replicates(iters, std::numeric_limits<double>::quiet_NaN());
    parallel_for(iters, cfg.threads, [&](size_t begin, size_t end) {
        std::vector<uint32_t> counts(n_eligible);
        std::vector<uint64_t> by_count(kMaxSkillsPerProfile + 1);
        std::vector<uint64_t> m_by_n(kMaxSkillsPerProfile + 1);
        for (size_t i = begin; i < end; ++i) {
            Rng rng(derive_seed(cfg.seed, "bootstrap", i));
            std::fill(counts.begin(), counts.end(), 0);
            for (size_t t = 0; t < n_eligible; ++t)
                counts[rng.uniform_index(n_eligible)] += 1;
            std::fill(by_count.begin(), by_count.end(), 0);
            for (size_t j = 0; j < n_eligible; ++j) by_count[skill_counts[j]] += counts[j];
            uint64_t suffix = 0;
            for (int n = kMaxSkillsPerProfile; n >= 1; --n) {
                suffix += by_count[n];
                m_by_n[n] = suffix;
            }
            try {
                QuantileVector vec = resampled_quantile_vector(matrix, counts, m_by_n, q);
                replicates[i] = fit_np(vec, floor, cfg.min_uncensored_points).n_p;
            } catch (const FitError&) {
                // NaN marks a degenerate iteration
            }
        }
    });

    std::vector<double> valid;
    valid.reserve(iters);
    for (double r : replicates)
        if (!std::isnan(r)) valid.push_back(r);
    double degenerate_fraction = 1.0 - static_cast<double>(valid.size()) / iters;
    if (degenerate_fraction > cfg.max_degenerate_fraction)
        throw FitError("unstable estimate: " + format_double(degenerate_fraction * 100.0) +
                       "% of bootstrap iterations degenerated");
    std::sort(valid.begin(), valid.end());
    full.ci_low = quantile_type7(std::span<const double>(valid), 2.5);
    full.ci_high = quantile_type7(std::span<const double>(valid), 97.5);
    return full;
}

const ScenarioCell* ScenarioTable::find(std::string_view scenario, double q) const {
    for (const auto& c : cells)
        if (c.scenario == scenario && c.q == q) return &c;
    return nullptr;
}

ScenarioTable run_scenarios(const Population& pop, const AudienceIndex& index,
                            const EstimatorConfig& cfg, const OracleConfig& oracle_cfg) {
    cfg.validate();
    oracle_cfg.validate();
    ScenarioTable table;
    for (const Scenario& scenario : Scenario::all()) {
        std::optional<SampleMatrix> matrix;
        std::string build_error;
        try {
            matrix.emplace(pop, index, scenario, oracle_cfg, cfg.seed, cfg.threads);
        } catch (const std::exception& e) {
            build_error = e.what();
        }
        for (double q : cfg.quantiles) {
            ScenarioCell cell;
            cell.scenario = scenario.name();
            cell.q = q;
            if (!matrix) {
                cell.error = build_error;
            } else {
                try {
                    cell.fit = bootstrap_np(*matrix, q, cfg);
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
            }
            table.cells.push_back(std::move(cell));
        }
    }
    return table;
}

}  // namespace uniqaudit
