// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#include "risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace uniqaudit {

std::vector<double> isotonic_non_decreasing(std::vector<double> values) {
    // classic PAVA with block merging
    std::vector<double> mean;
    std::vector<size_t> width;
    for (double v : values) {
        mean.push_back(v);
        width.push_back(1);
        while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
            double m = (mean[mean.size() - 2] * width[width.size() - 2] +
                        mean.back() * width.back()) /
                       static_cast<double>(width[width.size() - 2] + width.back());
            width[width.size() - 2] += width.back();
            mean[mean.size() - 2] = m;
            mean.pop_back();
            width.pop_back();
        }
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (size_t b = 0; b < mean.size(); ++b) out.insert(out.end(), width[b], mean[b]);
    return out;
}

SuccessCurve success_curve(const SampleMatrix& matrix, const SuccessCurveConfig& cfg) {
    if (cfg.grid_min < 1 || cfg.grid_max > 99 || cfg.grid_min > cfg.grid_max)
        throw ConfigError("quantile grid must satisfy 1 <= min <= max <= 99");
    const int64_t floor = matrix.oracle_config().floor;
    const int grid_size = cfg.grid_max - cfg.grid_min + 1;

    std::vector<double> np_by_cell(grid_size, std::numeric_limits<double>::quiet_NaN());
    parallel_for(grid_size, cfg.threads, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            double q = static_cast<double>(cfg.grid_min + static_cast<int>(i));
            try {
                np_by_cell[i] =
                    fit_np(quantile_vector(matrix, q), floor, cfg.min_uncensored_points).n_p;
            } catch (const FitError&) {
            }
        }
    });

    std::vector<double> qs, nps;
    for (int i = 0; i < grid_size; ++i) {
        if (!std::isnan(np_by_cell[i])) {
            qs.push_back(static_cast<double>(cfg.grid_min + i));
            nps.push_back(np_by_cell[i]);
        }
    }
    double unstable = 1.0 - static_cast<double>(qs.size()) / grid_size;
    if (unstable > cfg.max_unstable_fraction)
        throw FitError("unstable fits over " + format_double(unstable * 100.0) +
                       "% of the quantile grid");

    // n_p should grow with the quantile; isotonic adjustment makes the
    // inversion well defined under fit noise
    nps = isotonic_non_decreasing(std::move(nps));

    SuccessCurve curve;
    curve.scenario = matrix.scenario().name();
    for (int n = 1; n <= kMaxSkillsPerProfile; ++n) {
        double& p = curve.p[n - 1];
        double N = static_cast<double>(n);
        if (N <= nps.front()) {
            p = qs.front() / 100.0;
            curve.extrapolated[n - 1] = true;
        } else if (N >= nps.back()) {
            p = qs.back() / 100.0;
            curve.extrapolated[n - 1] = true;
        } else {
            size_t hi = std::upper_bound(nps.begin(), nps.end(), N) - nps.begin();
            size_t lo = hi - 1;  // nps[lo] <= N < nps[hi]
            if (nps[hi] - nps[lo] <= 0.0) {
                p = qs[hi] / 100.0;
            } else {
                double t = (N - nps[lo]) / (nps[hi] - nps[lo]);
                p = (qs[lo] + t * (qs[hi] - qs[lo])) / 100.0;
            }
        }
    }
    // enforce the monotone-in-N invariant on the final curve
    std::vector<double> smoothed = isotonic_non_decreasing(
        std::vector<double>(curve.p.begin(), curve.p.end()));
    std::copy(smoothed.begin(), smoothed.end(), curve.p.begin());
    return curve;
}

std::optional<double> uniqueness_ground_truth(const SampleMatrix& matrix, int n) {
    if (n < 1 || n > kMaxSkillsPerProfile) throw ConfigError("N must lie in 1..50");
    const auto& row = matrix.sorted_row(n);
    if (row.empty()) return std::nullopt;
    size_t unique = 0;
    for (const auto& [size, ord] : row) {
        if (size != 1) break;  // rows are sorted ascending
        ++unique;
    }
    return static_cast<double>(unique) / static_cast<double>(row.size());
}

AffectedEstimate estimate_affected(double p, int n_required, double frac, uint64_t base) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
    if (!(frac >= 0.0 && frac <= 1.0)) throw ConfigError("frac must lie in [0, 1]");
    if (n_required < 0) throw ConfigError("n_required must be non-negative");
    if (base == 0) throw ConfigError("base must be positive");
    AffectedEstimate e;
    e.p_uniqueness = p;
    e.n_required = n_required;
    e.frac_with_n_or_more = frac;
    e.base = base;
    e.affected_count = p * frac * static_cast<double>(base);
    e.affected_pct = e.affected_count / static_cast<double>(base);
    return e;
}

UserRisk user_risk(const Population& pop, std::string_view user_id, const SuccessCurve& curve) {
    auto idx = pop.user_index(user_id);
    if (!idx) throw DataError("unknown user id '" + std::string(user_id) + "'");
    const UserProfile& user = pop.users()[*idx];
    UserRisk risk;
    risk.user_id = user.id;
    risk.skill_count = user.skill_count();
    if (user.skills.empty()) {
        risk.zero_skills = true;
        risk.p = 0.0;
        return risk;
    }
    int n = std::min(risk.skill_count, kMaxSkillsPerProfile);
    risk.p = curve.at(n);
    risk.extrapolated = curve.extrapolated[n - 1];
    return risk;
}

std::string curve_csv(const SuccessCurve& curve) {
    std::ostringstream out;
    out << "N,p_success,extrapolated\n";
    for (int n = 1; n <= kMaxSkillsPerProfile; ++n)
        out << n << ',' << format_double(curve.p[n - 1]) << ','
            << (curve.extrapolated[n - 1] ? 1 : 0) << '\n';
    return out.str();
}

}  // namespace uniqaudit
