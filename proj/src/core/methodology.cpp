// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#include "methodology.hpp"

#include <algorithm>
#include <sstream>

namespace uniqaudit {

std::string Scenario::name() const {
    std::string n = use_location ? "lo_" : "sk_";
    n += selection == Selection::Random ? "r" : "lp";
    return n;
}

Scenario Scenario::parse(std::string_view name) {
    for (const Scenario& s : all())
        if (s.name() == name) return s;
    throw ConfigError("unknown scenario '" + std::string(name) +
                      "' (expected sk_r, sk_lp, lo_r or lo_lp)");
}

std::array<Scenario, 4> Scenario::all() {
    return {Scenario{false, Selection::Random}, Scenario{false, Selection::LeastPopular},
            Scenario{true, Selection::Random}, Scenario{true, Selection::LeastPopular}};
}

SelectionPlan plan_selection(const AudienceIndex& index, uint32_t user_idx,
                             const Scenario& scenario, uint64_t seed) {
    const Population& pop = index.population();
    const UserProfile& user = pop.users()[user_idx];
    if (user.skills.empty()) throw DataError("user '" + user.id + "' reports no skills");
    SelectionPlan plan;
    plan.user_idx = user_idx;
    plan.skill_order = user.skills;
    if (scenario.selection == Selection::Random) {
        Rng rng(derive_seed(seed, "plan", user.id));
        rng.shuffle(std::span<uint32_t>(plan.skill_order));
    } else {
        std::sort(plan.skill_order.begin(), plan.skill_order.end(),
                  [&](uint32_t a, uint32_t b) {
                      uint32_t wa = index.skill_audience(a);
                      uint32_t wb = index.skill_audience(b);
                      if (wa != wb) return wa < wb;
                      return pop.skill_id(a) < pop.skill_id(b);
                  });
    }
    return plan;
}

SampleMatrix::SampleMatrix(const Population& pop, const AudienceIndex& index,
                           const Scenario& scenario, const OracleConfig& oracle_cfg, uint64_t seed,
                           unsigned threads)
    : scenario_(scenario), oracle_cfg_(oracle_cfg), seed_(seed) {
    oracle_cfg.validate();
    if (pop.size() == 0) throw DataError("population is empty");
    for (uint32_t i = 0; i < pop.size(); ++i) {
        const UserProfile& u = pop.users()[i];
        if (u.skills.empty()) continue;
        if (scenario.use_location && !u.has_location()) continue;
        eligible_.push_back(i);
    }
    user_sizes_.resize(eligible_.size());
    parallel_for(eligible_.size(), threads, [&](size_t begin, size_t end) {
        for (size_t j = begin; j < end; ++j) {
            SelectionPlan plan = plan_selection(index, eligible_[j], scenario, seed);
            user_sizes_[j] =
                index.prefix_audience_sizes(eligible_[j], plan.skill_order, scenario.use_location);
        }
    });
    for (size_t j = 0; j < user_sizes_.size(); ++j) {
        const auto& sizes = user_sizes_[j];
        for (size_t n = 0; n < sizes.size(); ++n)
            rows_[n].emplace_back(sizes[n], static_cast<uint32_t>(j));
    }
    for (auto& row : rows_) std::sort(row.begin(), row.end());
}

int SampleMatrix::sample_count(int n) const {
    if (n < 1 || n > kMaxSkillsPerProfile) throw ConfigError("N must lie in 1..50");
    return static_cast<int>(rows_[n - 1].size());
}

const std::vector<std::pair<uint32_t, uint32_t>>& SampleMatrix::sorted_row(int n) const {
    if (n < 1 || n > kMaxSkillsPerProfile) throw ConfigError("N must lie in 1..50");
    return rows_[n - 1];
}

QuantileVector quantile_vector(const SampleMatrix& matrix, double q) {
    if (!(q > 0.0 && q < 100.0)) throw ConfigError("quantile must lie in (0, 100)");
    QuantileVector vec;
    vec.q = q;
    for (int n = 1; n <= kMaxSkillsPerProfile; ++n) {
        const auto& row = matrix.sorted_row(n);
        if (row.empty()) continue;
        double h = (static_cast<double>(row.size()) - 1.0) * (q / 100.0);
        size_t lo = static_cast<size_t>(h);
        double g = h - static_cast<double>(lo);
        double a = matrix.reported(row[lo].first);
        double value = a;
        if (g > 0.0 && lo + 1 < row.size())
            value = a + g * (matrix.reported(row[lo + 1].first) - a);
        vec.values[n - 1] = value;
    }
    return vec;
}

std::string quantile_plot_csv(const SampleMatrix& matrix, const std::vector<double>& quantiles) {
    std::ostringstream out;
    out << "N,Q,AS\n";
    for (double q : quantiles) {
        QuantileVector vec = quantile_vector(matrix, q);
        for (int n = 1; n <= kMaxSkillsPerProfile; ++n)
            if (vec.at(n))
                out << n << ',' << format_double(q) << ',' << format_double(*vec.at(n)) << '\n';
    }
    return out.str();
}

}  // namespace uniqaudit
