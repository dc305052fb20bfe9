// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "population.hpp"

namespace uniqaudit {

enum class Selection { Random, LeastPopular };

/// One of the four analysis scenarios: skills-only vs location+skills,
/// crossed with random vs least-popular skill selection.
struct Scenario {
    bool use_location = false;
    Selection selection = Selection::Random;

    std::string name() const;          // sk_r, sk_lp, lo_r, lo_lp
    static Scenario parse(std::string_view name);
    static std::array<Scenario, 4> all();
};

/// Per-user skill ordering, fixed for a run. Prefixes are nested: the
/// N-skill selection extends the (N-1)-skill one.
struct SelectionPlan {
    uint32_t user_idx = 0;
    std::vector<uint32_t> skill_order;  // permutation of the user's skills
};

/// Orders one user's skills for a scenario. Random uses a seeded
/// permutation (sub-seed derived from the user id); LeastPopular sorts
/// ascending by worldwide ground-truth audience size, ties broken by
/// skill id. Users without skills are not plannable.
SelectionPlan plan_selection(const AudienceIndex& index, uint32_t user_idx,
                             const Scenario& scenario, uint64_t seed);

// Audience-size samples for N = 1..50: one entry per eligible user with
// >= N skills, built from nested selection prefixes. Exact sizes are
// cached per user; the reporting floor is applied when reading values, so
// one matrix serves both censored and ground-truth consumers.
class SampleMatrix {
  public:
    SampleMatrix(const Population& pop, const AudienceIndex& index, const Scenario& scenario,
                 const OracleConfig& oracle_cfg, uint64_t seed, unsigned threads = 0);

    const Scenario& scenario() const { return scenario_; }
    const OracleConfig& oracle_config() const { return oracle_cfg_; }
    uint64_t seed() const { return seed_; }

    /// Users entering the matrix (>= 1 skill; located for lo_* scenarios).
    const std::vector<uint32_t>& eligible() const { return eligible_; }
    /// Exact prefix audience sizes for eligible ordinal j (length = skill count).
    const std::vector<uint32_t>& user_sizes(size_t j) const { return user_sizes_[j]; }

    int sample_count(int n) const;  // #users with >= n skills, n in 1..50

    /// Ascending (exact) sizes of the N-skill samples with the eligible
    /// ordinal of the contributing user.
    const std::vector<std::pair<uint32_t, uint32_t>>& sorted_row(int n) const;

    /// Value as reported by the oracle (floor applied in censored mode).
    double reported(uint32_t exact_size) const {
        return static_cast<double>(AudienceIndex::apply_floor(exact_size, oracle_cfg_));
    }

  private:
    Scenario scenario_;
    OracleConfig oracle_cfg_;
    uint64_t seed_ = 0;
    std::vector<uint32_t> eligible_;
    std::vector<std::vector<uint32_t>> user_sizes_;
    std::array<std::vector<std::pair<uint32_t, uint32_t>>, kMaxSkillsPerProfile> rows_;
};

/// V_AS(Q): the 50-slot vector of Q-th percentile audience sizes by N.
/// Slots without samples are absent.
struct QuantileVector {
    double q = 0.0;
    std::array<std::optional<double>, kMaxSkillsPerProfile> values{};  // index N-1

    std::optional<double> at(int n) const { return values[n - 1]; }
};

/// Type-7 per-N quantiles of the (censored-mode) sample matrix.
QuantileVector quantile_vector(const SampleMatrix& matrix, double q);

/// Plot data rows (N, Q, AS) for a set of quantiles.
std::string quantile_plot_csv(const SampleMatrix& matrix, const std::vector<double>& quantiles);

}  // namespace uniqaudit
