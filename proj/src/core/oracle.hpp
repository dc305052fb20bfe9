// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "population.hpp"

namespace uniqaudit {

/// Targeting predicate: optional location AND a set of skills. An empty
/// spec matches everyone (worldwide audience).
struct AudienceSpec {
    std::optional<std::string> location;
    std::vector<std::string> skills;
};

struct OracleConfig {
    int64_t floor = 300;
    bool censored = true;  // false = ground-truth mode

    void validate() const {
        if (floor < 0) throw ConfigError("reporting floor must be non-negative");
    }
};

/// Read-only audience-size estimator over one population, emulating an ads
/// manager with a k-anonymity reporting floor. Queries are thread-safe
/// after construction.
class AudienceIndex {
  public:
    explicit AudienceIndex(const Population& pop);

    const Population& population() const { return *pop_; }

    /// Number of users matching the spec, with the floor applied in
    /// censored mode. Skills absent from the catalog match nobody.
    int64_t audience_size(const AudienceSpec& spec, const OracleConfig& cfg) const;

    /// Exact matching user ids (ground truth; never censored).
    std::vector<std::string> matched_users(const AudienceSpec& spec) const;
    std::vector<uint32_t> matched_user_indices(const AudienceSpec& spec) const;

    /// Worldwide audience of one catalog skill (posting length).
    uint32_t skill_audience(uint32_t skill_idx) const {
        return static_cast<uint32_t>(skill_postings_[skill_idx].size());
    }
    uint32_t location_audience(uint32_t loc_idx) const {
        return static_cast<uint32_t>(location_postings_[loc_idx].size());
    }

    // Audience sizes for every prefix of a per-user skill ordering:
    // out[j] = exact #users matching (location AND plan[0..j]). Stops
    // tracking the running set once it shrinks to the user themself, at
    // which point all remaining entries are 1.
    std::vector<uint32_t> prefix_audience_sizes(uint32_t user_idx,
                                                const std::vector<uint32_t>& skill_plan,
                                                bool use_location) const;

    static int64_t apply_floor(int64_t exact, const OracleConfig& cfg) {
        return cfg.censored && exact < cfg.floor ? cfg.floor : exact;
    }

  private:
    std::vector<uint32_t> resolve_intersection(std::optional<int32_t> location,
                                               const std::vector<uint32_t>& skill_idxs,
                                               bool any_unknown) const;

    const Population* pop_;
    std::vector<std::vector<uint32_t>> skill_postings_;     // skill -> ascending user indices
    std::vector<std::vector<uint32_t>> location_postings_;  // location -> ascending user indices
};

}  // namespace uniqaudit
