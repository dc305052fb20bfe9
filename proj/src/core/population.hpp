// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace uniqaudit {

/// Hard platform cap on the number of skills a profile may list.
inline constexpr int kMaxSkillsPerProfile = 50;

struct CatalogEntry {
    std::string id;
    double weight = 0.0;  // generation weight; realized frequency for ingested data
};

/// One platform member. Skills and location are stored as indices into the
/// owning Population's catalogs; kNoLocation marks an absent location.
struct UserProfile {
    static constexpr int32_t kNoLocation = -1;

    std::string id;
    int32_t location = kNoLocation;
    std::vector<uint32_t> skills;  // ordered, no duplicates, size <= 50

    bool has_location() const { return location != kNoLocation; }
    int skill_count() const { return static_cast<int>(skills.size()); }
};

// Defaults are calibrated so that, at desk scale (100k users, floor 30),
// every scenario fits with healthy uncensored windows and the estimated
// success curves track brute-force uniqueness. The skill-count law keeps
// the published shape: median 15, ~29% above 25, 25% with no skills.
struct GeneratorConfig {
    uint32_t n_users = 100'000;
    uint32_t n_skills = 62;
    double skill_popularity_exponent = 0.20;
    uint32_t n_locations = 13;
    double location_popularity_exponent = 1.35;
    double p_zero_skills = 0.25;
    // discretized log-normal over [1, min(50, n_skills)] for the per-user
    // skill count; log-mean ln(15) puts the median at 15
    double skill_count_log_mean = 2.70805020110221;
    double skill_count_log_sigma = 0.974;
    uint64_t total_base = 970'000'000;
    uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

class Population {
  public:
    Population() = default;
    Population(std::vector<UserProfile> users, std::vector<CatalogEntry> skills,
               std::vector<CatalogEntry> locations, uint64_t seed, uint64_t total_base,
               std::string generator_config_json = {});

    const std::vector<UserProfile>& users() const { return users_; }
    const std::vector<CatalogEntry>& skill_catalog() const { return skill_catalog_; }
    const std::vector<CatalogEntry>& location_catalog() const { return location_catalog_; }
    uint64_t seed() const { return seed_; }
    uint64_t total_base() const { return total_base_; }
    const std::string& generator_config_json() const { return generator_config_json_; }

    size_t size() const { return users_.size(); }

    std::optional<uint32_t> skill_index(std::string_view id) const;
    std::optional<uint32_t> location_index(std::string_view id) const;
    std::optional<uint32_t> user_index(std::string_view id) const;

    const std::string& skill_id(uint32_t idx) const { return skill_catalog_[idx].id; }
    const std::string& location_id(uint32_t idx) const { return location_catalog_[idx].id; }

  private:
    void check_invariants() const;
    void build_lookup();

    std::vector<UserProfile> users_;
    std::vector<CatalogEntry> skill_catalog_;
    std::vector<CatalogEntry> location_catalog_;
    uint64_t seed_ = 0;
    uint64_t total_base_ = 0;
    std::string generator_config_json_;
    std::unordered_map<std::string_view, uint32_t> skill_lookup_;
    std::unordered_map<std::string_view, uint32_t> location_lookup_;
    std::unordered_map<std::string_view, uint32_t> user_lookup_;
};

/// Seeded synthetic population. Identical (config, seed) pairs produce
/// byte-identical serialized populations.
Population generate(const GeneratorConfig& config);

enum class ProfileFormat { JsonLines };

struct LoadResult {
    Population population;
    std::vector<std::string> warnings;
};

/// Reads a population from the JSON-lines profile format. Catalogs are
/// inferred from the data (weights = realized frequencies) unless the
/// optional header line carries explicit catalogs.
LoadResult ingest(const std::string& path, ProfileFormat format = ProfileFormat::JsonLines);
LoadResult ingest_stream(std::istream& in, ProfileFormat format = ProfileFormat::JsonLines);

/// Canonical JSON-lines serialization (header line + one user per line).
void write_jsonl(const Population& pop, const std::string& path);
std::string to_jsonl(const Population& pop);

struct DistributionSummary {
    uint64_t n_users = 0;
    uint64_t n_skilled = 0;           // users with >= 1 skill
    uint64_t n_with_location = 0;
    double zero_skill_fraction = 0.0;
    double median_skills = 0.0;       // over skilled users
    double mean_skills = 0.0;         // over skilled users
    std::array<uint64_t, kMaxSkillsPerProfile + 1> count_histogram{};  // index = #skills
    // P(skill count <= N | skilled) and P(skill count >= N | skilled), N = 1..50
    std::array<double, kMaxSkillsPerProfile + 1> cdf_skilled{};
    std::array<double, kMaxSkillsPerProfile + 1> frac_with_at_least{};
    uint64_t unique_skills = 0;       // catalog skills with frequency >= 1
    uint64_t total_skill_occurrences = 0;
    double mean_users_per_skill = 0.0;
    std::vector<std::pair<std::string, uint64_t>> skill_audiences;     // catalog order
    std::vector<std::pair<std::string, uint64_t>> location_audiences;  // catalog order
};

DistributionSummary summarize(const Population& pop);

}  // namespace uniqaudit
