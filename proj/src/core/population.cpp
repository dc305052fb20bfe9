// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#include "population.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace uniqaudit {

using ordered_json = nlohmann::ordered_json;

void GeneratorConfig::validate() const {
    if (n_users == 0) throw ConfigError("n_users must be positive");
    if (n_skills == 0) throw ConfigError("n_skills must be positive");
    if (n_locations == 0) throw ConfigError("n_locations must be positive");
    if (!(skill_popularity_exponent > 0.0))
        throw ConfigError("skill_popularity_exponent must be positive");
    if (!(location_popularity_exponent > 0.0))
        throw ConfigError("location_popularity_exponent must be positive");
    if (!(p_zero_skills >= 0.0 && p_zero_skills <= 1.0))
        throw ConfigError("p_zero_skills must lie in [0, 1]");
    if (!(skill_count_log_sigma >= 0.0) || !std::isfinite(skill_count_log_sigma) ||
        !std::isfinite(skill_count_log_mean))
        throw ConfigError("skill count distribution parameters must be finite, sigma >= 0");
    if (total_base == 0) throw ConfigError("total_base must be positive");
}

Population::Population(std::vector<UserProfile> users, std::vector<CatalogEntry> skills,
                       std::vector<CatalogEntry> locations, uint64_t seed, uint64_t total_base,
                       std::string generator_config_json)
    : users_(std::move(users)),
      skill_catalog_(std::move(skills)),
      location_catalog_(std::move(locations)),
      seed_(seed),
      total_base_(total_base),
      generator_config_json_(std::move(generator_config_json)) {
    build_lookup();
    check_invariants();
}

void Population::build_lookup() {
    skill_lookup_.reserve(skill_catalog_.size());
    for (uint32_t i = 0; i < skill_catalog_.size(); ++i) skill_lookup_.emplace(skill_catalog_[i].id, i);
    location_lookup_.reserve(location_catalog_.size());
    for (uint32_t i = 0; i < location_catalog_.size(); ++i)
        location_lookup_.emplace(location_catalog_[i].id, i);
    user_lookup_.reserve(users_.size());
    for (uint32_t i = 0; i < users_.size(); ++i) user_lookup_.emplace(users_[i].id, i);
}

void Population::check_invariants() const {
    if (skill_lookup_.size() != skill_catalog_.size())
        throw DataError("duplicate skill id in catalog");
    if (location_lookup_.size() != location_catalog_.size())
        throw DataError("duplicate location id in catalog");
    if (user_lookup_.size() != users_.size()) throw DataError("duplicate user id in population");
    for (const auto& u : users_) {
        if (u.skills.size() > kMaxSkillsPerProfile)
            throw DataError("user '" + u.id + "' exceeds the 50-skill profile cap");
        std::set<uint32_t> distinct(u.skills.begin(), u.skills.end());
        if (distinct.size() != u.skills.size())
            throw DataError("user '" + u.id + "' lists a duplicate skill");
        for (uint32_t s : u.skills)
            if (s >= skill_catalog_.size()) throw DataError("skill index out of catalog range");
        if (u.location != UserProfile::kNoLocation &&
            (u.location < 0 || static_cast<size_t>(u.location) >= location_catalog_.size()))
            throw DataError("location index out of catalog range");
    }
}

std::optional<uint32_t> Population::skill_index(std::string_view id) const {
    auto it = skill_lookup_.find(id);
    if (it == skill_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<uint32_t> Population::location_index(std::string_view id) const {
    auto it = location_lookup_.find(id);
    if (it == location_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<uint32_t> Population::user_index(std::string_view id) const {
    auto it = user_lookup_.find(id);
    if (it == user_lookup_.end()) return std::nullopt;
    return it->second;
}

namespace {

std::string padded_label(const char* prefix, uint32_t value, uint32_t max_value) {
    int width = 1;
    for (uint32_t v = max_value; v >= 10; v /= 10) ++width;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*u", prefix, width, value);
    return buf;
}

std::vector<double> zipf_cumulative(uint32_t n, double exponent) {
    std::vector<double> cum(n);
    double total = 0.0;
    for (uint32_t i = 0; i < n; ++i) {
        total += std::pow(static_cast<double>(i) + 1.0, -exponent);
        cum[i] = total;
    }
    for (auto& c : cum) c /= total;
    cum.back() = 1.0;
    return cum;
}

uint32_t draw_from_cumulative(const std::vector<double>& cum, Rng& rng) {
    double u = rng.uniform_double();
    auto it = std::lower_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    return static_cast<uint32_t>(it - cum.begin());
}

std::string generator_config_to_json(const GeneratorConfig& c) {
    ordered_json j;
    j["n_users"] = c.n_users;
    j["n_skills"] = c.n_skills;
    j["skill_popularity_exponent"] = c.skill_popularity_exponent;
    j["n_locations"] = c.n_locations;
    j["location_popularity_exponent"] = c.location_popularity_exponent;
    j["p_zero_skills"] = c.p_zero_skills;
    j["skill_count_log_mean"] = c.skill_count_log_mean;
    j["skill_count_log_sigma"] = c.skill_count_log_sigma;
    j["total_base"] = c.total_base;
    j["seed"] = c.seed;
    return j.dump();
}

}  // namespace

Population generate(const GeneratorConfig& config) {
    config.validate();
    Rng rng(derive_seed(config.seed, "population"));

    std::vector<CatalogEntry> skills(config.n_skills);
    for (uint32_t i = 0; i < config.n_skills; ++i) {
        skills[i].id = padded_label("sk", i + 1, config.n_skills);
        skills[i].weight = std::pow(static_cast<double>(i) + 1.0, -config.skill_popularity_exponent);
    }
    std::vector<CatalogEntry> locations(config.n_locations);
    for (uint32_t i = 0; i < config.n_locations; ++i) {
        locations[i].id = padded_label("loc", i + 1, config.n_locations);
        locations[i].weight =
            std::pow(static_cast<double>(i) + 1.0, -config.location_popularity_exponent);
    }
    auto skill_cum = zipf_cumulative(config.n_skills, config.skill_popularity_exponent);
    auto loc_cum = zipf_cumulative(config.n_locations, config.location_popularity_exponent);

    const int max_count = std::min<uint32_t>(kMaxSkillsPerProfile, config.n_skills);
    std::vector<UserProfile> users(config.n_users);
    std::vector<uint8_t> taken(config.n_skills, 0);
    for (uint32_t i = 0; i < config.n_users; ++i) {
        UserProfile& u = users[i];
        u.id = padded_label("u", i + 1, config.n_users);
        u.location = static_cast<int32_t>(draw_from_cumulative(loc_cum, rng));
        if (rng.bernoulli(config.p_zero_skills)) continue;
        double raw = rng.lognormal(config.skill_count_log_mean, config.skill_count_log_sigma);
        int count = static_cast<int>(std::llround(raw));
        count = std::clamp(count, 1, max_count);
        u.skills.reserve(count);
        // popularity-weighted sampling without replacement; rejection keeps
        // the draw order meaningful (first draw = first listed skill)
        while (static_cast<int>(u.skills.size()) < count) {
            uint32_t s = draw_from_cumulative(skill_cum, rng);
            if (taken[s]) continue;
            taken[s] = 1;
            u.skills.push_back(s);
        }
        for (uint32_t s : u.skills) taken[s] = 0;
    }
    return Population(std::move(users), std::move(skills), std::move(locations), config.seed,
                      config.total_base, generator_config_to_json(config));
}

namespace {

ordered_json catalog_to_json(const std::vector<CatalogEntry>& cat) {
    ordered_json arr = ordered_json::array();
    for (const auto& e : cat) arr.push_back(ordered_json::array({e.id, e.weight}));
    return arr;
}

std::vector<CatalogEntry> catalog_from_json(const ordered_json& arr, const char* what) {
    std::vector<CatalogEntry> cat;
    cat.reserve(arr.size());
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string())
            throw DataError(std::string("malformed ") + what + " catalog entry in header");
        cat.push_back({e[0].get<std::string>(), e[1].get<double>()});
    }
    return cat;
}

}  // namespace

std::string to_jsonl(const Population& pop) {
    std::ostringstream out;
    ordered_json meta;
    meta["format_version"] = 1;
    meta["seed"] = pop.seed();
    meta["total_base"] = pop.total_base();
    if (!pop.generator_config_json().empty())
        meta["generator"] = ordered_json::parse(pop.generator_config_json());
    meta["skill_catalog"] = catalog_to_json(pop.skill_catalog());
    meta["location_catalog"] = catalog_to_json(pop.location_catalog());
    ordered_json header;
    header["_meta"] = std::move(meta);
    out << header.dump() << '\n';
    for (const auto& u : pop.users()) {
        ordered_json j;
        j["id"] = u.id;
        if (u.has_location())
            j["location"] = pop.location_id(static_cast<uint32_t>(u.location));
        else
            j["location"] = nullptr;
        ordered_json sk = ordered_json::array();
        for (uint32_t s : u.skills) sk.push_back(pop.skill_id(s));
        j["skills"] = std::move(sk);
        out << j.dump() << '\n';
    }
    return out.str();
}

void write_jsonl(const Population& pop, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open '" + path + "' for writing");
    f << to_jsonl(pop);
    if (!f) throw DataError("failed writing '" + path + "'");
}

LoadResult ingest_stream(std::istream& in, ProfileFormat format) {
    if (format != ProfileFormat::JsonLines) throw ConfigError("unsupported profile format");

    std::vector<UserProfile> users;
    std::vector<CatalogEntry> skills, locations;
    std::unordered_map<std::string, uint32_t> skill_ids, location_ids;
    std::unordered_map<std::string, uint32_t> seen_users;
    bool have_header_catalogs = false;
    uint64_t seed = 0, total_base = 970'000'000;
    std::string generator_json;
    std::vector<std::string> warnings;

    auto intern = [](std::unordered_map<std::string, uint32_t>& map,
                     std::vector<CatalogEntry>& cat, const std::string& id) {
        auto [it, inserted] = map.emplace(id, static_cast<uint32_t>(cat.size()));
        if (inserted) cat.push_back({id, 0.0});
        return it->second;
    };

    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError("line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
        }
        if (j.contains("_meta")) {
            const auto& meta = j["_meta"];
            if (meta.contains("seed")) seed = meta["seed"].get<uint64_t>();
            if (meta.contains("total_base")) total_base = meta["total_base"].get<uint64_t>();
            if (meta.contains("generator")) generator_json = meta["generator"].dump();
            if (meta.contains("skill_catalog")) {
                skills = catalog_from_json(meta["skill_catalog"], "skill");
                for (uint32_t i = 0; i < skills.size(); ++i) skill_ids.emplace(skills[i].id, i);
                have_header_catalogs = true;
            }
            if (meta.contains("location_catalog")) {
                locations = catalog_from_json(meta["location_catalog"], "location");
                for (uint32_t i = 0; i < locations.size(); ++i)
                    location_ids.emplace(locations[i].id, i);
            }
            continue;
        }
        if (!j.contains("id") || !j["id"].is_string())
            throw DataError("line " + std::to_string(line_no) + ": record lacks a string 'id'");
        UserProfile u;
        u.id = j["id"].get<std::string>();
        if (!seen_users.emplace(u.id, static_cast<uint32_t>(users.size())).second)
            throw DataError("line " + std::to_string(line_no) + ": duplicate user id '" + u.id + "'");
        if (j.contains("location") && !j["location"].is_null()) {
            if (!j["location"].is_string())
                throw DataError("line " + std::to_string(line_no) + ": 'location' must be a string or null");
            const std::string loc = j["location"].get<std::string>();
            auto it = location_ids.find(loc);
            if (it != location_ids.end()) {
                u.location = static_cast<int32_t>(it->second);
            } else if (have_header_catalogs) {
                throw DataError("line " + std::to_string(line_no) + ": location '" + loc +
                                "' missing from header catalog");
            } else {
                u.location = static_cast<int32_t>(intern(location_ids, locations, loc));
            }
        }
        if (j.contains("skills")) {
            if (!j["skills"].is_array())
                throw DataError("line " + std::to_string(line_no) + ": 'skills' must be an array");
            if (j["skills"].size() > kMaxSkillsPerProfile)
                throw DataError("line " + std::to_string(line_no) + ": user '" + u.id + "' lists " +
                                std::to_string(j["skills"].size()) +
                                " skills; profiles are capped at 50 skills");
            std::set<std::string> distinct;
            for (const auto& s : j["skills"]) {
                if (!s.is_string())
                    throw DataError("line " + std::to_string(line_no) + ": skill entries must be strings");
                const std::string id = s.get<std::string>();
                if (!distinct.insert(id).second)
                    throw DataError("line " + std::to_string(line_no) + ": user '" + u.id +
                                    "' lists duplicate skill '" + id + "'; skill lists must be duplicate-free");
                auto it = skill_ids.find(id);
                if (it != skill_ids.end()) {
                    u.skills.push_back(it->second);
                } else if (have_header_catalogs) {
                    throw DataError("line " + std::to_string(line_no) + ": skill '" + id +
                                    "' missing from header catalog");
                } else {
                    u.skills.push_back(intern(skill_ids, skills, id));
                }
            }
        }
        users.push_back(std::move(u));
    }
    if (users.empty()) warnings.push_back("input contains no user records; population is empty");
    if (!have_header_catalogs) {
        // empirical weights: realized frequency
        for (const auto& u : users) {
            for (uint32_t s : u.skills) skills[s].weight += 1.0;
            if (u.has_location()) locations[u.location].weight += 1.0;
        }
    }
    LoadResult result{Population(std::move(users), std::move(skills), std::move(locations), seed,
                                 total_base, generator_json),
                      std::move(warnings)};
    return result;
}

LoadResult ingest(const std::string& path, ProfileFormat format) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open '" + path + "'");
    return ingest_stream(f, format);
}

DistributionSummary summarize(const Population& pop) {
    DistributionSummary s;
    s.n_users = pop.size();
    std::vector<uint32_t> counts;
    counts.reserve(pop.size());
    std::vector<uint64_t> skill_freq(pop.skill_catalog().size(), 0);
    std::vector<uint64_t> loc_freq(pop.location_catalog().size(), 0);
    for (const auto& u : pop.users()) {
        size_t k = u.skills.size();
        s.count_histogram[k] += 1;
        if (k > 0) {
            ++s.n_skilled;
            counts.push_back(static_cast<uint32_t>(k));
            s.total_skill_occurrences += k;
        }
        if (u.has_location()) {
            ++s.n_with_location;
            loc_freq[u.location] += 1;
        }
        for (uint32_t sk : u.skills) skill_freq[sk] += 1;
    }
    s.zero_skill_fraction =
        pop.size() == 0 ? 0.0 : 1.0 - static_cast<double>(s.n_skilled) / static_cast<double>(pop.size());
    if (!counts.empty()) {
        std::sort(counts.begin(), counts.end());
        s.median_skills = quantile_type7(std::span<const uint32_t>(counts), 50.0);
        s.mean_skills =
            static_cast<double>(s.total_skill_occurrences) / static_cast<double>(s.n_skilled);
        uint64_t cum_skilled = 0;
        for (int n = 1; n <= kMaxSkillsPerProfile; ++n) {
            cum_skilled += s.count_histogram[n];
            s.cdf_skilled[n] = static_cast<double>(cum_skilled) / static_cast<double>(s.n_skilled);
        }
        // frac_with_at_least[N] = P(count >= N | skilled)
        uint64_t suffix = 0;
        for (int n = kMaxSkillsPerProfile; n >= 1; --n) {
            suffix += s.count_histogram[n];
            s.frac_with_at_least[n] = static_cast<double>(suffix) / static_cast<double>(s.n_skilled);
        }
        s.frac_with_at_least[0] = 1.0;
    }
    for (size_t i = 0; i < skill_freq.size(); ++i) {
        if (skill_freq[i] > 0) ++s.unique_skills;
        s.skill_audiences.emplace_back(pop.skill_catalog()[i].id, skill_freq[i]);
    }
    for (size_t i = 0; i < loc_freq.size(); ++i)
        s.location_audiences.emplace_back(pop.location_catalog()[i].id, loc_freq[i]);
    s.mean_users_per_skill =
        s.unique_skills == 0
            ? 0.0
            : static_cast<double>(s.total_skill_occurrences) / static_cast<double>(s.unique_skills);
    return s;
}

}  // namespace uniqaudit
