// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "core/oracle.hpp"
#include "core/population.hpp"

namespace uniqaudit::testing {

// Reference membership scan. Deliberately independent of AudienceIndex:
// string comparison over raw profiles, no postings, no interning.
inline std::vector<std::string> scan_matches(const Population& pop, const AudienceSpec& spec) {
    std::vector<std::string> out;
    for (const auto& user : pop.users()) {
        if (spec.location) {
            if (!user.has_location()) continue;
            if (pop.location_id(static_cast<uint32_t>(user.location)) != *spec.location) continue;
        }
        bool all = true;
        for (const auto& wanted : spec.skills) {
            bool found = false;
            for (uint32_t s : user.skills)
                if (pop.skill_id(s) == wanted) {
                    found = true;
                    break;
                }
            if (!found) {
                all = false;
                break;
            }
        }
        if (all) out.push_back(user.id);
    }
    return out;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto midranks = [](const std::vector<double>& v) {
        std::vector<size_t> order(v.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> ranks(v.size());
        size_t i = 0;
        while (i < order.size()) {
            size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
            i = j + 1;
        }
        return ranks;
    };
    std::vector<double> rx = midranks(x), ry = midranks(y);
    double mx = 0, my = 0;
    for (size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= rx.size();
    my /= ry.size();
    double num = 0, dx = 0, dy = 0;
    for (size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    return num / std::sqrt(dx * dy);
}

// Small hand-assembled populations for edge-case tests.
struct PopulationBuilder {
    std::vector<UserProfile> users;
    std::vector<CatalogEntry> skills;
    std::vector<CatalogEntry> locations;
    std::unordered_map<std::string, uint32_t> skill_ids, location_ids;

    uint32_t skill(const std::string& id) {
        auto [it, fresh] = skill_ids.emplace(id, static_cast<uint32_t>(skills.size()));
        if (fresh) skills.push_back({id, 1.0});
        return it->second;
    }
    int32_t location(const std::string& id) {
        auto [it, fresh] = location_ids.emplace(id, static_cast<uint32_t>(locations.size()));
        if (fresh) locations.push_back({id, 1.0});
        return static_cast<int32_t>(it->second);
    }
    PopulationBuilder& user(const std::string& id, const std::string& loc,
                            const std::vector<std::string>& skill_list) {
        UserProfile u;
        u.id = id;
        if (!loc.empty()) u.location = location(loc);
        for (const auto& s : skill_list) u.skills.push_back(skill(s));
        users.push_back(std::move(u));
        return *this;
    }
    Population build(uint64_t seed = 0, uint64_t total_base = 1000) {
        return Population(users, skills, locations, seed, total_base);
    }
};

inline std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("uniqaudit_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace uniqaudit::testing
