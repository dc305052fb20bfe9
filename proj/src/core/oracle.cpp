// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#include "oracle.hpp"

#include <algorithm>
#include <numeric>

namespace uniqaudit {

AudienceIndex::AudienceIndex(const Population& pop) : pop_(&pop) {
    skill_postings_.resize(pop.skill_catalog().size());
    location_postings_.resize(pop.location_catalog().size());
    const auto& users = pop.users();
    for (uint32_t i = 0; i < users.size(); ++i) {
        for (uint32_t s : users[i].skills) skill_postings_[s].push_back(i);
        if (users[i].has_location()) location_postings_[users[i].location].push_back(i);
    }
    // construction order already yields ascending postings
}

namespace {

// a := a ∩ b for ascending vectors; iterates the smaller side and gallops
// through the larger one
void intersect_into(std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.empty()) return;
    if (b.empty()) {
        a.clear();
        return;
    }
    std::vector<uint32_t> out;
    out.reserve(std::min(a.size(), b.size()));
    if (a.size() <= b.size()) {
        auto it = b.begin();
        for (uint32_t v : a) {
            it = std::lower_bound(it, b.end(), v);
            if (it == b.end()) break;
            if (*it == v) out.push_back(v);
        }
    } else {
        auto it = a.begin();
        for (uint32_t v : b) {
            it = std::lower_bound(it, a.end(), v);
            if (it == a.end()) break;
            if (*it == v) out.push_back(v);
        }
    }
    a = std::move(out);
}

}  // namespace

std::vector<uint32_t> AudienceIndex::resolve_intersection(std::optional<int32_t> location,
                                                          const std::vector<uint32_t>& skill_idxs,
                                                          bool any_unknown) const {
    if (any_unknown) return {};
    std::vector<const std::vector<uint32_t>*> postings;
    postings.reserve(skill_idxs.size() + 1);
    if (location) postings.push_back(&location_postings_[*location]);
    for (uint32_t s : skill_idxs) postings.push_back(&skill_postings_[s]);
    if (postings.empty()) {
        std::vector<uint32_t> all(pop_->size());
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    // smallest postings first keeps the running set minimal
    std::sort(postings.begin(), postings.end(),
              [](const auto* a, const auto* b) { return a->size() < b->size(); });
    std::vector<uint32_t> running = *postings.front();
    for (size_t i = 1; i < postings.size() && !running.empty(); ++i)
        intersect_into(running, *postings[i]);
    return running;
}

int64_t AudienceIndex::audience_size(const AudienceSpec& spec, const OracleConfig& cfg) const {
    cfg.validate();
    return apply_floor(static_cast<int64_t>(matched_user_indices(spec).size()), cfg);
}

std::vector<uint32_t> AudienceIndex::matched_user_indices(const AudienceSpec& spec) const {
    std::optional<int32_t> loc;
    bool unknown = false;
    if (spec.location) {
        auto idx = pop_->location_index(*spec.location);
        if (!idx)
            unknown = true;
        else
            loc = static_cast<int32_t>(*idx);
    }
    std::vector<uint32_t> skill_idxs;
    skill_idxs.reserve(spec.skills.size());
    for (const auto& s : spec.skills) {
        auto idx = pop_->skill_index(s);
        if (!idx) {
            unknown = true;
            break;
        }
        skill_idxs.push_back(*idx);
    }
    return resolve_intersection(loc, skill_idxs, unknown);
}

std::vector<std::string> AudienceIndex::matched_users(const AudienceSpec& spec) const {
    std::vector<std::string> ids;
    for (uint32_t i : matched_user_indices(spec)) ids.push_back(pop_->users()[i].id);
    return ids;
}

std::vector<uint32_t> AudienceIndex::prefix_audience_sizes(uint32_t user_idx,
                                                           const std::vector<uint32_t>& skill_plan,
                                                           bool use_location) const {
    std::vector<uint32_t> sizes(skill_plan.size(), 1);
    if (skill_plan.empty()) return sizes;
    const UserProfile& user = pop_->users()[user_idx];
    std::vector<uint32_t> running;
    size_t j = 0;
    if (use_location) {
        if (!user.has_location()) throw DataError("user '" + user.id + "' has no location");
        running = location_postings_[user.location];
    } else {
        running = skill_postings_[skill_plan[0]];
        sizes[0] = static_cast<uint32_t>(running.size());
        j = 1;
    }
    for (; j < skill_plan.size(); ++j) {
        intersect_into(running, skill_postings_[skill_plan[j]]);
        sizes[j] = static_cast<uint32_t>(running.size());
        if (running.size() <= 1) break;  // {self}; every longer prefix stays 1
    }
    return sizes;
}

}  // namespace uniqaudit
