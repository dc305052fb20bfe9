// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/risk.hpp"
#include "helpers.hpp"

using namespace uniqaudit;
namespace ut = uniqaudit::testing;

TEST_CASE("affected-population arithmetic reproduces the published table") {
    struct Row {
        double p;
        int n;
        double frac;
        double millions;
        double pct;
    };
    // (p, n, frac) -> affected users in millions and % of the base
    const Row rows[] = {
        {0.70, 11, 0.59, 400.61, 41.3}, {0.75, 13, 0.56, 407.40, 42.0},
        {0.80, 14, 0.54, 419.04, 43.2}, {0.85, 17, 0.47, 387.52, 40.0},
        {0.90, 21, 0.37, 323.01, 33.3}, {0.95, 26, 0.28, 258.02, 26.5},
    };
    for (const Row& r : rows) {
        AffectedEstimate e = estimate_affected(r.p, r.n, r.frac, 970'000'000);
        CHECK(std::abs(e.affected_count / 1e6 - r.millions) <= 0.01);
        CHECK(std::abs(e.affected_pct * 100.0 - r.pct) <= 0.1 + 1e-9);
        CHECK(e.affected_count == doctest::Approx(r.p * r.frac * 970e6));
        CHECK(e.affected_pct == doctest::Approx(e.affected_count / 970e6));
    }
}

TEST_CASE("affected estimate identity row") {
    AffectedEstimate e = estimate_affected(1.0, 7, 1.0, 123'456);
    CHECK(e.affected_count == doctest::Approx(123'456.0));
    CHECK(e.affected_pct == doctest::Approx(1.0));
}

TEST_CASE("affected estimate validates inputs") {
    CHECK_THROWS_AS(estimate_affected(1.5, 1, 0.5, 10), ConfigError);
    CHECK_THROWS_AS(estimate_affected(0.5, 1, -0.1, 10), ConfigError);
    CHECK_THROWS_AS(estimate_affected(0.5, 1, 0.5, 0), ConfigError);
    CHECK_THROWS_AS(estimate_affected(0.5, -1, 0.5, 10), ConfigError);
}

TEST_CASE("pool-adjacent-violators basics") {
    CHECK(isotonic_non_decreasing({3, 1, 2}) == std::vector<double>{2, 2, 2});
    CHECK(isotonic_non_decreasing({1, 3, 2, 4}) == std::vector<double>{1, 2.5, 2.5, 4});
    CHECK(isotonic_non_decreasing({1, 2, 3}) == std::vector<double>{1, 2, 3});
    CHECK(isotonic_non_decreasing({}) == std::vector<double>{});
}

namespace {

Population smallish_population(uint32_t users = 4000, uint64_t seed = 19) {
    GeneratorConfig cfg;
    cfg.n_users = users;
    cfg.seed = seed;
    return generate(cfg);
}

}  // namespace

TEST_CASE("success curve is monotone, within [0,1]") {
    Population pop = smallish_population();
    AudienceIndex index(pop);
    SampleMatrix matrix(pop, index, Scenario{true, Selection::Random}, {10, true}, 3);
    SuccessCurve curve = success_curve(matrix);
    double prev = 0.0;
    for (int n = 1; n <= 50; ++n) {
        CHECK(curve.at(n) >= prev);
        CHECK(curve.at(n) >= 0.0);
        CHECK(curve.at(n) <= 1.0);
        prev = curve.at(n);
    }
    CHECK(curve.scenario == "lo_r");
}

TEST_CASE("N outside the fitted n_p range clamps to the grid edges, flagged") {
    // every user's least-popular prefixes are (4, 2, 2), so each grid
    // quantile fits the same n_p (~4.7): everything below is clamped to
    // Q=1, everything above to Q=99
    ut::PopulationBuilder b;
    for (int u = 0; u < 12; ++u)
        b.user("u" + std::to_string(u), "L",
               {"common", "quad" + std::to_string(u % 3), "half" + std::to_string(u % 2)});
    Population pop = b.build();
    AudienceIndex index(pop);
    SampleMatrix matrix(pop, index, Scenario{false, Selection::LeastPopular}, {0, false}, 1);
    SuccessCurve curve = success_curve(matrix);
    CHECK(curve.at(1) == doctest::Approx(0.01));
    CHECK(curve.extrapolated[0]);
    CHECK(curve.at(4) == doctest::Approx(0.01));
    CHECK(curve.at(50) == doctest::Approx(0.99));
    CHECK(curve.extrapolated[49]);
}

TEST_CASE("pairwise-identical profiles are never unique at any N") {
    ut::PopulationBuilder b;
    for (int i = 0; i < 8; ++i) b.user("u" + std::to_string(i), "L", {"a", "b", "c"});
    Population pop = b.build();
    AudienceIndex index(pop);
    SampleMatrix matrix(pop, index, Scenario{true, Selection::Random}, {0, false}, 1);
    for (int n = 1; n <= 3; ++n) {
        auto gt = uniqueness_ground_truth(matrix, n);
        REQUIRE(gt.has_value());
        CHECK(*gt == 0.0);
    }
}

TEST_CASE("disjoint unique skills are unique from the first skill") {
    ut::PopulationBuilder b;
    for (int i = 0; i < 6; ++i) b.user("u" + std::to_string(i), "L", {"only" + std::to_string(i)});
    Population pop = b.build();
    AudienceIndex index(pop);
    SampleMatrix matrix(pop, index, Scenario{true, Selection::Random}, {0, false}, 1);
    auto gt = uniqueness_ground_truth(matrix, 1);
    REQUIRE(gt.has_value());
    CHECK(*gt == 1.0);
}

TEST_CASE("ground truth is undefined when nobody has enough skills") {
    Population pop = ut::PopulationBuilder().user("u1", "L", {"a", "b"}).build();
    AudienceIndex index(pop);
    SampleMatrix matrix(pop, index, Scenario{true, Selection::Random}, {0, false}, 1);
    CHECK_FALSE(uniqueness_ground_truth(matrix, 3).has_value());
}

namespace {

// monotone curve through the published anchor points
// (7,0.49) (10,0.66) (13,0.77) (16,0.84) (19,0.89)
SuccessCurve anchored_curve() {
    SuccessCurve curve;
    curve.scenario = "lo_r";
    const std::pair<int, double> anchors[] = {
        {7, 0.49}, {10, 0.66}, {13, 0.77}, {16, 0.84}, {19, 0.89}};
    double p = 0.1;
    for (int n = 1; n <= 50; ++n) {
        for (auto [an, ap] : anchors)
            if (n >= an) p = std::max(p, ap);
        curve.p[n - 1] = std::min(1.0, p + 0.001 * n);
    }
    return curve;
}

}  // namespace

TEST_CASE("user risk reads the curve at the reported skill count") {
    ut::PopulationBuilder b;
    b.user("none", "L", {});
    std::vector<std::string> many;
    for (int i = 0; i < 50; ++i) many.push_back("s" + std::to_string(i));
    b.user("full", "L", many);
    std::vector<std::string> mid(many.begin(), many.begin() + 28);
    b.user("influencer", "L", mid);
    Population pop = b.build();
    SuccessCurve curve = anchored_curve();

    UserRisk none = user_risk(pop, "none", curve);
    CHECK(none.zero_skills);
    CHECK(none.p == 0.0);

    UserRisk full = user_risk(pop, "full", curve);
    CHECK(full.p == doctest::Approx(curve.at(50)));

    // 28 listed skills against the anchored curve clears the 13-skill
    // anchor by a wide margin
    UserRisk mid_risk = user_risk(pop, "influencer", curve);
    CHECK(mid_risk.p >= 0.75);

    CHECK_THROWS_AS(user_risk(pop, "ghost", curve), DataError);
}

TEST_CASE("curve CSV has one row per N") {
    SuccessCurve curve = anchored_curve();
    std::string csv = curve_csv(curve);
    size_t rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == 51);  // header + 50
    CHECK(csv.rfind("N,p_success,extrapolated\n", 0) == 0);
}
