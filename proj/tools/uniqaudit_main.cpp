// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors
//
// uniqaudit CLI: reproducible pipelines over the shared-library C API.
// Every command writes its outputs plus a run manifest (<out>.manifest.json)
// recording the resolved config, seeds and input/output digests. Manifests
// contain no timestamps or absolute paths, so re-running a command
// reproduces its output directory byte for byte.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "uniqaudit.h"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitFit = 4;
constexpr int kExitIo = 5;

int exit_code(ua_status status) {
    switch (status) {
        case UA_OK: return kExitOk;
        case UA_ERR_CONFIG: return kExitConfig;
        case UA_ERR_DATA: return kExitData;
        case UA_ERR_FIT: return kExitFit;
        case UA_ERR_IO: return kExitIo;
        default: return kExitOther;
    }
}

[[noreturn]] void die(ua_status status) {
    std::cerr << "error: " << ua_last_error() << "\n";
    std::exit(exit_code(status));
}

void check(ua_status status) {
    if (status != UA_OK) die(status);
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    ua_string_free(s);
    return out;
}

std::string sha256_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open '" << path.string() << "' for digesting\n";
        std::exit(kExitIo);
    }
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (f.read(buf, sizeof(buf)) || f.gcount() > 0)
        EVP_DigestUpdate(ctx, buf, static_cast<size_t>(f.gcount()));
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open '" << path.string() << "' for writing\n";
        std::exit(kExitIo);
    }
    f << content;
    if (!f) {
        std::cerr << "error: failed writing '" << path.string() << "'\n";
        std::exit(kExitIo);
    }
}

// Manifest alongside the primary output. Inputs/outputs are keyed by file
// name (not path) so golden directories compare equal across machines.
class Manifest {
  public:
    Manifest(std::string command, fs::path primary_output)
        : command_(std::move(command)), primary_output_(std::move(primary_output)) {}

    ordered_json& config() { return config_; }

    void add_input(const fs::path& path) {
        inputs_[path.filename().string()] = {{"sha256", sha256_file(path)}};
    }
    void add_output(const fs::path& path, const std::string& content) {
        write_file(path, content);
        outputs_[path.filename().string()] = {{"sha256", sha256_file(path)}};
    }

    void write() const {
        ordered_json m;
        m["artifact_version"] = ua_version();
        m["command"] = command_;
        m["config"] = config_;
        m["inputs"] = inputs_;
        m["outputs"] = outputs_;
        fs::path path = primary_output_;
        path += ".manifest.json";
        write_file(path, m.dump(2) + "\n");
    }

  private:
    std::string command_;
    fs::path primary_output_;
    ordered_json config_ = ordered_json::object();
    ordered_json inputs_ = ordered_json::object();
    ordered_json outputs_ = ordered_json::object();
};

struct PopulationHandle {
    ua_population* pop = nullptr;
    ~PopulationHandle() { ua_population_free(pop); }
};

struct CurveHandle {
    ua_curve* curve = nullptr;
    ~CurveHandle() { ua_curve_free(curve); }
};

struct OracleHandle {
    ua_oracle* oracle = nullptr;
    ~OracleHandle() { ua_oracle_free(oracle); }
};

void load_population(const std::string& path, PopulationHandle& h) {
    check(ua_population_load(path.c_str(), &h.pop));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"audience-uniqueness audit toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ua_version()));

    // ---- generate ----
    auto* gen = app.add_subcommand("generate", "generate a seeded synthetic population");
    struct {
        uint32_t users = 100'000;
        uint32_t skills = 62;
        uint32_t locations = 13;
        double skill_exponent = 0.20;
        double location_exponent = 1.35;
        double p_zero = 0.25;
        double log_mean = 2.70805020110221;
        double log_sigma = 0.974;
        uint64_t total_base = 970'000'000;
        uint64_t seed = 0;
        std::string out;
    } g;
    gen->add_option("--users", g.users, "number of users")->capture_default_str();
    gen->add_option("--skills", g.skills, "skill catalog size")->capture_default_str();
    gen->add_option("--locations", g.locations, "location catalog size")->capture_default_str();
    gen->add_option("--skill-exponent", g.skill_exponent, "Zipf exponent for skill popularity")
        ->capture_default_str();
    gen->add_option("--location-exponent", g.location_exponent,
                    "Zipf exponent for location popularity")
        ->capture_default_str();
    gen->add_option("--p-zero-skills", g.p_zero, "probability of an empty skill list")
        ->capture_default_str();
    gen->add_option("--count-log-mean", g.log_mean, "log-mean of the skill count law")
        ->capture_default_str();
    gen->add_option("--count-log-sigma", g.log_sigma, "log-sigma of the skill count law")
        ->capture_default_str();
    gen->add_option("--total-base", g.total_base, "modeled full-platform user count")
        ->capture_default_str();
    gen->add_option("--seed", g.seed, "master RNG seed")->capture_default_str();
    gen->add_option("--out", g.out, "output population file (JSON lines)")->required();

    // ---- summarize ----
    auto* sum = app.add_subcommand("summarize", "distribution summary of a population");
    struct {
        std::string population, out, cdf_csv, audiences_csv;
    } s;
    sum->add_option("--population", s.population, "population file")->required();
    sum->add_option("--out", s.out, "summary JSON output")->required();
    sum->add_option("--cdf-csv", s.cdf_csv, "skill-count CDF plot data (CSV)");
    sum->add_option("--audiences-csv", s.audiences_csv, "per-skill/location audience sizes (CSV)");

    // ---- audience ----
    auto* aud = app.add_subcommand("audience", "audience size for a location+skills spec");
    struct {
        std::string population, location, skills;
        int64_t floor = 30;
        bool exact = false;
    } a;
    aud->add_option("--population", a.population, "population file")->required();
    aud->add_option("--location", a.location, "location id (optional)");
    aud->add_option("--skills", a.skills, "comma-separated skill ids");
    aud->add_option("--floor", a.floor, "reporting floor")->capture_default_str();
    aud->add_flag("--exact", a.exact, "report the ground-truth count (no floor)");

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "censored log-linear fit of a quantile vector");
    struct {
        std::string input, out;
        int64_t floor = 30;
        int min_points = 3;
    } f;
    fit->add_option("--input", f.input, "CSV with N,AS rows")->required();
    fit->add_option("--floor", f.floor, "reporting floor")->capture_default_str();
    fit->add_option("--min-points", f.min_points, "minimum uncensored points")
        ->capture_default_str();
    fit->add_option("--out", f.out, "fit JSON output")->required();

    // ---- scenarios ----
    auto* sc = app.add_subcommand("scenarios", "N_P report over the four scenarios");
    struct {
        std::string population, out, csv, plot;
        std::vector<double> quantiles = {50, 75, 90};
        int bootstrap = 1000;
        int64_t floor = 30;
        uint64_t seed = 0;
        unsigned threads = 0;
    } sce;
    sc->add_option("--population", sce.population, "population file")->required();
    sc->add_option("--quantiles", sce.quantiles, "quantiles (percent)")
        ->delimiter(',')
        ->capture_default_str();
    sc->add_option("--bootstrap", sce.bootstrap, "bootstrap iterations")->capture_default_str();
    sc->add_option("--floor", sce.floor, "reporting floor")->capture_default_str();
    sc->add_option("--seed", sce.seed, "seed")->capture_default_str();
    sc->add_option("--threads", sce.threads, "thread cap (0 = auto)")->capture_default_str();
    sc->add_option("--out", sce.out, "report JSON output")->required();
    sc->add_option("--csv", sce.csv, "table-layout CSV output");
    sc->add_option("--plot-data", sce.plot, "(scenario,N,Q,AS) plot data CSV output");

    // ---- curve ----
    auto* cur = app.add_subcommand("curve", "success-probability curve");
    struct {
        std::string population, scenario = "lo_r", out;
        int64_t floor = 30;
        uint64_t seed = 0;
        unsigned threads = 0;
    } c;
    cur->add_option("--population", c.population, "population file")->required();
    cur->add_option("--scenario", c.scenario, "sk_r|sk_lp|lo_r|lo_lp")->capture_default_str();
    cur->add_option("--floor", c.floor, "reporting floor")->capture_default_str();
    cur->add_option("--seed", c.seed, "seed")->capture_default_str();
    cur->add_option("--threads", c.threads, "thread cap (0 = auto)")->capture_default_str();
    cur->add_option("--out", c.out, "curve CSV output")->required();

    // ---- affected ----
    auto* aff = app.add_subcommand("affected", "affected-population estimate");
    struct {
        double p = 0.0, frac = 0.0;
        int n = 0;
        uint64_t base = 970'000'000;
        std::string out, csv;
    } af;
    aff->add_option("--p", af.p, "uniqueness probability")->required();
    aff->add_option("--n", af.n, "skills required for that probability")->required();
    aff->add_option("--frac", af.frac, "fraction of users with >= n skills")->required();
    aff->add_option("--base", af.base, "platform user base")->capture_default_str();
    aff->add_option("--out", af.out, "estimate JSON output (optional)");
    aff->add_option("--csv", af.csv, "estimate CSV output (optional)");

    // ---- campaign ----
    auto* cam = app.add_subcommand("campaign", "simulate one nanotargeting campaign");
    struct {
        std::string population, target, policy = "enforced", out, campaign_id = "c1";
        int skills_count = 13;
        int days = 3;
        double budget = 10.0;
        int64_t floor = 30;
        uint64_t seed = 0;
        double impression_prob = 0.9;
    } cp;
    cam->add_option("--population", cp.population, "population file")->required();
    cam->add_option("--target", cp.target, "targeted user id")->required();
    cam->add_option("--skills-count", cp.skills_count, "number of skills in the spec")
        ->capture_default_str();
    cam->add_option("--policy", cp.policy, "enforced|clientside")->capture_default_str();
    cam->add_option("--days", cp.days, "campaign duration in days")->capture_default_str();
    cam->add_option("--budget", cp.budget, "campaign budget")->capture_default_str();
    cam->add_option("--floor", cp.floor, "reporting floor")->capture_default_str();
    cam->add_option("--seed", cp.seed, "seed")->capture_default_str();
    cam->add_option("--impression-prob", cp.impression_prob,
                    "per-user daily impression probability")
        ->capture_default_str();
    cam->add_option("--campaign-id", cp.campaign_id, "campaign identifier")->capture_default_str();
    cam->add_option("--out", cp.out, "outcome JSON output")->required();

    // ---- experiment ----
    auto* exp = app.add_subcommand("experiment", "targets x skill-counts campaign experiment");
    struct {
        std::string population, targets, curve_scenario, out;
        std::vector<int> skill_counts = {7, 10, 13, 16, 19};
        int repetitions = 1;
        int days = 3;
        int64_t floor = 30;
        uint64_t seed = 0;
        double impression_prob = 0.9;
    } ex;
    exp->add_option("--population", ex.population, "population file")->required();
    exp->add_option("--targets", ex.targets, "comma-separated target user ids")->required();
    exp->add_option("--skill-counts", ex.skill_counts, "skill counts per target")
        ->delimiter(',')
        ->capture_default_str();
    exp->add_option("--repetitions", ex.repetitions, "repetitions per (target, count)")
        ->capture_default_str();
    exp->add_option("--days", ex.days, "campaign duration in days")->capture_default_str();
    exp->add_option("--floor", ex.floor, "reporting floor")->capture_default_str();
    exp->add_option("--seed", ex.seed, "seed")->capture_default_str();
    exp->add_option("--impression-prob", ex.impression_prob,
                    "per-user daily impression probability")
        ->capture_default_str();
    exp->add_option("--curve-scenario", ex.curve_scenario,
                    "success curve to compare against (e.g. lo_r)");
    exp->add_option("--out", ex.out, "report JSON output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage hint
        return kExitConfig;
    }

    if (*gen) {
        ordered_json cfg;
        cfg["n_users"] = g.users;
        cfg["n_skills"] = g.skills;
        cfg["skill_popularity_exponent"] = g.skill_exponent;
        cfg["n_locations"] = g.locations;
        cfg["location_popularity_exponent"] = g.location_exponent;
        cfg["p_zero_skills"] = g.p_zero;
        cfg["skill_count_log_mean"] = g.log_mean;
        cfg["skill_count_log_sigma"] = g.log_sigma;
        cfg["total_base"] = g.total_base;
        cfg["seed"] = g.seed;
        PopulationHandle pop;
        check(ua_population_generate(cfg.dump().c_str(), &pop.pop));
        Manifest manifest("generate", g.out);
        manifest.config() = cfg;
        check(ua_population_save(pop.pop, g.out.c_str()));
        std::ifstream written(g.out, std::ios::binary);
        std::stringstream buffer;
        buffer << written.rdbuf();
        manifest.add_output(g.out, buffer.str());
        manifest.write();
        std::cout << "generated " << ua_population_user_count(pop.pop) << " users -> " << g.out
                  << "\n";
        return kExitOk;
    }

    if (*sum) {
        PopulationHandle pop;
        load_population(s.population, pop);
        Manifest manifest("summarize", s.out);
        manifest.config()["population"] = fs::path(s.population).filename().string();
        manifest.add_input(s.population);
        char* json = nullptr;
        check(ua_population_summary(pop.pop, &json));
        manifest.add_output(s.out, take_string(json) + "\n");
        if (!s.cdf_csv.empty()) {
            char* csv = nullptr;
            check(ua_population_summary_cdf_csv(pop.pop, &csv));
            manifest.add_output(s.cdf_csv, take_string(csv));
        }
        if (!s.audiences_csv.empty()) {
            char* csv = nullptr;
            check(ua_population_audiences_csv(pop.pop, &csv));
            manifest.add_output(s.audiences_csv, take_string(csv));
        }
        manifest.write();
        return kExitOk;
    }

    if (*aud) {
        PopulationHandle pop;
        load_population(a.population, pop);
        OracleHandle oracle;
        check(ua_oracle_new(pop.pop, a.floor, &oracle.oracle));
        int64_t size = 0;
        check(ua_oracle_audience_size(oracle.oracle,
                                      a.location.empty() ? nullptr : a.location.c_str(),
                                      a.skills.c_str(), a.exact ? 0 : 1, &size));
        std::cout << size << "\n";
        return kExitOk;
    }

    if (*fit) {
        std::ifstream in(f.input);
        if (!in) {
            std::cerr << "error: cannot open '" << f.input << "'\n";
            return kExitData;
        }
        double values[50];
        for (double& v : values) v = std::nan("");
        std::string line;
        size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line.rfind("N,", 0) == 0) continue;
            int n = 0;
            double as = 0;
            if (std::sscanf(line.c_str(), "%d,%lf", &n, &as) != 2 || n < 1 || n > 50) {
                std::cerr << "error: " << f.input << ":" << line_no
                          << ": expected 'N,AS' with N in 1..50\n";
                return kExitData;
            }
            values[n - 1] = as;
        }
        char* json = nullptr;
        check(ua_fit_np(values, 50, f.floor, f.min_points, &json));
        std::string body = take_string(json);
        Manifest manifest("fit", f.out);
        manifest.config()["floor"] = f.floor;
        manifest.config()["min_points"] = f.min_points;
        manifest.add_input(f.input);
        manifest.add_output(f.out, body + "\n");
        manifest.write();
        std::cout << body << "\n";
        return kExitOk;
    }

    if (*sc) {
        PopulationHandle pop;
        load_population(sce.population, pop);
        ordered_json cfg;
        cfg["quantiles"] = sce.quantiles;
        cfg["bootstrap_iterations"] = sce.bootstrap;
        cfg["floor"] = sce.floor;
        cfg["seed"] = sce.seed;
        cfg["threads"] = sce.threads;
        Manifest manifest("scenarios", sce.out);
        manifest.config() = cfg;
        manifest.config()["population"] = fs::path(sce.population).filename().string();
        manifest.config().erase("threads");  // thread count must not affect outputs
        manifest.add_input(sce.population);
        char* json = nullptr;
        check(ua_run_scenarios(pop.pop, cfg.dump().c_str(), &json));
        manifest.add_output(sce.out, take_string(json) + "\n");
        if (!sce.csv.empty() || !sce.plot.empty()) {
            char* csv = nullptr;
            char* plot = nullptr;
            check(ua_run_scenarios_csv(pop.pop, cfg.dump().c_str(), &csv, &plot));
            std::string csv_body = take_string(csv);
            std::string plot_body = take_string(plot);
            if (!sce.csv.empty()) manifest.add_output(sce.csv, csv_body);
            if (!sce.plot.empty()) manifest.add_output(sce.plot, plot_body);
        }
        manifest.write();
        return kExitOk;
    }

    if (*cur) {
        PopulationHandle pop;
        load_population(c.population, pop);
        ordered_json cfg;
        cfg["scenario"] = c.scenario;
        cfg["floor"] = c.floor;
        cfg["seed"] = c.seed;
        cfg["threads"] = c.threads;
        CurveHandle curve;
        check(ua_success_curve(pop.pop, cfg.dump().c_str(), &curve.curve));
        char* csv = nullptr;
        check(ua_curve_csv(curve.curve, &csv));
        Manifest manifest("curve", c.out);
        manifest.config() = cfg;
        manifest.config().erase("threads");
        manifest.config()["population"] = fs::path(c.population).filename().string();
        manifest.add_input(c.population);
        manifest.add_output(c.out, take_string(csv));
        manifest.write();
        return kExitOk;
    }

    if (*aff) {
        char* json = nullptr;
        check(ua_estimate_affected(af.p, af.n, af.frac, af.base, &json));
        std::string body = take_string(json);
        ordered_json parsed = ordered_json::parse(body);
        char line[128];
        std::snprintf(line, sizeof(line), "%.2fM / %.1f%%",
                      parsed["affected_millions"].get<double>(),
                      parsed["affected_pct"].get<double>());
        std::cout << line << "\n";
        if (!af.out.empty() || !af.csv.empty()) {
            Manifest manifest("affected", af.out.empty() ? af.csv : af.out);
            manifest.config()["p"] = af.p;
            manifest.config()["n"] = af.n;
            manifest.config()["frac"] = af.frac;
            manifest.config()["base"] = af.base;
            if (!af.out.empty()) manifest.add_output(af.out, body + "\n");
            if (!af.csv.empty()) {
                std::ostringstream csv;
                csv << "p_uniqueness,n_required,frac_with_n_or_more,base,affected_millions,"
                       "affected_pct\n"
                    << parsed["p_uniqueness"].dump() << ',' << parsed["n_required"].dump() << ','
                    << parsed["frac_with_n_or_more"].dump() << ',' << parsed["base"].dump() << ','
                    << parsed["affected_millions"].dump() << ',' << parsed["affected_pct"].dump()
                    << '\n';
                manifest.add_output(af.csv, csv.str());
            }
            manifest.write();
        }
        return kExitOk;
    }

    if (*cam) {
        PopulationHandle pop;
        load_population(cp.population, pop);
        ordered_json cfg;
        cfg["target"] = cp.target;
        cfg["skills_count"] = cp.skills_count;
        cfg["policy"] = cp.policy;
        cfg["days"] = cp.days;
        cfg["budget"] = cp.budget;
        cfg["floor"] = cp.floor;
        cfg["seed"] = cp.seed;
        cfg["campaign_id"] = cp.campaign_id;
        cfg["activity"] = {{"daily_impression_prob", cp.impression_prob}};
        char* json = nullptr;
        check(ua_campaign_run(pop.pop, cfg.dump().c_str(), &json));
        Manifest manifest("campaign", cp.out);
        manifest.config() = cfg;
        manifest.config()["population"] = fs::path(cp.population).filename().string();
        manifest.add_input(cp.population);
        manifest.add_output(cp.out, take_string(json) + "\n");
        manifest.write();
        return kExitOk;
    }

    if (*exp) {
        PopulationHandle pop;
        load_population(ex.population, pop);
        ordered_json cfg;
        ordered_json targets = ordered_json::array();
        std::istringstream ts(ex.targets);
        std::string t;
        while (std::getline(ts, t, ','))
            if (!t.empty()) targets.push_back(t);
        cfg["targets"] = targets;
        cfg["skill_counts"] = ex.skill_counts;
        cfg["repetitions"] = ex.repetitions;
        cfg["days"] = ex.days;
        cfg["floor"] = ex.floor;
        cfg["seed"] = ex.seed;
        cfg["activity"] = {{"daily_impression_prob", ex.impression_prob}};
        if (!ex.curve_scenario.empty()) cfg["curve_scenario"] = ex.curve_scenario;
        char* json = nullptr;
        check(ua_experiment_run(pop.pop, cfg.dump().c_str(), &json));
        Manifest manifest("experiment", ex.out);
        manifest.config() = cfg;
        manifest.config()["population"] = fs::path(ex.population).filename().string();
        manifest.add_input(ex.population);
        manifest.add_output(ex.out, take_string(json) + "\n");
        manifest.write();
        return kExitOk;
    }

    return kExitConfig;
}
