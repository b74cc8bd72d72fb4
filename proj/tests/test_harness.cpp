#include "asbso/csv.hpp"
#include "asbso/harness.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace asbso;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("asbso_harness_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentManifest tiny_manifest(const fs::path& out)
{
    auto m = parse_manifest(R"({
        "algorithms": [
            {"name": "ASBSO", "variant": "asbso_ims", "overrides": {"population_size": 20, "C": 3}},
            {"name": "BSO", "variant": "classic_bso", "overrides": {"population_size": 20, "C": 3}}
        ],
        "functions": [{"name": "sphere"}],
        "dimensions": [3],
        "seeds": [1, 2, 3],
        "budget_multiplier": 200
    })");
    m.output_dir = out;
    return m;
}

TrialRecord trial(const std::string& alg, const std::string& fn, std::size_t dim,
                  std::uint64_t seed, double best)
{
    TrialRecord t;
    t.algorithm = alg;
    t.function = fn;
    t.dim = dim;
    t.seed = seed;
    t.best_fitness = best;
    t.evals_used = 100;
    t.run_id = make_run_id(alg, fn, dim, seed);
    return t;
}

} // namespace

TEST_CASE("grid cardinality, determinism and round trip")
{
    const auto out = scratch("grid");
    const auto m = tiny_manifest(out);
    const auto res = run_manifest(m);
    CHECK(res.trials.size() == 6);
    const auto first = slurp(out / "trials.csv");
    run_manifest(m);
    CHECK(slurp(out / "trials.csv") == first);

    const auto trials = read_trials_csv(out / "trials.csv");
    REQUIRE(trials.size() == 6);
    for (std::size_t i = 0; i < trials.size(); ++i) {
        CHECK(trials[i].run_id == res.trials[i].run_id);
        CHECK(trials[i].best_fitness == res.trials[i].best_fitness);
        CHECK(trials[i].evals_used <= 600);
        CHECK(trials[i].wall_ms == 0.0);
    }
    CHECK(trials.front().algorithm == "ASBSO");
    CHECK(trials.back().algorithm == "BSO");

    const auto conv = read_convergence_csv(out / "convergence.csv");
    CHECK(conv.size() == res.convergence.size());
    CHECK(conv.front().evals == 20);

    const auto summary = read_summary_csv(out / "summary.csv");
    REQUIRE(summary.size() == 2);
    double sum = 0.0;
    for (const auto& t : trials)
        if (t.algorithm == "ASBSO")
            sum += t.best_fitness;
    CHECK(summary[0].mean == doctest::Approx(sum / 3.0).epsilon(1e-14));
    CHECK(summary[0].min <= summary[0].median);
    CHECK(summary[0].median <= summary[0].max);
    fs::remove_all(out);
}

TEST_CASE("worker count does not change output")
{
    const auto m = tiny_manifest(scratch("workers"));
    const auto a = execute_manifest(m, {1, false});
    const auto b = execute_manifest(m, {4, false});
    CHECK(trials_csv(a.trials) == trials_csv(b.trials));
    CHECK(convergence_csv(a.convergence) == convergence_csv(b.convergence));
}

TEST_CASE("summary statistics")
{
    const std::vector<TrialRecord> ts{trial("A", "f", 2, 1, 1.0), trial("A", "f", 2, 2, 2.0),
                                      trial("A", "f", 2, 3, 6.0), trial("A", "f", 2, 4, 3.0)};
    const auto s = summarize(ts);
    REQUIRE(s.size() == 1);
    CHECK(s[0].mean == 3.0);
    CHECK(s[0].median == 2.5);
    CHECK(s[0].min == 1.0);
    CHECK(s[0].max == 6.0);
    CHECK(s[0].std == doctest::Approx(std::sqrt(14.0 / 3.0)));
}

TEST_CASE("manifest validation names the field")
{
    auto expect_field = [](const std::string& json, const std::string& field) {
        try {
            parse_manifest(json);
            FAIL("expected ConfigError for " << field);
        } catch (const ConfigError& e) {
            CHECK_MESSAGE(std::string(e.what()).find(field) != std::string::npos, e.what());
        }
    };
    const std::string fns = R"("functions": ["sphere"], "dimensions": [2])";
    expect_field(R"({"functions": ["sphere"], "dimensions": [2]})", "algorithms");
    expect_field(R"({"algorithms": [{"variant": "asbso_ims"}], "dimensions": [2]})", "functions");
    expect_field(R"({"algorithms": [{"variant": "nope"}], )" + fns + "}", "nope");
    expect_field(R"({"algorithms": [{"variant": "asbso_ims"}], )" + fns + R"(, "seeds": [1, 1]})",
                 "seeds");
    expect_field(R"({"algorithms": [{"variant": "asbso_ims"}], )" + fns +
                     R"(, "budget_multiplier": 0})",
                 "budget_multiplier");
    expect_field(R"({"algorithms": [{"variant": "asbso_ims", "overrides": {"M": 0}}], )" + fns + "}",
                 "overrides.M");
    expect_field(R"({"algorithms": [{"variant": "asbso_ims", "overrides": {"zeta": 1}}], )" + fns +
                     "}",
                 "zeta");
    expect_field(R"({"algorithms": [{"variant": "asbso_ims"}], )" + fns + R"(, "colour": 1})",
                 "colour");
    expect_field("not json", "JSON");
}

TEST_CASE("manifest defaults")
{
    const auto m = parse_manifest(
        R"({"algorithms": [{"variant": "asbso_sfms"}], "functions": "catalog", "dimensions": [10]})", 100);
    CHECK(m.algorithms[0].name == "asbso_sfms");
    CHECK(m.functions.size() == 14);
    CHECK(m.seeds.size() == 30);
    CHECK(m.seeds.front() == 100);
    CHECK(m.budget_multiplier == 10000);
    CHECK(m.output_dir == fs::path("results"));
}

TEST_CASE("overrides")
{
    BsoConfig cfg;
    apply_override(cfg, "H", 10);
    apply_override(cfg, "M", 3);
    CHECK(cfg.ladder.scales() == std::vector<double>{10, 20, 30});
    apply_override(cfg, "k", 5);
    CHECK(cfg.ladder.scales() == std::vector<double>{5, 15, 25});
    apply_override(cfg, "L", 20);
    CHECK(cfg.memory_length == 20);
    CHECK_THROWS_AS(apply_override(cfg, "C", 2.5), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "H", -1), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "one_fifth_ratio", 0.5), ConfigError);
}

TEST_CASE("unwritable output directory is an io error")
{
    auto m = tiny_manifest("/proc/asbso_cannot_write_here");
    CHECK_THROWS_AS(run_manifest(m), IoError);
}

TEST_CASE("compare: unanimous dominance")
{
    std::vector<TrialRecord> ts;
    const char* fns[] = {"a", "b", "c", "d", "e", "f"};
    double base = 1.0;
    for (const char* f : fns) {
        base *= 1.7;
        ts.push_back(trial("ctl", f, 10, 1, base));
        ts.push_back(trial("opp", f, 10, 1, base + 1.0 + base));
    }
    const auto r = compare_trials(ts, "ctl", ComparisonTest::wilcoxon);
    REQUIRE(r.wilcoxon.size() == 1);
    CHECK(r.wilcoxon[0].result.r_minus == 0.0);
    CHECK(r.wilcoxon[0].result.r_plus == 21.0);
    CHECK(r.wilcoxon[0].result.p_value == 0.03125);
    CHECK(r.wilcoxon[0].significant_05);
    CHECK_FALSE(r.wilcoxon[0].significant_01);

    // With 8 functions p = 2/256 < 0.01.
    ts.push_back(trial("ctl", "g", 10, 1, 1.0));
    ts.push_back(trial("opp", "g", 10, 1, 2.5));
    ts.push_back(trial("ctl", "h", 10, 1, 1.0));
    ts.push_back(trial("opp", "h", 10, 1, 2.25));
    const auto r8 = compare_trials(ts, "ctl", ComparisonTest::wilcoxon);
    CHECK(r8.wilcoxon[0].result.r_minus == 0.0);
    CHECK(r8.wilcoxon[0].significant_05);
    CHECK(r8.wilcoxon[0].significant_01);
    CHECK(r8.text.find("YES") != std::string::npos);
    CHECK(r8.json.find("\"r_plus\"") != std::string::npos);
}

TEST_CASE("compare: identical algorithms have no usable pairs")
{
    std::vector<TrialRecord> ts;
    for (const char* f : {"a", "b", "c", "d", "e"}) {
        ts.push_back(trial("x", f, 2, 1, 1.0));
        ts.push_back(trial("y", f, 2, 1, 1.0));
    }
    CHECK_THROWS_AS(compare_trials(ts, "x", ComparisonTest::wilcoxon), InsufficientDataError);
}

TEST_CASE("compare: missing cells are listed")
{
    std::vector<TrialRecord> ts{trial("x", "a", 2, 1, 1.0), trial("x", "b", 2, 1, 1.0),
                                trial("y", "a", 2, 1, 2.0)};
    try {
        compare_trials(ts, "x", ComparisonTest::friedman);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("y:b/D2") != std::string::npos);
    }
    CHECK_THROWS_AS(compare_trials(ts, "z", ComparisonTest::friedman), ConfigError);
    CHECK_THROWS_AS(compare_trials({trial("x", "a", 2, 1, 1.0)}, "x", ComparisonTest::friedman),
                    ConfigError);
}

TEST_CASE("compare: friedman ranking follows a forced ordering")
{
    std::vector<TrialRecord> ts;
    for (int f = 0; f < 12; ++f) {
        const std::string fn = "f" + std::to_string(f);
        for (std::uint64_t s = 1; s <= 3; ++s) {
            ts.push_back(trial("mid", fn, 10, s, 2.0 + f));
            ts.push_back(trial("best", fn, 10, s, 1.0 + f));
            ts.push_back(trial("worst", fn, 10, s, 3.0 + f));
        }
    }
    const auto r = compare_trials(ts, "best", ComparisonTest::friedman);
    std::map<std::string, double> rank;
    for (const auto& row : r.friedman)
        rank[row.algorithm] = row.ranking;
    CHECK(rank["best"] == 1.0);
    CHECK(rank["mid"] == 2.0);
    CHECK(rank["worst"] == 3.0);
    CHECK(r.text.find("p_Holm") != std::string::npos);
    for (const auto& row : r.friedman)
        if (!row.is_control)
            CHECK(row.holm >= row.unadjusted);

    const auto dir = scratch("report");
    write_report(r, dir);
    CHECK(fs::exists(dir / "comparison_friedman.txt"));
    CHECK(fs::exists(dir / "comparison_friedman.json"));
    fs::remove_all(dir);
}

TEST_CASE("sweep")
{
    const auto out = scratch("sweep");
    auto m = tiny_manifest(out);
    m.dimensions = {2};
    m.functions = {{BaseFunction::sphere, Transform::identity, std::nullopt},
                   {BaseFunction::rastrigin, Transform::identity, std::nullopt}};
    m.seeds = {1, 2};
    const auto r = run_sweep(m, SweepParameter::H, {10, 20, 30});
    CHECK(r.algorithm_names == std::vector<std::string>{"H=10", "H=20", "H=30"});
    CHECK(r.comparison.friedman.size() == 3);
    CHECK(fs::exists(out / "sweep_H.txt"));
    CHECK(fs::exists(out / "sweep_H.json"));
    double best = 1e9;
    for (const auto& row : r.comparison.friedman)
        best = std::min(best, row.ranking);
    for (const auto& row : r.comparison.friedman)
        if (row.is_control)
            CHECK(row.ranking == best);

    const auto single = run_sweep(m, SweepParameter::M, {4});
    CHECK(single.comparison.friedman.size() == 1);
    CHECK_FALSE(single.comparison.friedman_raw.has_value());
    CHECK(single.comparison.text.find("E-") == std::string::npos);

    CHECK_THROWS_AS(run_sweep(m, SweepParameter::M, {0}), ConfigError);
    CHECK_THROWS_AS(parse_sweep_parameter("Q"), ConfigError);
    fs::remove_all(out);
}
