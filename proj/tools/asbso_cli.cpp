// asbso: run experiment manifests, compare trial files, sweep parameters.

#include "asbso/benchmarks.hpp"
#include "asbso/core.hpp"
#include "asbso/harness.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>

namespace {

enum ExitCode { ok = 0, failure = 1, validation = 2, io = 3, insufficient = 4 };

struct CommonFlags {
    std::optional<std::string> out;
    std::size_t workers = 1;
    std::uint64_t seed_base = 1;
    std::optional<std::size_t> budget_multiplier;
    bool timing = false;
};

asbso::ExperimentManifest load(const std::string& path, const CommonFlags& flags)
{
    auto m = asbso::load_manifest(path, flags.seed_base);
    if (flags.out)
        m.output_dir = *flags.out;
    if (flags.budget_multiplier)
        m.budget_multiplier = *flags.budget_multiplier;
    m.validate();
    return m;
}

asbso::RunOptions run_options(const CommonFlags& flags)
{
    return {flags.workers, flags.timing};
}

int report_error(const char* kind, const std::exception& e, int code)
{
    fmt::print(stderr, "asbso: {}: {}\n", kind, e.what());
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Brain storm optimization with adaptive step-length memories"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", flags.out, "Output directory (overrides the manifest)");
        cmd->add_option("--workers", flags.workers, "Concurrent runs")->check(CLI::PositiveNumber);
        cmd->add_option("--seed-base", flags.seed_base, "First seed when the manifest lists none");
        cmd->add_option("--budget-multiplier", flags.budget_multiplier,
                        "Evaluations per dimension (overrides the manifest)")
            ->check(CLI::PositiveNumber);
        cmd->add_flag("--timing", flags.timing, "Record wall time in trials.csv");
    };

    std::string manifest_path;
    auto* run = app.add_subcommand("run", "Execute every cell of a manifest");
    run->add_option("manifest", manifest_path, "Manifest JSON")->required();
    add_common(run);

    std::string trials_path;
    std::string control;
    std::string test_name;
    std::string compare_out;
    auto* compare = app.add_subcommand("compare", "Compare algorithms in a trials.csv");
    compare->add_option("trials", trials_path, "trials.csv")->required();
    compare->add_option("--control", control, "Control algorithm")->required();
    compare->add_option("--test", test_name, "wilcoxon or friedman")->required();
    compare->add_option("--out", compare_out, "Report directory (default: next to trials.csv)");

    std::string param;
    std::vector<double> values;
    auto* sweep = app.add_subcommand("sweep", "Rank values of one parameter with a Friedman test");
    sweep->add_option("manifest", manifest_path, "Manifest JSON")->required();
    sweep->add_option("--param", param, "H, k, M, L or C")->required();
    sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
    add_common(sweep);

    std::uint64_t catalog_seed = asbso::default_catalog_seed;
    auto* catalog = app.add_subcommand("catalog", "Print the benchmark catalog manifest");
    catalog->add_option("--catalog-seed", catalog_seed, "Catalog seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return validation;
    }

    try {
        if (*run) {
            const auto m = load(manifest_path, flags);
            const auto res = asbso::run_manifest(m, run_options(flags));
            fmt::print("{} runs written to {}\n", res.trials.size(), m.output_dir.string());
        } else if (*compare) {
            const auto test = asbso::parse_comparison_test(test_name);
            const auto trials = asbso::read_trials_csv(trials_path);
            const auto report = asbso::compare_trials(trials, control, test);
            std::filesystem::path dir = compare_out;
            if (dir.empty())
                dir = std::filesystem::path(trials_path).parent_path();
            if (dir.empty())
                dir = ".";
            asbso::write_report(report, dir);
            fmt::print("{}", report.text);
        } else if (*sweep) {
            const auto m = load(manifest_path, flags);
            const auto p = asbso::parse_sweep_parameter(param);
            const auto report = asbso::run_sweep(m, p, values, run_options(flags));
            fmt::print("{}", report.comparison.text);
        } else if (*catalog) {
            fmt::print("{}", asbso::catalog_manifest_json(asbso::batch_catalog(catalog_seed)));
        }
    } catch (const asbso::ConfigError& e) {
        return report_error("invalid input", e, validation);
    } catch (const asbso::ContractViolation& e) {
        return report_error("invalid input", e, validation);
    } catch (const asbso::IoError& e) {
        return report_error("i/o error", e, io);
    } catch (const asbso::InsufficientDataError& e) {
        return report_error("insufficient data", e, insufficient);
    } catch (const std::exception& e) {
        return report_error("error", e, failure);
    }
    return ok;
}
