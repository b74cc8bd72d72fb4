#pragma once

// Experiment runner: manifest -> grid of runs -> CSV artifacts -> comparison reports.

#include "asbso/benchmarks.hpp"
#include "asbso/bso_engine.hpp"
#include "asbso/stats.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asbso {

struct AlgorithmSpec {
    std::string name;
    /// budget is filled per dimension from the manifest's multiplier.
    BsoConfig config;
};

struct FunctionRef {
    BaseFunction base = BaseFunction::sphere;
    Transform transform = Transform::identity;
    /// Transform seed; derived from the catalog seed when absent.
    std::optional<std::uint64_t> seed;

    std::string label() const;
};

struct ExperimentManifest {
    std::vector<AlgorithmSpec> algorithms;
    std::vector<FunctionRef> functions;
    std::vector<std::size_t> dimensions;
    std::vector<std::uint64_t> seeds;
    std::size_t budget_multiplier = 10000;
    std::uint64_t catalog_seed = default_catalog_seed;
    std::filesystem::path output_dir = "results";

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

inline constexpr std::size_t default_seed_count = 30;

/// Parses the JSON manifest. Missing "seeds" expands to `seed_base`, ...,
/// `seed_base + 29`. "functions" may be the string "catalog" for every base
/// function under both transforms. Algorithm "overrides" accept
/// population_size, C, kmeans_max_iterations, k, H, M, L, delta, p_c, p_g,
/// p_c1, p_c2, one_fifth_ratio, one_fifth_epoch, one_fifth_sigma_fraction.
ExperimentManifest parse_manifest(std::string_view json, std::uint64_t seed_base = 1);
ExperimentManifest load_manifest(const std::filesystem::path& path, std::uint64_t seed_base = 1);

/// Applies one named override to a config; throws ConfigError on unknown names
/// or invalid values.
void apply_override(BsoConfig& cfg, std::string_view key, double value);

struct TrialRecord {
    std::string run_id;
    std::string algorithm;
    std::string function;
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    double best_fitness = 0.0;
    std::size_t evals_used = 0;
    double wall_ms = 0.0;
};

struct ConvergenceRow {
    std::string run_id;
    std::size_t evals = 0;
    double best_fitness = 0.0;
};

struct SummaryRow {
    std::string algorithm;
    std::string function;
    std::size_t dim = 0;
    double mean = 0.0;
    double std = 0.0;  ///< sample standard deviation (n - 1)
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

struct RunOptions {
    std::size_t workers = 1;
    /// Wall time makes trials.csv non-reproducible, so it is written as 0
    /// unless requested.
    bool record_wall_time = false;
};

struct ManifestResults {
    std::vector<TrialRecord> trials;
    std::vector<ConvergenceRow> convergence;
    std::vector<SummaryRow> summary;
};

std::string make_run_id(std::string_view algorithm, std::string_view function, std::size_t dim,
                        std::uint64_t seed);

/// Executes every (algorithm, function, dimension, seed) cell on a pool of
/// `workers` threads. Output rows are sorted by (algorithm, function, dim,
/// seed) so the result does not depend on the worker count.
ManifestResults execute_manifest(const ExperimentManifest& manifest, const RunOptions& options = {});

/// execute_manifest plus trials.csv, convergence.csv and summary.csv in the
/// manifest's output directory.
ManifestResults run_manifest(const ExperimentManifest& manifest, const RunOptions& options = {});

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& trials);

extern const std::vector<std::string> trials_header;
extern const std::vector<std::string> convergence_header;
extern const std::vector<std::string> summary_header;

std::string trials_csv(const std::vector<TrialRecord>& trials);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::vector<TrialRecord> parse_trials_csv(std::string_view text);
std::vector<TrialRecord> read_trials_csv(const std::filesystem::path& path);
std::vector<ConvergenceRow> read_convergence_csv(const std::filesystem::path& path);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

enum class ComparisonTest { wilcoxon, friedman };
ComparisonTest parse_comparison_test(std::string_view name);

struct WilcoxonRow {
    std::string opponent;
    std::size_t dim = 0;
    WilcoxonResult result;
    bool significant_05 = false;
    bool significant_01 = false;
};

struct FriedmanRow {
    std::string algorithm;
    double ranking = 0.0;
    bool is_control = false;
    double z = 0.0;
    double unadjusted = 1.0;
    double bonferroni = 1.0;
    double holm = 1.0;
    double hochberg = 1.0;
};

struct ComparisonReport {
    ComparisonTest test = ComparisonTest::wilcoxon;
    std::string control;
    std::vector<WilcoxonRow> wilcoxon;
    std::vector<FriedmanRow> friedman;
    std::optional<FriedmanResult> friedman_raw;
    std::string text;
    std::string json;
};

/// Pairs algorithms on (function, dim) cells using the per-cell mean fitness.
/// Wilcoxon: one row per opponent and dimension. Friedman: one ranking over
/// all cells. Throws ConfigError when algorithms cover different cells (the
/// message lists them) or the control is absent, and InsufficientDataError
/// from the tests.
ComparisonReport compare_trials(const std::vector<TrialRecord>& trials, std::string_view control,
                                ComparisonTest test);

/// Writes comparison_<test>.txt and comparison_<test>.json into `dir`.
void write_report(const ComparisonReport& report, const std::filesystem::path& dir);

enum class SweepParameter { H, k, M, L, C };
SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

struct SweepReport {
    SweepParameter parameter = SweepParameter::H;
    std::vector<double> values;
    std::vector<std::string> algorithm_names;
    /// Average rank per value; p-values only when there are at least 2 values.
    ComparisonReport comparison;
};

/// Runs the manifest's first algorithm once per value of `parameter` and
/// ranks the values with a Friedman test; the best-ranked value is the control.
SweepReport run_sweep(const ExperimentManifest& base, SweepParameter parameter,
                      const std::vector<double>& values, const RunOptions& options = {});

} // namespace asbso
