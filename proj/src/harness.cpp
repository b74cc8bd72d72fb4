#include "asbso/harness.hpp"

#include "asbso/csv.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

namespace asbso {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::size_t as_count(std::string_view key, double value, std::size_t minimum = 1)
{
    if (!std::isfinite(value) || value != std::floor(value) || value < static_cast<double>(minimum))
        throw ConfigError(fmt::format("override '{}': expected an integer >= {}, got {}", key,
                                      minimum, value));
    return static_cast<std::size_t>(value);
}

std::uint64_t json_u64(const json& v, std::string_view field)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ConfigError(fmt::format("manifest: field '{}' must be a non-negative integer", field));
    return v.get<std::uint64_t>();
}

std::size_t positive_size(const json& v, std::string_view field)
{
    const auto x = json_u64(v, field);
    if (x == 0)
        throw ConfigError(fmt::format("manifest: field '{}' must be positive", field));
    return static_cast<std::size_t>(x);
}

std::string json_string(const json& v, std::string_view field)
{
    if (!v.is_string())
        throw ConfigError(fmt::format("manifest: field '{}' must be a string", field));
    return v.get<std::string>();
}

double median_of(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string yes_no(bool b) { return b ? "YES" : "NO"; }

std::string format_p(double p) { return fmt::format("{:.3E}", p); }

} // namespace

std::string FunctionRef::label() const
{
    std::string out(to_string(base));
    if (transform == Transform::shifted_rotated)
        out += "_sr";
    return out;
}

void apply_override(BsoConfig& cfg, std::string_view key, double value)
{
    if (!std::isfinite(value))
        throw ConfigError(fmt::format("override '{}': value must be finite", key));
    if (key == "population_size") {
        cfg.population_size = as_count(key, value);
    } else if (key == "C") {
        cfg.clustering.cluster_count = as_count(key, value);
    } else if (key == "kmeans_max_iterations") {
        cfg.clustering.max_iterations = as_count(key, value);
    } else if (key == "k") {
        cfg.ladder = make_ladder(value, cfg.ladder.increment(), cfg.ladder.size());
    } else if (key == "H") {
        cfg.ladder = make_ladder(cfg.ladder.base(), value, cfg.ladder.size());
    } else if (key == "M") {
        cfg.ladder = make_ladder(cfg.ladder.base(), cfg.ladder.increment(), as_count(key, value));
    } else if (key == "L") {
        cfg.memory_length = as_count(key, value);
    } else if (key == "delta") {
        if (!(value > 0.0))
            throw ConfigError("override 'delta': must be positive");
        cfg.memory_floor = value;
    } else if (key == "p_c") {
        cfg.p_replace = value;
    } else if (key == "p_g") {
        cfg.p_one_cluster = value;
    } else if (key == "p_c1") {
        cfg.p_one_center = value;
    } else if (key == "p_c2") {
        cfg.p_two_centers = value;
    } else if (key == "one_fifth_ratio") {
        if (!(value >= 0.85 && value <= 0.99))
            throw ConfigError("override 'one_fifth_ratio': must lie in [0.85, 0.99]");
        cfg.one_fifth_ratio = value;
    } else if (key == "one_fifth_epoch") {
        cfg.one_fifth_epoch = as_count(key, value);
    } else if (key == "one_fifth_sigma_fraction") {
        if (!(value > 0.0))
            throw ConfigError("override 'one_fifth_sigma_fraction': must be positive");
        cfg.one_fifth_sigma_fraction = value;
    } else {
        throw ConfigError(fmt::format("unknown override '{}'", key));
    }
}

void ExperimentManifest::validate() const
{
    if (algorithms.empty())
        throw ConfigError("manifest: field 'algorithms' must not be empty");
    std::set<std::string> names;
    for (const auto& a : algorithms) {
        if (a.name.empty())
            throw ConfigError("manifest: field 'algorithms[].name' must not be empty");
        csv::check_field(a.name);
        if (!names.insert(a.name).second)
            throw ConfigError(fmt::format("manifest: field 'algorithms' repeats name '{}'", a.name));
    }
    if (functions.empty())
        throw ConfigError("manifest: field 'functions' must not be empty");
    std::set<std::string> labels;
    for (const auto& f : functions)
        if (!labels.insert(f.label()).second)
            throw ConfigError(fmt::format("manifest: field 'functions' repeats '{}'", f.label()));
    if (dimensions.empty())
        throw ConfigError("manifest: field 'dimensions' must not be empty");
    for (auto d : dimensions)
        if (d < 1)
            throw ConfigError("manifest: field 'dimensions' entries must be positive");
    if (seeds.empty())
        throw ConfigError("manifest: field 'seeds' must not be empty");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
        throw ConfigError("manifest: field 'seeds' must be distinct");
    if (budget_multiplier < 1)
        throw ConfigError("manifest: field 'budget_multiplier' must be at least 1");
    for (const auto& a : algorithms) {
        for (auto d : dimensions) {
            auto cfg = a.config;
            cfg.budget = budget_multiplier * d;
            try {
                cfg.validate();
            } catch (const ConfigError& e) {
                throw ConfigError(
                    fmt::format("manifest: algorithm '{}' at D={}: {}", a.name, d, e.what()));
            }
        }
    }
}

ExperimentManifest parse_manifest(std::string_view text, std::uint64_t seed_base)
{
    const json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ConfigError("manifest: not a JSON object");

    static const std::set<std::string> known{"algorithms", "functions",  "dimensions",
                                             "seeds",      "budget_multiplier",
                                             "output_dir", "catalog_seed"};
    for (const auto& [key, value] : doc.items())
        if (!known.contains(key))
            throw ConfigError(fmt::format("manifest: unknown field '{}'", key));

    ExperimentManifest m;
    if (doc.contains("catalog_seed"))
        m.catalog_seed = json_u64(doc["catalog_seed"], "catalog_seed");
    if (doc.contains("budget_multiplier"))
        m.budget_multiplier = positive_size(doc["budget_multiplier"], "budget_multiplier");
    if (doc.contains("output_dir"))
        m.output_dir = json_string(doc["output_dir"], "output_dir");

    if (!doc.contains("algorithms") || !doc["algorithms"].is_array())
        throw ConfigError("manifest: field 'algorithms' must be an array");
    for (std::size_t i = 0; i < doc["algorithms"].size(); ++i) {
        const auto& entry = doc["algorithms"][i];
        const auto where = fmt::format("algorithms[{}]", i);
        if (!entry.is_object() || !entry.contains("variant"))
            throw ConfigError(fmt::format("manifest: field '{}.variant' is required", where));
        AlgorithmSpec spec;
        const auto variant = json_string(entry["variant"], where + ".variant");
        spec.config.variant = parse_variant(variant);
        spec.name = entry.contains("name") ? json_string(entry["name"], where + ".name") : variant;
        if (entry.contains("overrides")) {
            const auto& ov = entry["overrides"];
            if (!ov.is_object())
                throw ConfigError(fmt::format("manifest: field '{}.overrides' must be an object", where));
            for (const auto& [key, value] : ov.items()) {
                if (!value.is_number())
                    throw ConfigError(
                        fmt::format("manifest: field '{}.overrides.{}' must be a number", where, key));
                try {
                    apply_override(spec.config, key, value.get<double>());
                } catch (const ConfigError& e) {
                    throw ConfigError(
                        fmt::format("manifest: field '{}.overrides.{}': {}", where, key, e.what()));
                }
            }
        }
        m.algorithms.push_back(std::move(spec));
    }

    if (!doc.contains("functions"))
        throw ConfigError("manifest: field 'functions' is required");
    const auto& fns = doc["functions"];
    if (fns.is_string() && fns.get<std::string>() == "catalog") {
        for (const auto f : all_base_functions())
            for (const auto t : {Transform::identity, Transform::shifted_rotated})
                m.functions.push_back({f, t, std::nullopt});
    } else if (fns.is_array()) {
        for (std::size_t i = 0; i < fns.size(); ++i) {
            const auto& entry = fns[i];
            const auto where = fmt::format("functions[{}]", i);
            FunctionRef ref;
            if (entry.is_string()) {
                ref.base = parse_base_function(entry.get<std::string>());
            } else if (entry.is_object() && entry.contains("name")) {
                ref.base = parse_base_function(json_string(entry["name"], where + ".name"));
                if (entry.contains("transform"))
                    ref.transform = parse_transform(json_string(entry["transform"], where + ".transform"));
                if (entry.contains("seed"))
                    ref.seed = json_u64(entry["seed"], where + ".seed");
            } else {
                throw ConfigError(fmt::format("manifest: field '{}' must name a function", where));
            }
            m.functions.push_back(ref);
        }
    } else {
        throw ConfigError("manifest: field 'functions' must be an array or \"catalog\"");
    }

    if (!doc.contains("dimensions") || !doc["dimensions"].is_array())
        throw ConfigError("manifest: field 'dimensions' must be an array");
    for (const auto& d : doc["dimensions"])
        m.dimensions.push_back(positive_size(d, "dimensions"));

    if (doc.contains("seeds")) {
        if (!doc["seeds"].is_array())
            throw ConfigError("manifest: field 'seeds' must be an array");
        for (const auto& s : doc["seeds"])
            m.seeds.push_back(json_u64(s, "seeds"));
    } else {
        for (std::size_t i = 0; i < default_seed_count; ++i)
            m.seeds.push_back(seed_base + i);
    }

    m.validate();
    return m;
}

ExperimentManifest load_manifest(const std::filesystem::path& path, std::uint64_t seed_base)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(fmt::format("cannot open manifest '{}'", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str(), seed_base);
}

std::string make_run_id(std::string_view algorithm, std::string_view function, std::size_t dim,
                        std::uint64_t seed)
{
    return fmt::format("{}/{}/D{}/s{}", algorithm, function, dim, seed);
}

ManifestResults execute_manifest(const ExperimentManifest& manifest, const RunOptions& options)
{
    manifest.validate();

    struct FunctionKey {
        std::size_t function;
        std::size_t dim;
    };
    std::vector<Benchmark> benchmarks;
    std::vector<FunctionKey> bench_keys;
    for (std::size_t fi = 0; fi < manifest.functions.size(); ++fi) {
        const auto& ref = manifest.functions[fi];
        for (const auto d : manifest.dimensions) {
            const auto seed =
                ref.seed.value_or(catalog_transform_seed(manifest.catalog_seed, ref.base, d));
            benchmarks.push_back(make_benchmark(ref.base, d, ref.transform, seed));
            bench_keys.push_back({fi, d});
        }
    }

    struct Cell {
        std::size_t algorithm;
        std::size_t benchmark;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t a = 0; a < manifest.algorithms.size(); ++a)
        for (std::size_t b = 0; b < benchmarks.size(); ++b)
            for (const auto s : manifest.seeds)
                cells.push_back({a, b, s});

    struct CellOutput {
        TrialRecord trial;
        std::vector<TraceSample> samples;
    };
    std::vector<CellOutput> outputs(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const auto& cell = cells[i];
            const auto& alg = manifest.algorithms[cell.algorithm];
            const auto& bench = benchmarks[cell.benchmark];
            try {
                auto cfg = alg.config;
                cfg.budget = manifest.budget_multiplier * bench.spec->dim;
                const auto start = std::chrono::steady_clock::now();
                auto res = run(bench.objective, cfg, cell.seed);
                const auto stop = std::chrono::steady_clock::now();

                auto& out = outputs[i];
                out.trial.algorithm = alg.name;
                out.trial.function = bench.spec->label();
                out.trial.dim = bench.spec->dim;
                out.trial.seed = cell.seed;
                out.trial.run_id =
                    make_run_id(alg.name, out.trial.function, out.trial.dim, cell.seed);
                out.trial.best_fitness = res.trace.best.fitness;
                out.trial.evals_used = res.evaluations;
                out.trial.wall_ms =
                    options.record_wall_time
                        ? std::chrono::duration<double, std::milli>(stop - start).count()
                        : 0.0;
                out.samples = std::move(res.trace.samples);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, cells.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<std::size_t> order(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const auto& a = outputs[x].trial;
        const auto& b = outputs[y].trial;
        return std::tie(a.algorithm, a.function, a.dim, a.seed) <
               std::tie(b.algorithm, b.function, b.dim, b.seed);
    });

    ManifestResults results;
    for (const auto i : order) {
        results.trials.push_back(outputs[i].trial);
        for (const auto& s : outputs[i].samples)
            results.convergence.push_back({outputs[i].trial.run_id, s.evaluations, s.best_fitness});
    }
    results.summary = summarize(results.trials);
    return results;
}

ManifestResults run_manifest(const ExperimentManifest& manifest, const RunOptions& options)
{
    manifest.validate();
    std::error_code ec;
    std::filesystem::create_directories(manifest.output_dir, ec);
    if (ec)
        throw IoError(fmt::format("cannot create output directory '{}': {}",
                                  manifest.output_dir.string(), ec.message()));

    auto results = execute_manifest(manifest, options);
    csv::write_file(manifest.output_dir / "trials.csv", trials_csv(results.trials));
    csv::write_file(manifest.output_dir / "convergence.csv", convergence_csv(results.convergence));
    csv::write_file(manifest.output_dir / "summary.csv", summary_csv(results.summary));
    return results;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& trials)
{
    std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<double>> groups;
    for (const auto& t : trials)
        groups[{t.algorithm, t.function, t.dim}].push_back(t.best_fitness);

    std::vector<SummaryRow> out;
    for (const auto& [key, values] : groups) {
        SummaryRow row;
        std::tie(row.algorithm, row.function, row.dim) = key;
        const auto n = static_cast<double>(values.size());
        double sum = 0.0;
        for (double v : values)
            sum += v;
        row.mean = sum / n;
        double ss = 0.0;
        for (double v : values)
            ss += (v - row.mean) * (v - row.mean);
        row.std = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        row.min = *std::min_element(values.begin(), values.end());
        row.max = *std::max_element(values.begin(), values.end());
        row.median = median_of(values);
        out.push_back(std::move(row));
    }
    return out;
}

const std::vector<std::string> trials_header{"run_id", "algorithm",   "function",   "dim",
                                             "seed",   "best_fitness", "evals_used", "wall_ms"};
const std::vector<std::string> convergence_header{"run_id", "evals", "best_fitness"};
const std::vector<std::string> summary_header{"algorithm", "function", "dim", "mean",
                                              "std",       "min",      "median", "max"};

std::string trials_csv(const std::vector<TrialRecord>& trials)
{
    std::string out = csv::format_row(trials_header);
    for (const auto& t : trials) {
        out += csv::format_row({t.run_id, t.algorithm, t.function, std::to_string(t.dim),
                                std::to_string(t.seed), csv::format_double(t.best_fitness),
                                std::to_string(t.evals_used), fmt::format("{:.3f}", t.wall_ms)});
    }
    return out;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows)
{
    std::string out = csv::format_row(convergence_header);
    for (const auto& r : rows)
        out += csv::format_row({r.run_id, std::to_string(r.evals), csv::format_double(r.best_fitness)});
    return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows)
{
    std::string out = csv::format_row(summary_header);
    for (const auto& r : rows) {
        out += csv::format_row({r.algorithm, r.function, std::to_string(r.dim),
                                csv::format_double(r.mean), csv::format_double(r.std),
                                csv::format_double(r.min), csv::format_double(r.median),
                                csv::format_double(r.max)});
    }
    return out;
}

namespace {

std::vector<TrialRecord> trials_from_table(const csv::Table& table)
{
    std::vector<TrialRecord> out;
    for (const auto& row : table.rows) {
        TrialRecord t;
        t.run_id = row[0];
        t.algorithm = row[1];
        t.function = row[2];
        t.dim = csv::parse_unsigned(row[3]);
        t.seed = csv::parse_unsigned(row[4]);
        t.best_fitness = csv::parse_double(row[5]);
        t.evals_used = csv::parse_unsigned(row[6]);
        t.wall_ms = csv::parse_double(row[7]);
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace

std::vector<TrialRecord> parse_trials_csv(std::string_view text)
{
    auto table = csv::parse(text);
    if (table.header != trials_header)
        throw ConfigError("trials.csv: unexpected header");
    return trials_from_table(table);
}

std::vector<TrialRecord> read_trials_csv(const std::filesystem::path& path)
{
    return trials_from_table(csv::read_file(path, trials_header));
}

std::vector<ConvergenceRow> read_convergence_csv(const std::filesystem::path& path)
{
    const auto table = csv::read_file(path, convergence_header);
    std::vector<ConvergenceRow> out;
    for (const auto& row : table.rows)
        out.push_back({row[0], csv::parse_unsigned(row[1]), csv::parse_double(row[2])});
    return out;
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path)
{
    const auto table = csv::read_file(path, summary_header);
    std::vector<SummaryRow> out;
    for (const auto& row : table.rows) {
        out.push_back({row[0], row[1], csv::parse_unsigned(row[2]), csv::parse_double(row[3]),
                       csv::parse_double(row[4]), csv::parse_double(row[5]),
                       csv::parse_double(row[6]), csv::parse_double(row[7])});
    }
    return out;
}

ComparisonTest parse_comparison_test(std::string_view name)
{
    if (name == "wilcoxon")
        return ComparisonTest::wilcoxon;
    if (name == "friedman")
        return ComparisonTest::friedman;
    throw ConfigError(fmt::format("unknown test '{}' (expected wilcoxon or friedman)", name));
}

namespace {

using CellKey = std::pair<std::string, std::size_t>; // (function, dim)

struct CellMeans {
    std::vector<std::string> algorithms;      // sorted
    std::vector<CellKey> cells;               // sorted
    std::map<std::string, std::map<CellKey, double>> mean;
};

CellMeans cell_means(const std::vector<TrialRecord>& trials)
{
    std::map<std::string, std::map<CellKey, std::pair<double, std::size_t>>> acc;
    std::set<CellKey> all_cells;
    for (const auto& t : trials) {
        auto& slot = acc[t.algorithm][{t.function, t.dim}];
        slot.first += t.best_fitness;
        ++slot.second;
        all_cells.insert({t.function, t.dim});
    }
    CellMeans out;
    out.cells.assign(all_cells.begin(), all_cells.end());
    std::vector<std::string> missing;
    for (const auto& [alg, cells] : acc) {
        out.algorithms.push_back(alg);
        for (const auto& c : all_cells) {
            auto it = cells.find(c);
            if (it == cells.end())
                missing.push_back(fmt::format("{}:{}/D{}", alg, c.first, c.second));
            else
                out.mean[alg][c] = it->second.first / static_cast<double>(it->second.second);
        }
    }
    if (!missing.empty())
        throw ConfigError(fmt::format("compare: algorithms cover different cells; missing {}",
                                      fmt::join(missing, ", ")));
    return out;
}

void fill_friedman_rows(ComparisonReport& report, const std::vector<std::string>& names,
                        const FriedmanResult& fr)
{
    for (std::size_t j = 0; j < names.size(); ++j) {
        FriedmanRow row;
        row.algorithm = names[j];
        row.ranking = fr.average_ranks[j];
        row.is_control = j == fr.control;
        for (std::size_t k = 0; k < fr.compared.size(); ++k) {
            if (fr.compared[k] != j)
                continue;
            row.z = fr.z[k];
            row.unadjusted = fr.unadjusted[k];
            row.bonferroni = fr.adjusted.bonferroni[k];
            row.holm = fr.adjusted.holm[k];
            row.hochberg = fr.adjusted.hochberg[k];
        }
        report.friedman.push_back(row);
    }
}

void render_wilcoxon(ComparisonReport& report)
{
    std::string text = fmt::format(
        "Wilcoxon signed-rank test, control = {} (R+ sums ranks where the control is better)\n",
        report.control);
    text += fmt::format("{:<24} {:>9} {:>9} {:>9} {:>11} {:>11} {:>11}\n", "Opponent", "Dimension",
                        "R+", "R-", "p-value", "alpha=0.05", "alpha=0.01");
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.wilcoxon) {
        text += fmt::format("{:<24} {:>9} {:>9.1f} {:>9.1f} {:>11} {:>11} {:>11}\n", r.opponent,
                            r.dim, r.result.r_plus, r.result.r_minus, format_p(r.result.p_value),
                            yes_no(r.significant_05), yes_no(r.significant_01));
        rows.push_back({{"opponent", r.opponent},
                        {"dim", r.dim},
                        {"r_plus", r.result.r_plus},
                        {"r_minus", r.result.r_minus},
                        {"p_value", r.result.p_value},
                        {"n_effective", r.result.n_effective},
                        {"exact", r.result.exact},
                        {"significant_0.05", r.significant_05},
                        {"significant_0.01", r.significant_01}});
    }
    report.text = std::move(text);
    ordered_json doc = {{"test", "wilcoxon"}, {"control", report.control}, {"rows", rows}};
    report.json = doc.dump(2) + "\n";
}

void render_friedman(ComparisonReport& report)
{
    std::string text = fmt::format("Friedman test, control = {} (lower ranking is better)\n",
                                   report.control);
    if (report.friedman_raw) {
        text += fmt::format("problems = {}, chi-square = {:.4f}, p = {}\n",
                            report.friedman_raw->problems, report.friedman_raw->chi_square,
                            format_p(report.friedman_raw->omnibus_p));
    }
    text += fmt::format("{:<24} {:>9} {:>13} {:>11} {:>11} {:>11}\n", "Algorithm", "Ranking",
                        "unadjusted p", "p_Bonf", "p_Holm", "p_Hochberg");
    ordered_json rows = ordered_json::array();
    const bool with_p = report.friedman_raw.has_value();
    for (const auto& r : report.friedman) {
        if (r.is_control || !with_p) {
            text += fmt::format("{:<24} {:>9.4f} {:>13} {:>11} {:>11} {:>11}\n", r.algorithm,
                                r.ranking, "-", "-", "-", "-");
        } else {
            text += fmt::format("{:<24} {:>9.4f} {:>13} {:>11} {:>11} {:>11}\n", r.algorithm,
                                r.ranking, format_p(r.unadjusted), format_p(r.bonferroni),
                                format_p(r.holm), format_p(r.hochberg));
        }
        ordered_json row = {{"algorithm", r.algorithm}, {"ranking", r.ranking},
                            {"control", r.is_control}};
        if (with_p && !r.is_control) {
            row["z"] = r.z;
            row["unadjusted_p"] = r.unadjusted;
            row["p_bonferroni"] = r.bonferroni;
            row["p_holm"] = r.holm;
            row["p_hochberg"] = r.hochberg;
        }
        rows.push_back(std::move(row));
    }
    report.text = std::move(text);
    ordered_json doc = {{"test", "friedman"}, {"control", report.control}};
    if (report.friedman_raw) {
        doc["problems"] = report.friedman_raw->problems;
        doc["chi_square"] = report.friedman_raw->chi_square;
        doc["omnibus_p"] = report.friedman_raw->omnibus_p;
    }
    doc["rows"] = rows;
    report.json = doc.dump(2) + "\n";
}

} // namespace

ComparisonReport compare_trials(const std::vector<TrialRecord>& trials, std::string_view control,
                                ComparisonTest test)
{
    const auto means = cell_means(trials);
    const auto& names = means.algorithms;
    const auto control_it = std::find(names.begin(), names.end(), control);
    if (control_it == names.end())
        throw ConfigError(fmt::format("compare: control '{}' not found in trials", control));
    if (names.size() < 2)
        throw ConfigError("compare: trials contain fewer than 2 algorithms");

    ComparisonReport report;
    report.test = test;
    report.control = std::string(control);

    if (test == ComparisonTest::wilcoxon) {
        std::set<std::size_t> dims;
        for (const auto& c : means.cells)
            dims.insert(c.second);
        for (const auto& opponent : names) {
            if (opponent == control)
                continue;
            for (const auto d : dims) {
                std::vector<double> a;
                std::vector<double> b;
                for (const auto& c : means.cells) {
                    if (c.second != d)
                        continue;
                    a.push_back(means.mean.at(report.control).at(c));
                    b.push_back(means.mean.at(opponent).at(c));
                }
                WilcoxonRow row;
                row.opponent = opponent;
                row.dim = d;
                row.result = wilcoxon_signed_rank(a, b);
                row.significant_05 = row.result.p_value < 0.05;
                row.significant_01 = row.result.p_value < 0.01;
                report.wilcoxon.push_back(std::move(row));
            }
        }
        render_wilcoxon(report);
    } else {
        std::vector<std::vector<double>> matrix;
        for (const auto& c : means.cells) {
            std::vector<double> row;
            for (const auto& n : names)
                row.push_back(means.mean.at(n).at(c));
            matrix.push_back(std::move(row));
        }
        const auto control_index = static_cast<std::size_t>(control_it - names.begin());
        report.friedman_raw = friedman_with_posthoc(matrix, control_index);
        fill_friedman_rows(report, names, *report.friedman_raw);
        render_friedman(report);
    }
    return report;
}

void write_report(const ComparisonReport& report, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
    const std::string stem =
        report.test == ComparisonTest::wilcoxon ? "comparison_wilcoxon" : "comparison_friedman";
    csv::write_file(dir / (stem + ".txt"), report.text);
    csv::write_file(dir / (stem + ".json"), report.json);
}

SweepParameter parse_sweep_parameter(std::string_view name)
{
    if (name == "H")
        return SweepParameter::H;
    if (name == "k")
        return SweepParameter::k;
    if (name == "M")
        return SweepParameter::M;
    if (name == "L")
        return SweepParameter::L;
    if (name == "C")
        return SweepParameter::C;
    throw ConfigError(fmt::format("unknown sweep parameter '{}' (expected H, k, M, L or C)", name));
}

std::string_view to_string(SweepParameter p)
{
    switch (p) {
    case SweepParameter::H: return "H";
    case SweepParameter::k: return "k";
    case SweepParameter::M: return "M";
    case SweepParameter::L: return "L";
    case SweepParameter::C: return "C";
    }
    return "?";
}

SweepReport run_sweep(const ExperimentManifest& base, SweepParameter parameter,
                      const std::vector<double>& values, const RunOptions& options)
{
    if (base.algorithms.empty())
        throw ConfigError("sweep: manifest has no algorithm to sweep");
    if (values.empty())
        throw ConfigError("sweep: no values given");
    if (std::set<double>(values.begin(), values.end()).size() != values.size())
        throw ConfigError("sweep: values must be distinct");

    SweepReport report;
    report.parameter = parameter;
    report.values = values;

    ExperimentManifest m = base;
    m.algorithms.clear();
    const auto key = to_string(parameter);
    for (const double v : values) {
        AlgorithmSpec spec;
        spec.config = base.algorithms.front().config;
        try {
            apply_override(spec.config, key, v);
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("sweep: invalid value {} for {}: {}", v, key, e.what()));
        }
        spec.name = fmt::format("{}={:g}", key, v);
        report.algorithm_names.push_back(spec.name);
        m.algorithms.push_back(std::move(spec));
    }
    m.validate();
    const auto results = run_manifest(m, options);

    auto& cmp = report.comparison;
    cmp.test = ComparisonTest::friedman;
    if (values.size() == 1) {
        cmp.control = report.algorithm_names.front();
        FriedmanRow row;
        row.algorithm = cmp.control;
        row.ranking = 1.0;
        row.is_control = true;
        cmp.friedman.push_back(row);
        render_friedman(cmp);
    } else {
        auto first = compare_trials(results.trials, report.algorithm_names.front(),
                                    ComparisonTest::friedman);
        const auto& ranks = first.friedman_raw->average_ranks;
        const auto best = static_cast<std::size_t>(
            std::min_element(ranks.begin(), ranks.end()) - ranks.begin());
        // compare_trials orders algorithms by name; map back through the rows.
        cmp = compare_trials(results.trials, first.friedman[best].algorithm,
                             ComparisonTest::friedman);
    }
    cmp.text = fmt::format("Parameter sweep over {} = ({})\n", key, fmt::join(values, ", ")) + cmp.text;

    std::error_code ec;
    std::filesystem::create_directories(m.output_dir, ec);
    csv::write_file(m.output_dir / fmt::format("sweep_{}.txt", key), cmp.text);
    csv::write_file(m.output_dir / fmt::format("sweep_{}.json", key), cmp.json);
    return report;
}

} // namespace asbso
