// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion ...]   (default: all)

#include "asbso/adaptive_memory.hpp"
#include "asbso/benchmarks.hpp"
#include "asbso/bso_engine.hpp"
#include "asbso/harness.hpp"
#include "asbso/stats.hpp"
#include "asbso/step_strategies.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace asbso;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

class ScriptedUniform final : public RandomSource {
public:
    explicit ScriptedUniform(double u) : u_(u) {}
    double uniform() override { return u_; }
    double normal() override { return 0.0; }
    std::size_t below(std::size_t) override { return 0; }

private:
    double u_;
};

bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t)
{
    return std::chrono::duration<double>(Clock::now() - t).count();
}

Outcome equation_fidelity()
{
    std::vector<std::string> failed;
    auto expect = [&](bool ok, const char* what) {
        if (!ok)
            failed.emplace_back(what);
    };

    for (double u : {0.1, 0.37, 0.5, 0.99}) {
        ScriptedUniform rng(u);
        expect(close(base_step_length(200, 100, 20, rng), 0.5 * u), "logsig(0) * u = 0.5 u");
    }
    ScriptedUniform one(1.0);
    expect(close(base_step_length(3000, 3000, 20, one), 1.0 / (1.0 + std::exp(75.0)), 1e-45),
           "xi at C_i = M_i");

    SuccessFailureMemory sfms(2);
    sfms.record(std::vector<std::int64_t>{5, 0}, std::vector<std::int64_t>{5, 10});
    const auto ps = sfms.probabilities();
    expect(close(ps[0], 0.51 / 0.52) && close(ps[1], 0.01 / 0.52), "SFMS (0.9808, 0.0192)");
    SuccessFailureMemory sfms_empty(4);
    for (double p : sfms_empty.probabilities())
        expect(close(p, 0.25), "SFMS empty is uniform");

    ImprovementMemory ims(4);
    for (double p : ims.probabilities())
        expect(close(p, 0.25), "IMS empty is uniform");
    ims.record(std::vector<double>{2, 1, 1, 0});
    const auto pi = ims.probabilities();
    const double want[] = {2.01 / 4.04, 1.01 / 4.04, 1.01 / 4.04, 0.01 / 4.04};
    for (int j = 0; j < 4; ++j)
        expect(close(pi[j], want[j]), "IMS (2.01, 1.01, 1.01, 0.01) / 4.04");

    auto epoch = [](int successes, int trials) {
        OneFifthState s(1.0, 0.9, static_cast<std::size_t>(trials));
        for (int i = 0; i < trials; ++i)
            s.record_trial(i < successes);
        s.update();
        return s.sigma();
    };
    expect(close(epoch(5, 10), 1.0 / 0.9), "1/5 rule grows above 0.2");
    expect(close(epoch(1, 10), 0.9), "1/5 rule shrinks below 0.2");
    expect(epoch(2, 10) == 1.0, "1/5 rule holds at 0.2");

    if (failed.empty())
        return {true, "step length, SFMS, IMS and 1/5-rule arithmetic exact to 1e-12"};
    return {false, fmt::format("failed: {}", fmt::join(failed, "; "))};
}

Outcome memory_discrimination()
{
    const double d2 = 0.75;
    ImprovementMemory ims(2);
    ims.record(std::vector<double>{2 * d2, d2});
    const auto pi = ims.probabilities();
    SuccessFailureMemory sfms(2);
    sfms.record(std::vector<std::int64_t>{1, 1}, std::vector<std::int64_t>{0, 0});
    const auto ps = sfms.probabilities();
    const bool ok = pi[0] > pi[1] && ps[0] == ps[1];
    return {ok, fmt::format("IMS p = ({:.6f}, {:.6f}); SFMS p = ({}, {})", pi[0], pi[1], ps[0],
                            ps[1])};
}

Outcome ladder()
{
    const auto l = make_ladder(10, 20, 4);
    const bool ok = l.scales() == std::vector<double>{10, 30, 50, 70};
    return {ok, fmt::format("make_ladder(10, 20, 4) = ({})", fmt::join(l.scales(), ", "))};
}

Outcome degenerate_equivalence()
{
    const auto f = make_benchmark(BaseFunction::sphere, 10, Transform::identity, 0).objective;
    BsoConfig classic;
    classic.variant = Variant::classic_bso;
    classic.population_size = 50;
    classic.budget = 20000;
    BsoConfig ims = classic;
    ims.variant = Variant::asbso_ims;
    ims.ladder = make_ladder(20, 20, 1);
    std::size_t identical = 0;
    const std::uint64_t seeds[] = {1, 2, 3, 4, 5};
    for (auto s : seeds) {
        const auto a = run(f, classic, s);
        const auto b = run(f, ims, s);
        if (a.trace.samples == b.trace.samples && a.trace.best.position == b.trace.best.position &&
            a.trace.best.fitness == b.trace.best.fitness)
            ++identical;
    }
    return {identical == std::size(seeds),
            fmt::format("{}/{} seeds bit-identical (sphere D=10, N=50, budget 20000)", identical,
                        std::size(seeds))};
}

Outcome solvability()
{
    const auto f = make_benchmark(BaseFunction::sphere, 10, Transform::identity, 0).objective;
    BsoConfig cfg;
    cfg.variant = Variant::asbso_ims;
    cfg.population_size = 100;
    cfg.budget = 100000;
    std::size_t solved = 0;
    double worst = 0.0;
    for (std::uint64_t s = 1; s <= 30; ++s) {
        const double best = run(f, cfg, s).trace.best.fitness;
        solved += best < 1e-6 ? 1 : 0;
        worst = std::max(worst, best);
    }
    return {solved >= 28, fmt::format("{}/30 seeds below 1e-6 (worst {:.3e})", solved, worst)};
}

Outcome direction_reproduction(std::size_t workers)
{
    ExperimentManifest m;
    AlgorithmSpec asbso_spec;
    asbso_spec.name = "ASBSO";
    asbso_spec.config.variant = Variant::asbso_ims;
    AlgorithmSpec bso_spec;
    bso_spec.name = "BSO";
    bso_spec.config.variant = Variant::classic_bso;
    m.algorithms = {asbso_spec, bso_spec};
    for (auto f : all_base_functions())
        for (auto t : {Transform::identity, Transform::shifted_rotated})
            m.functions.push_back({f, t, std::nullopt});
    m.dimensions = {10, 30};
    for (std::uint64_t s = 1; s <= 30; ++s)
        m.seeds.push_back(s);
    m.budget_multiplier = 2000;

    const auto results = execute_manifest(m, {workers, false});
    const auto report = compare_trials(results.trials, "ASBSO", ComparisonTest::wilcoxon);
    bool ok = report.wilcoxon.size() == 2;
    std::vector<std::string> parts;
    for (const auto& row : report.wilcoxon) {
        const bool row_ok = row.result.r_plus > row.result.r_minus && row.result.p_value < 0.05;
        ok = ok && row_ok;
        parts.push_back(fmt::format("D={}: R+={:.1f} R-={:.1f} p={:.3E}", row.dim,
                                    row.result.r_plus, row.result.r_minus, row.result.p_value));
    }
    return {ok, fmt::format("{}", fmt::join(parts, "; "))};
}

Outcome wilcoxon_oracle()
{
    std::mt19937_64 gen(20240601);
    std::uniform_int_distribution<int> mag(1, 9);
    std::size_t exact_cases = 0;
    std::size_t exact_mismatch = 0;
    for (std::size_t n = 1; n <= 12; ++n) {
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<double> d(n);
            for (auto& v : d)
                v = (gen() & 1 ? 1.0 : -1.0) * mag(gen);
            std::vector<double> mags(n);
            for (std::size_t i = 0; i < n; ++i)
                mags[i] = std::abs(d[i]);
            const auto ranks = average_ranks(mags);
            double rp = 0.0;
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                total += ranks[i];
                if (d[i] > 0)
                    rp += ranks[i];
            }
            const double observed = std::abs(2 * rp - total);
            std::uint64_t extreme = 0;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                double w = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask >> i & 1)
                        w += ranks[i];
                if (std::abs(2 * w - total) >= observed)
                    ++extreme;
            }
            const double brute = std::ldexp(static_cast<double>(extreme), -static_cast<int>(n));
            ++exact_cases;
            if (wilcoxon_exact_p(ranks, rp) != brute)
                ++exact_mismatch;
        }
    }

    std::normal_distribution<double> g(0.3, 1.0);
    double worst_gap = 0.0;
    for (std::size_t n = 15; n <= 20; ++n) {
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<double> d(n);
            std::vector<double> mags(n);
            for (std::size_t i = 0; i < n; ++i) {
                d[i] = g(gen);
                mags[i] = std::abs(d[i]);
            }
            const auto ranks = average_ranks(mags);
            double rp = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (d[i] > 0)
                    rp += ranks[i];
            worst_gap = std::max(worst_gap, std::abs(wilcoxon_exact_p(ranks, rp) -
                                                     wilcoxon_normal_p(ranks, rp)));
        }
    }
    return {exact_mismatch == 0 && worst_gap < 0.02,
            fmt::format("{} exact cases, {} mismatches; max |exact - normal| = {:.4f} for n in "
                        "[15, 20]",
                        exact_cases, exact_mismatch, worst_gap)};
}

Outcome reference_value()
{
    std::vector<double> d{1.0, -1.0};
    for (int m = 3; m <= 28; ++m)
        d.push_back((m <= 10 || m == 22) ? -m : m);
    const std::vector<double> a(d.size(), 0.0);
    const auto r = wilcoxon_signed_rank(a, d);
    const double rel = std::abs(r.p_value - 2.782e-3) / 2.782e-3;
    const bool ok = r.r_plus == 330.5 && r.r_minus == 75.5 && r.n_effective == 28 && rel < 0.05;
    return {ok, fmt::format("R+={} R-={} n={} p={:.4e} ({:.1f}% from 2.782e-3)", r.r_plus,
                            r.r_minus, r.n_effective, r.p_value, 100 * rel)};
}

Outcome posthoc()
{
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t violations = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t m = 1 + static_cast<std::size_t>(rep % 15);
        std::vector<double> p(m);
        for (auto& v : p)
            v = rep % 2 ? u(gen) : std::pow(u(gen), 5);
        const auto adj = adjust_p_values(p);
        for (std::size_t i = 0; i < m; ++i) {
            const bool ok = adj.holm[i] >= p[i] && adj.hochberg[i] <= adj.holm[i] &&
                            adj.bonferroni[i] >= adj.holm[i] && adj.holm[i] <= 1.0 &&
                            adj.hochberg[i] <= 1.0 && adj.bonferroni[i] <= 1.0;
            violations += ok ? 0 : 1;
        }
    }
    return {violations == 0, fmt::format("1000 random p-vectors, {} violations", violations)};
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome concurrency_equivalence()
{
    ExperimentManifest m;
    AlgorithmSpec a;
    a.name = "ASBSO";
    a.config.variant = Variant::asbso_ims;
    AlgorithmSpec b;
    b.name = "BSO";
    b.config.variant = Variant::classic_bso;
    m.algorithms = {a, b};
    m.functions = {{BaseFunction::rastrigin, Transform::shifted_rotated, std::nullopt},
                   {BaseFunction::griewank, Transform::identity, std::nullopt}};
    m.dimensions = {2, 5};
    m.seeds = {1, 2, 3, 4, 5};
    m.budget_multiplier = 2000;

    const auto root = fs::temp_directory_path() / "asbso_acceptance_workers";
    fs::remove_all(root);
    m.output_dir = root / "w1";
    run_manifest(m, {1, false});
    m.output_dir = root / "w8";
    run_manifest(m, {8, false});

    bool ok = true;
    std::vector<std::string> same;
    for (const char* file : {"trials.csv", "convergence.csv", "summary.csv"}) {
        const auto x = read_file(root / "w1" / file);
        const auto y = read_file(root / "w8" / file);
        const bool eq = !x.empty() && x == y;
        ok = ok && eq;
        same.push_back(fmt::format("{} {}", file, eq ? "identical" : "DIFFERS"));
    }
    const auto rows = read_trials_csv(root / "w1" / "trials.csv").size();
    ok = ok && rows == 40;
    fs::remove_all(root);
    return {ok, fmt::format("{} rows; {}", rows, fmt::join(same, ", "))};
}

Outcome complexity()
{
    const auto f = make_benchmark(BaseFunction::rastrigin, 30, Transform::shifted_rotated, 5).objective;
    auto per_iteration = [&](Variant v) {
        BsoConfig cfg;
        cfg.variant = v;
        cfg.population_size = 100;
        cfg.budget = 100 + 200 * 100;
        double best = 1e300;
        for (std::uint64_t s = 1; s <= 3; ++s) {
            const auto t0 = Clock::now();
            const auto r = run(f, cfg, s);
            best = std::min(best, seconds_since(t0) / static_cast<double>(r.iterations));
        }
        return best;
    };
    const double bso = per_iteration(Variant::classic_bso);
    const double asbso = per_iteration(Variant::asbso_ims);
    const double ratio = asbso / bso;
    return {ratio <= 2.0 && ratio >= 0.5,
            fmt::format("per iteration: ASBSO {:.3f} ms, BSO {:.3f} ms, ratio {:.3f}",
                        1e3 * asbso, 1e3 * bso, ratio)};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char** argv)
{
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* w = std::getenv("ASBSO_ACCEPTANCE_WORKERS"))
        workers = std::max(1, std::atoi(w));

    const std::vector<Criterion> criteria{
        {1, "equation fidelity", equation_fidelity},
        {2, "memory-mechanism discrimination", memory_discrimination},
        {3, "ladder correctness", ladder},
        {4, "degenerate-variant equivalence", degenerate_equivalence},
        {5, "solvability (sphere D=10)", solvability},
        {6, "direction-level reproduction (ASBSO vs BSO)", [&] { return direction_reproduction(workers); }},
        {7, "Wilcoxon oracle equivalence", wilcoxon_oracle},
        {8, "Wilcoxon reference-value regression", reference_value},
        {9, "post-hoc correctness", posthoc},
        {10, "determinism and concurrency equivalence", concurrency_equivalence},
        {11, "complexity sanity", complexity},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.contains(c.id))
            continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, fmt::format("threw: {}", e.what())};
        }
        failures += o.pass ? 0 : 1;
        fmt::print("{} [{:>2}] {}: {} ({:.2f} s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                   o.detail, seconds_since(t0));
        std::fflush(stdout);
    }
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
