#include "asbso/bso_engine.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include <fmt/format.h>

namespace asbso {

namespace {

constexpr std::array variant_names{
    std::pair{Variant::classic_bso, std::string_view{"classic_bso"}},
    std::pair{Variant::asbso_ims, std::string_view{"asbso_ims"}},
    std::pair{Variant::asbso_sfms, std::string_view{"asbso_sfms"}},
    std::pair{Variant::bso_one_fifth, std::string_view{"bso_one_fifth"}},
};

void check_probability(double p, std::string_view name)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw ConfigError(fmt::format("bso config: {} = {} is outside [0, 1]", name, p));
}

Vector combine(std::span<const double> a, std::span<const double> b, double w)
{
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = w * a[i] + (1.0 - w) * b[i];
    return out;
}

} // namespace

std::string_view to_string(Variant v)
{
    for (const auto& [variant, name] : variant_names)
        if (variant == v)
            return name;
    return "unknown";
}

Variant parse_variant(std::string_view name)
{
    for (const auto& [variant, n] : variant_names)
        if (n == name)
            return variant;
    throw ConfigError(fmt::format("unknown variant '{}'", name));
}

void BsoConfig::validate() const
{
    if (population_size < 1)
        throw ConfigError("bso config: population_size must be at least 1");
    clustering.validate(population_size);
    check_probability(p_replace, "p_c");
    check_probability(p_one_cluster, "p_g");
    check_probability(p_one_center, "p_c1");
    check_probability(p_two_centers, "p_c2");
    if (budget < population_size)
        throw ConfigError(fmt::format("bso config: budget {} is below population size {}", budget,
                                      population_size));
    if (memory_length < 1)
        throw ConfigError("bso config: memory length L must be at least 1");
    if (!(one_fifth_sigma_fraction > 0.0))
        throw ConfigError("bso config: one_fifth_sigma_fraction must be positive");
}

std::size_t BsoConfig::max_iterations() const
{
    return (budget - population_size) / population_size + 1;
}

BaseSelection select_base_individual(const Population& population, const BsoConfig& cfg,
                                     RandomSource& rng)
{
    const std::size_t clusters = population.cluster_count();
    if (clusters == 0 || population.cluster_of.size() != population.size() ||
        population.center_positions.size() != clusters)
        throw ContractViolation("select_base_individual: population is not clustered");

    BaseSelection sel;
    bool one_cluster = rng.uniform() < cfg.p_one_cluster;
    if (!one_cluster && clusters < 2) {
        one_cluster = true;
        sel.fell_back = true;
    }

    if (one_cluster) {
        const std::size_t c = rng.below(clusters);
        if (rng.uniform() < cfg.p_one_center) {
            sel.branch = SelectionBranch::one_center;
            sel.position = population.center_positions[c];
        } else {
            sel.branch = SelectionBranch::one_member;
            const auto members = population.cluster_members(c);
            sel.position = population.members[members[rng.below(members.size())]].position;
        }
        return sel;
    }

    const std::size_t a = rng.below(clusters);
    std::size_t b = rng.below(clusters - 1);
    if (b >= a)
        ++b;
    const Vector* xa = nullptr;
    const Vector* xb = nullptr;
    if (rng.uniform() < cfg.p_two_centers) {
        sel.branch = SelectionBranch::two_centers;
        xa = &population.center_positions[a];
        xb = &population.center_positions[b];
    } else {
        sel.branch = SelectionBranch::two_members;
        const auto ma = population.cluster_members(a);
        const auto mb = population.cluster_members(b);
        xa = &population.members[ma[rng.below(ma.size())]].position;
        xb = &population.members[mb[rng.below(mb.size())]].position;
    }
    const double w = rng.uniform();
    sel.position = combine(*xa, *xb, w);
    return sel;
}

Vector generate_candidate(std::span<const double> x, double step, const Bounds& bounds,
                          RandomSource& rng)
{
    Vector out(x.begin(), x.end());
    for (auto& v : out)
        v += step * rng.normal();
    clamp_in_place(out, bounds);
    return out;
}

RunResult run(const ObjectiveFunction& f, const BsoConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    const Bounds& bounds = f.bounds;
    const std::size_t dim = f.dim();
    const std::size_t n = cfg.population_size;

    RngStream init_rng(seed, StreamLabel::init);
    RngStream cluster_rng(seed, StreamLabel::clustering);
    RngStream select_rng(seed, StreamLabel::selection);
    RngStream strategy_rng(seed, StreamLabel::strategy);
    RngStream mutation_rng(seed, StreamLabel::mutation);
    RngStream replace_rng(seed, StreamLabel::replacement);

    const bool uses_ladder = cfg.variant == Variant::asbso_ims || cfg.variant == Variant::asbso_sfms;
    const std::size_t strategies = uses_ladder ? cfg.ladder.size() : 1;

    std::optional<ImprovementMemory> ims;
    std::optional<SuccessFailureMemory> sfms;
    std::optional<OneFifthState> one_fifth;
    if (cfg.variant == Variant::asbso_ims)
        ims.emplace(strategies, cfg.memory_length, cfg.memory_floor);
    if (cfg.variant == Variant::asbso_sfms)
        sfms.emplace(strategies, cfg.memory_length, cfg.memory_floor);
    if (cfg.variant == Variant::bso_one_fifth) {
        double mean_width = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            mean_width += bounds.width(i);
        mean_width /= static_cast<double>(dim);
        one_fifth.emplace(cfg.one_fifth_sigma_fraction * mean_width, cfg.one_fifth_ratio,
                          cfg.one_fifth_epoch);
    }

    RunResult result;
    std::size_t& evals = result.evaluations;

    Population pop;
    pop.members.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pop.members.push_back(evaluate_individual(random_position(bounds, init_rng), f, evals));

    double best_so_far = pop.members[pop.best_index()].fitness;
    result.trace.best = pop.members[pop.best_index()];
    result.trace.samples.push_back({evals, best_so_far});
    auto note_best = [&](const Individual& ind) {
        if (ind.fitness < best_so_far) {
            best_so_far = ind.fitness;
            result.trace.best = ind;
        }
    };

    const std::size_t max_iter = cfg.max_iterations();
    std::vector<double> improvement_row(strategies);
    std::vector<std::int64_t> success_row(strategies);
    std::vector<std::int64_t> failure_row(strategies);
    std::vector<double> probabilities(strategies, 1.0);

    while (evals < cfg.budget) {
        const std::size_t iteration = ++result.iterations;
        assign_clusters(pop, cfg.clustering, cluster_rng);

        if (replace_rng.uniform() < cfg.p_replace) {
            const std::size_t c = replace_rng.below(pop.cluster_count());
            pop.center_positions[c] = random_position(bounds, replace_rng);
        }

        if (ims)
            probabilities = ims->probabilities();
        else if (sfms)
            probabilities = sfms->probabilities();
        if (uses_ladder)
            result.strategy_probabilities.push_back(probabilities);
        std::fill(improvement_row.begin(), improvement_row.end(), 0.0);
        std::fill(success_row.begin(), success_row.end(), 0);
        std::fill(failure_row.begin(), failure_row.end(), 0);

        for (std::size_t i = 0; i < n && evals < cfg.budget; ++i) {
            const auto base = select_base_individual(pop, cfg, select_rng);
            result.two_cluster_fallbacks += base.fell_back ? 1 : 0;

            std::size_t strategy = 0;
            Vector candidate;
            if (cfg.variant == Variant::bso_one_fifth) {
                candidate = base.position;
                const auto noise = one_fifth->step(mutation_rng, dim);
                for (std::size_t d = 0; d < dim; ++d)
                    candidate[d] += noise[d];
                clamp_in_place(candidate, bounds);
            } else {
                double K = classic_scale;
                if (uses_ladder) {
                    strategy = roulette_select(probabilities, strategy_rng);
                    K = cfg.ladder.scale(strategy);
                }
                const double step = base_step_length(max_iter, iteration, K, mutation_rng);
                candidate = generate_candidate(base.position, step, bounds, mutation_rng);
            }

            auto trial = evaluate_individual(std::move(candidate), f, evals);
            auto& slot = pop.members[i];
            const bool success = trial.fitness < slot.fitness;
            if (success) {
                improvement_row[strategy] += slot.fitness - trial.fitness;
                ++success_row[strategy];
                note_best(trial);
                slot = std::move(trial);
            } else {
                ++failure_row[strategy];
            }
            if (one_fifth) {
                one_fifth->record_trial(success);
                if (one_fifth->epoch_complete())
                    one_fifth->update();
            }
        }

        if (ims)
            ims->record(improvement_row);
        else if (sfms)
            sfms->record(success_row, failure_row);
        result.trace.samples.push_back({evals, best_so_far});
    }
    return result;
}

} // namespace asbso
