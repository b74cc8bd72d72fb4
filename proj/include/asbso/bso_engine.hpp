#pragma once

#include "asbso/adaptive_memory.hpp"
#include "asbso/clustering.hpp"
#include "asbso/core.hpp"
#include "asbso/step_strategies.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace asbso {

enum class Variant {
    classic_bso,   ///< fixed K = 20
    asbso_ims,     ///< ladder + improvement memory
    asbso_sfms,    ///< ladder + success/failure memory
    bso_one_fifth, ///< Gaussian step with 1/5-rule deviation
};

std::string_view to_string(Variant v);
/// Throws ConfigError on an unknown name.
Variant parse_variant(std::string_view name);

struct BsoConfig {
    std::size_t population_size = 100;
    ClusteringConfig clustering;
    double p_replace = 0.2;      ///< p_c: replace one center by a random individual
    double p_one_cluster = 0.8;  ///< p_g: base drawn from one cluster rather than two
    double p_one_center = 0.4;   ///< p_c1: use the center of the single cluster
    double p_two_centers = 0.5;  ///< p_c2: combine two centers rather than two members
    std::size_t budget = 0;      ///< maximum objective evaluations
    Variant variant = Variant::asbso_ims;
    StrategyLadder ladder = make_ladder(10.0, 20.0, 4);
    std::size_t memory_length = default_memory_length;
    double memory_floor = default_memory_floor;
    double one_fifth_ratio = 0.9;
    std::size_t one_fifth_epoch = 50;
    /// Initial deviation as a fraction of the mean box width.
    double one_fifth_sigma_fraction = 0.1;

    void validate() const;
    /// Iterations assumed by the step-length schedule: floor((budget - N) / N) + 1.
    std::size_t max_iterations() const;
};

struct TraceSample {
    std::size_t evaluations = 0;
    double best_fitness = 0.0;

    friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

/// Best-so-far fitness after initialization and after every iteration.
struct ConvergenceTrace {
    std::vector<TraceSample> samples;
    Individual best;
};

struct RunResult {
    ConvergenceTrace trace;
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
    /// Times a two-cluster branch was drawn with only one cluster available.
    std::size_t two_cluster_fallbacks = 0;
    /// Per-iteration selection probabilities for the memory variants (empty otherwise).
    std::vector<std::vector<double>> strategy_probabilities;
};

enum class SelectionBranch {
    one_center,
    one_member,
    two_centers,
    two_members,
};

struct BaseSelection {
    Vector position;
    SelectionBranch branch = SelectionBranch::one_center;
    bool fell_back = false;
};

/// Picks the point to perturb from a clustered population:
///   u < p_g  -> one uniform cluster; its center if u' < p_c1, else a uniform member;
///   else     -> two distinct uniform clusters; the two centers combined if
///               u' < p_c2, else one uniform member from each, combined.
/// Combination is w * a + (1 - w) * b with w ~ U(0, 1). With a single cluster
/// the two-cluster branch falls back to the one-cluster branch.
BaseSelection select_base_individual(const Population& population, const BsoConfig& cfg,
                                     RandomSource& rng);

/// x + step * g with g ~ N(0, I) drawn per coordinate from `rng`, clamped to bounds.
Vector generate_candidate(std::span<const double> x, double step, const Bounds& bounds,
                          RandomSource& rng);

/// Runs one optimization: N uniform individuals, then per iteration
/// re-cluster, maybe replace a center, and generate N candidates each
/// competing with the population slot it was generated for. Stops before any
/// evaluation that would exceed the budget.
RunResult run(const ObjectiveFunction& f, const BsoConfig& cfg, std::uint64_t seed);

} // namespace asbso
