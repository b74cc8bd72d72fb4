#include "asbso/clustering.hpp"

#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace asbso {

void ClusteringConfig::validate(std::size_t population_size) const
{
    if (cluster_count < 1)
        throw ConfigError("clustering: cluster_count must be at least 1");
    if (cluster_count > population_size)
        throw ConfigError(fmt::format("clustering: cluster_count {} exceeds population size {}",
                                      cluster_count, population_size));
    if (max_iterations < 1)
        throw ConfigError("clustering: max_iterations must be at least 1");
}

std::vector<std::size_t> choose_initial_centroids(std::size_t n, std::size_t c, RandomSource& rng)
{
    if (c > n)
        throw ConfigError(fmt::format("clustering: cannot pick {} centroids from {} points", c, n));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < c; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(c);
    return idx;
}

namespace {

double squared_distance(std::span<const double> a, const double* b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace

KMeansResult lloyd(std::span<const Vector> points, std::span<const std::size_t> initial,
                   std::size_t max_iterations, RandomSource& rng)
{
    const std::size_t n = points.size();
    const std::size_t c = initial.size();
    if (n == 0 || c == 0 || c > n)
        throw ConfigError(fmt::format("lloyd: need 1 <= C <= N, got C={} N={}", c, n));
    const std::size_t dim = points[0].size();

    KMeansResult res;
    res.centroids.resize(c * dim);
    for (std::size_t k = 0; k < c; ++k)
        std::copy(points[initial[k]].begin(), points[initial[k]].end(),
                  res.centroids.begin() + static_cast<std::ptrdiff_t>(k * dim));

    constexpr std::size_t unassigned = std::numeric_limits<std::size_t>::max();
    res.assignment.assign(n, unassigned);
    std::vector<std::size_t> counts(c);

    while (res.iterations < max_iterations) {
        ++res.iterations;
        bool changed = false;
        double wcss = 0.0;
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = squared_distance(points[i], res.centroids.data());
            for (std::size_t k = 1; k < c; ++k) {
                const double d = squared_distance(points[i], res.centroids.data() + k * dim);
                if (d < best_d) {
                    best_d = d;
                    best = k;
                }
            }
            changed |= res.assignment[i] != best;
            res.assignment[i] = best;
            ++counts[best];
            wcss += best_d;
        }
        res.wcss_history.push_back(wcss);

        bool any_empty = false;
        for (std::size_t k = 0; k < c; ++k)
            any_empty |= counts[k] == 0;
        if (!changed && !any_empty) {
            res.converged = true;
            break;
        }

        std::fill(res.centroids.begin(), res.centroids.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double* row = res.centroids.data() + res.assignment[i] * dim;
            for (std::size_t d = 0; d < dim; ++d)
                row[d] += points[i][d];
        }
        for (std::size_t k = 0; k < c; ++k) {
            double* row = res.centroids.data() + k * dim;
            if (counts[k] == 0) {
                const auto& seed_point = points[rng.below(n)];
                std::copy(seed_point.begin(), seed_point.end(), row);
            } else {
                for (std::size_t d = 0; d < dim; ++d)
                    row[d] /= static_cast<double>(counts[k]);
            }
        }
    }

    // Iteration cap hit with an empty cluster: hand it a member taken from a
    // cluster that can spare one.
    for (std::size_t k = 0; k < c; ++k) {
        if (counts[k] != 0)
            continue;
        std::size_t donor = rng.below(n);
        while (counts[res.assignment[donor]] < 2)
            donor = (donor + 1) % n;
        --counts[res.assignment[donor]];
        res.assignment[donor] = k;
        counts[k] = 1;
        std::copy(points[donor].begin(), points[donor].end(),
                  res.centroids.begin() + static_cast<std::ptrdiff_t>(k * dim));
        res.converged = false;
    }
    return res;
}

void assign_clusters(Population& population, const ClusteringConfig& cfg, RandomSource& rng)
{
    if (population.members.empty())
        throw ContractViolation("kmeans_partition: empty population");
    cfg.validate(population.size());

    std::vector<Vector> points;
    points.reserve(population.size());
    for (const auto& m : population.members)
        points.push_back(m.position);

    const auto initial = choose_initial_centroids(points.size(), cfg.cluster_count, rng);
    auto km = lloyd(points, initial, cfg.max_iterations, rng);

    population.cluster_of = std::move(km.assignment);
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    population.centers.assign(cfg.cluster_count, none);
    for (std::size_t i = 0; i < population.size(); ++i) {
        auto& center = population.centers[population.cluster_of[i]];
        if (center == none || population.members[i].fitness < population.members[center].fitness)
            center = i;
    }
    population.center_positions.clear();
    for (const auto c : population.centers)
        population.center_positions.push_back(population.members[c].position);
}

Population kmeans_partition(Population population, const ClusteringConfig& cfg, RandomSource& rng)
{
    assign_clusters(population, cfg, rng);
    return population;
}

} // namespace asbso
