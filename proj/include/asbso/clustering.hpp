#pragma once

#include "asbso/core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace asbso {

enum class EmptyClusterPolicy { reseed_random_member };

struct ClusteringConfig {
    std::size_t cluster_count = 5;
    std::size_t max_iterations = 100;
    EmptyClusterPolicy empty_cluster_policy = EmptyClusterPolicy::reseed_random_member;

    /// Throws ConfigError if the config cannot partition `population_size` points.
    void validate(std::size_t population_size) const;
};

/// Outcome of Lloyd's iteration on a point set.
struct KMeansResult {
    std::vector<std::size_t> assignment;
    /// Row-major C x D.
    std::vector<double> centroids;
    std::size_t iterations = 0;
    bool converged = false;
    /// Within-cluster sum of squares after each assignment step.
    std::vector<double> wcss_history;
};

/// C distinct indices in [0, n), uniformly without replacement (partial Fisher-Yates).
std::vector<std::size_t> choose_initial_centroids(std::size_t n, std::size_t c, RandomSource& rng);

/// Lloyd's iteration from the given starting centroids. Points are assigned to
/// the nearest centroid (lowest index on ties); an empty cluster has its
/// centroid reseeded at a member drawn from `rng`. Stops once an assignment
/// step changes nothing or after `max_iterations` assignment steps. The final
/// assignment never leaves a cluster empty.
KMeansResult lloyd(std::span<const Vector> points, std::span<const std::size_t> initial,
                   std::size_t max_iterations, RandomSource& rng);

/// Partitions the population and fills cluster_of / centers in place.
void assign_clusters(Population& population, const ClusteringConfig& cfg, RandomSource& rng);

/// Value-returning form of assign_clusters.
Population kmeans_partition(Population population, const ClusteringConfig& cfg, RandomSource& rng);

} // namespace asbso
