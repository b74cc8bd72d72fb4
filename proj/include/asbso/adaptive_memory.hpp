#pragma once

// Strategy-selection memories: improvement-credit memory (IMS), the
// success/failure memory it replaces (SFMS), and the 1/5 success rule.

#include "asbso/core.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

namespace asbso {

inline constexpr double default_memory_floor = 0.01;
inline constexpr std::size_t default_memory_length = 50;

/// Sliding window of per-strategy fitness improvements, one row per iteration.
///
/// Row t holds, for each strategy j, the summed improvement f(X) - f(X') over
/// every candidate of iteration t that used strategy j and replaced its parent.
/// Failed candidates contribute nothing. Selection probabilities are the
/// column sums over the window, each lifted by the floor delta, normalized.
class ImprovementMemory {
public:
    ImprovementMemory(std::size_t strategies, std::size_t length = default_memory_length,
                      double floor = default_memory_floor);

    /// Appends a row; evicts the oldest once more than L rows are held.
    /// Throws ContractViolation on wrong width or negative/non-finite entries.
    void record(std::span<const double> improvements);
    std::vector<double> column_sums() const;
    std::vector<double> probabilities() const;

    std::size_t strategies() const noexcept { return strategies_; }
    std::size_t length() const noexcept { return length_; }
    double floor() const noexcept { return floor_; }
    std::size_t rows() const noexcept { return rows_.size(); }
    const std::deque<std::vector<double>>& window() const noexcept { return rows_; }

private:
    std::size_t strategies_;
    std::size_t length_;
    double floor_;
    std::deque<std::vector<double>> rows_;
};

/// Paired success/failure count windows. Success rate per strategy is
/// sum(alpha) / (sum(alpha) + sum(beta)), 0 when nothing was tried, plus delta.
class SuccessFailureMemory {
public:
    SuccessFailureMemory(std::size_t strategies, std::size_t length = default_memory_length,
                         double floor = default_memory_floor);

    /// Appends one matched alpha/beta row pair.
    void record(std::span<const std::int64_t> successes, std::span<const std::int64_t> failures);
    std::vector<double> probabilities() const;

    std::size_t strategies() const noexcept { return strategies_; }
    std::size_t length() const noexcept { return length_; }
    std::size_t rows() const noexcept { return successes_.size(); }
    std::size_t failure_rows() const noexcept { return failures_.size(); }
    std::vector<std::int64_t> success_sums() const;
    std::vector<std::int64_t> failure_sums() const;

private:
    std::size_t strategies_;
    std::size_t length_;
    double floor_;
    std::deque<std::vector<std::int64_t>> successes_;
    std::deque<std::vector<std::int64_t>> failures_;
};

/// Index j for a given uniform draw u: the first j with u < p_0 + ... + p_j.
std::size_t roulette_index(std::span<const double> probabilities, double u);

/// Draws one uniform from `rng` and inverts the cumulative distribution.
/// Throws ContractViolation unless probabilities are non-negative and sum to 1
/// within 1e-12.
std::size_t roulette_select(std::span<const double> probabilities, RandomSource& rng);

/// Gaussian mutation with a deviation adapted by the 1/5 success rule.
class OneFifthState {
public:
    OneFifthState(double sigma, double ratio = 0.9, std::size_t epoch_length = 50);

    /// N(0, sigma^2) perturbation for each of `dim` coordinates.
    Vector step(RandomSource& rng, std::size_t dim) const;
    void record_trial(bool success);
    bool epoch_complete() const noexcept { return trials_ == epoch_length_; }
    /// sigma /= r above a 0.2 success rate, sigma *= r below it, unchanged at
    /// exactly 0.2; counters reset. Throws ContractViolation mid-epoch.
    void update();

    double sigma() const noexcept { return sigma_; }
    double ratio() const noexcept { return ratio_; }
    std::size_t epoch_length() const noexcept { return epoch_length_; }
    std::size_t successes() const noexcept { return successes_; }
    std::size_t trials() const noexcept { return trials_; }

private:
    double sigma_;
    double ratio_;
    std::size_t epoch_length_;
    std::size_t successes_ = 0;
    std::size_t trials_ = 0;
};

} // namespace asbso
