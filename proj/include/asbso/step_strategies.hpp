#pragma once

#include "asbso/core.hpp"

#include <cstddef>
#include <vector>

namespace asbso {

/// Scale parameters K_j = k + (j - 1) * H, j = 1..M. Small K gives wide early
/// steps, large K a flatter and more local schedule.
class StrategyLadder {
public:
    StrategyLadder(double base, double increment, std::size_t count);

    double base() const noexcept { return base_; }
    double increment() const noexcept { return increment_; }
    std::size_t size() const noexcept { return scales_.size(); }
    double scale(std::size_t j) const { return scales_.at(j); }
    const std::vector<double>& scales() const noexcept { return scales_; }

private:
    double base_;
    double increment_;
    std::vector<double> scales_;
};

/// Throws ConfigError on non-positive k or H, or M < 1.
StrategyLadder make_ladder(double k, double H, std::size_t M);

/// Fixed K of classic BSO.
inline constexpr double classic_scale = 20.0;

double logsig(double x) noexcept;

/// Deterministic part of the step length: logsig((max_iter / 2 - cur_iter) / K).
double step_schedule(std::size_t max_iter, std::size_t cur_iter, double K);

/// Step length xi = logsig((max_iter / 2 - cur_iter) / K) * u with one uniform
/// u drawn from `rng` per call. Iterations count from 1.
double base_step_length(std::size_t max_iter, std::size_t cur_iter, double K, RandomSource& rng);

} // namespace asbso
