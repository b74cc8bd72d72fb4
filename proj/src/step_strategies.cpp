#include "asbso/step_strategies.hpp"

#include <cmath>

#include <fmt/format.h>

namespace asbso {

StrategyLadder::StrategyLadder(double base, double increment, std::size_t count)
    : base_(base), increment_(increment)
{
    if (!(base > 0.0))
        throw ConfigError(fmt::format("ladder: k must be positive, got {}", base));
    if (!(increment > 0.0))
        throw ConfigError(fmt::format("ladder: H must be positive, got {}", increment));
    if (count < 1)
        throw ConfigError("ladder: M must be at least 1");
    scales_.reserve(count);
    for (std::size_t j = 0; j < count; ++j)
        scales_.push_back(base + static_cast<double>(j) * increment);
}

StrategyLadder make_ladder(double k, double H, std::size_t M) { return StrategyLadder(k, H, M); }

double logsig(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

double step_schedule(std::size_t max_iter, std::size_t cur_iter, double K)
{
    if (cur_iter < 1 || cur_iter > max_iter)
        throw ContractViolation(
            fmt::format("step length: iteration {} outside [1, {}]", cur_iter, max_iter));
    if (!(K > 0.0))
        throw ContractViolation(fmt::format("step length: K must be positive, got {}", K));
    const double centre = static_cast<double>(max_iter) / 2.0;
    return logsig((centre - static_cast<double>(cur_iter)) / K);
}

double base_step_length(std::size_t max_iter, std::size_t cur_iter, double K, RandomSource& rng)
{
    return step_schedule(max_iter, cur_iter, K) * rng.uniform();
}

} // namespace asbso
