#include "asbso/adaptive_memory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace asbso {

namespace {

void check_shape(std::size_t strategies, std::size_t length, double floor)
{
    if (strategies < 1)
        throw ConfigError("memory: at least one strategy required");
    if (length < 1)
        throw ConfigError("memory: window length L must be at least 1");
    if (!(floor > 0.0) || !std::isfinite(floor))
        throw ConfigError(fmt::format("memory: floor must be positive, got {}", floor));
}

std::vector<double> normalize(std::vector<double> scores)
{
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    for (auto& s : scores)
        s /= total;
    return scores;
}

} // namespace

ImprovementMemory::ImprovementMemory(std::size_t strategies, std::size_t length, double floor)
    : strategies_(strategies), length_(length), floor_(floor)
{
    check_shape(strategies, length, floor);
}

void ImprovementMemory::record(std::span<const double> improvements)
{
    if (improvements.size() != strategies_)
        throw ContractViolation(fmt::format("IMS record: expected {} entries, got {}",
                                            strategies_, improvements.size()));
    for (std::size_t j = 0; j < improvements.size(); ++j) {
        if (!(improvements[j] >= 0.0) || !std::isfinite(improvements[j]))
            throw ContractViolation(
                fmt::format("IMS record: improvement for strategy {} is {}", j, improvements[j]));
    }
    rows_.emplace_back(improvements.begin(), improvements.end());
    if (rows_.size() > length_)
        rows_.pop_front();
}

std::vector<double> ImprovementMemory::column_sums() const
{
    std::vector<double> sums(strategies_, 0.0);
    for (const auto& row : rows_)
        for (std::size_t j = 0; j < strategies_; ++j)
            sums[j] += row[j];
    return sums;
}

std::vector<double> ImprovementMemory::probabilities() const
{
    auto scores = column_sums();
    for (auto& s : scores)
        s += floor_;
    return normalize(std::move(scores));
}

SuccessFailureMemory::SuccessFailureMemory(std::size_t strategies, std::size_t length, double floor)
    : strategies_(strategies), length_(length), floor_(floor)
{
    check_shape(strategies, length, floor);
}

void SuccessFailureMemory::record(std::span<const std::int64_t> successes,
                                  std::span<const std::int64_t> failures)
{
    if (successes.size() != strategies_ || failures.size() != strategies_)
        throw ContractViolation(fmt::format("SFMS record: expected {} entries, got {} and {}",
                                            strategies_, successes.size(), failures.size()));
    for (std::size_t j = 0; j < strategies_; ++j) {
        if (successes[j] < 0 || failures[j] < 0)
            throw ContractViolation(fmt::format("SFMS record: negative count for strategy {}", j));
    }
    successes_.emplace_back(successes.begin(), successes.end());
    failures_.emplace_back(failures.begin(), failures.end());
    if (successes_.size() > length_) {
        successes_.pop_front();
        failures_.pop_front();
    }
}

std::vector<std::int64_t> SuccessFailureMemory::success_sums() const
{
    std::vector<std::int64_t> sums(strategies_, 0);
    for (const auto& row : successes_)
        for (std::size_t j = 0; j < strategies_; ++j)
            sums[j] += row[j];
    return sums;
}

std::vector<std::int64_t> SuccessFailureMemory::failure_sums() const
{
    std::vector<std::int64_t> sums(strategies_, 0);
    for (const auto& row : failures_)
        for (std::size_t j = 0; j < strategies_; ++j)
            sums[j] += row[j];
    return sums;
}

std::vector<double> SuccessFailureMemory::probabilities() const
{
    const auto alpha = success_sums();
    const auto beta = failure_sums();
    std::vector<double> scores(strategies_);
    for (std::size_t j = 0; j < strategies_; ++j) {
        const auto tried = alpha[j] + beta[j];
        const double rate =
            tried == 0 ? 0.0 : static_cast<double>(alpha[j]) / static_cast<double>(tried);
        scores[j] = rate + floor_;
    }
    return normalize(std::move(scores));
}

std::size_t roulette_index(std::span<const double> probabilities, double u)
{
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < probabilities.size(); ++j) {
        if (probabilities[j] > 0.0)
            last_positive = j;
        cumulative += probabilities[j];
        if (u < cumulative && probabilities[j] > 0.0)
            return j;
    }
    // u landed in the rounding gap above the final cumulative sum.
    return last_positive;
}

std::size_t roulette_select(std::span<const double> probabilities, RandomSource& rng)
{
    if (probabilities.empty())
        throw ContractViolation("roulette: empty distribution");
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw ContractViolation(fmt::format("roulette: invalid probability {}", p));
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ContractViolation(fmt::format("roulette: probabilities sum to {:.17g}", total));
    return roulette_index(probabilities, rng.uniform());
}

OneFifthState::OneFifthState(double sigma, double ratio, std::size_t epoch_length)
    : sigma_(sigma), ratio_(ratio), epoch_length_(epoch_length)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ConfigError(fmt::format("1/5 rule: sigma must be positive, got {}", sigma));
    if (!(ratio >= 0.85 && ratio <= 0.99))
        throw ConfigError(fmt::format("1/5 rule: ratio {} outside [0.85, 0.99]", ratio));
    if (epoch_length < 1)
        throw ConfigError("1/5 rule: epoch length must be at least 1");
}

Vector OneFifthState::step(RandomSource& rng, std::size_t dim) const
{
    Vector out(dim);
    for (auto& v : out)
        v = sigma_ * rng.normal();
    return out;
}

void OneFifthState::record_trial(bool success)
{
    if (trials_ >= epoch_length_)
        throw ContractViolation("1/5 rule: epoch already complete, call update() first");
    ++trials_;
    if (success)
        ++successes_;
}

void OneFifthState::update()
{
    if (!epoch_complete())
        throw ContractViolation(fmt::format("1/5 rule: update after {} of {} trials", trials_,
                                            epoch_length_));
    // Compare 5 * successes against trials in integers so s_r = 0.2 is exact.
    const auto scaled = 5 * successes_;
    if (scaled > trials_)
        sigma_ /= ratio_;
    else if (scaled < trials_)
        sigma_ = std::max(sigma_ * ratio_, std::numeric_limits<double>::min());
    successes_ = 0;
    trials_ = 0;
}

} // namespace asbso
