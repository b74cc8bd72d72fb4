#include "asbso/stats.hpp"

#include "asbso/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

namespace asbso {

namespace {

/// Ranks scaled by two; exact for average ranks.
std::vector<std::int64_t> doubled_ranks(std::span<const double> ranks)
{
    std::vector<std::int64_t> out;
    out.reserve(ranks.size());
    for (double r : ranks) {
        const double twice = 2.0 * r;
        const double rounded = std::round(twice);
        if (std::abs(twice - rounded) > 1e-9 || rounded < 1.0)
            throw ContractViolation(fmt::format("wilcoxon: rank {} is not a positive half-integer", r));
        out.push_back(static_cast<std::int64_t>(rounded));
    }
    return out;
}

} // namespace

double two_sided_normal_p(double z) { return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0))); }

std::vector<double> average_ranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]])
            ++j;
        // positions i..j (0-based) share rank ((i + 1) + (j + 1)) / 2
        const double r = static_cast<double>(i + j + 2) / 2.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double wilcoxon_exact_p(std::span<const double> ranks, double r_plus)
{
    const std::size_t n = ranks.size();
    if (n == 0)
        return 1.0;
    if (n > 62)
        throw ContractViolation(fmt::format("wilcoxon exact: n = {} is too large", n));
    const auto r2 = doubled_ranks(ranks);
    const std::int64_t total = std::accumulate(r2.begin(), r2.end(), std::int64_t{0});

    // counts[s]: sign assignments whose doubled positive-rank sum is s.
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(total) + 1, 0);
    counts[0] = 1;
    std::int64_t reach = 0;
    for (const auto r : r2) {
        for (std::int64_t s = reach; s >= 0; --s)
            counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
        reach += r;
    }

    // Compare |2 W - total| in doubled units to stay in integers.
    const std::int64_t observed = std::llround(2.0 * r_plus);
    const std::int64_t observed_distance = std::abs(2 * observed - total);
    std::uint64_t extreme = 0;
    for (std::int64_t s = 0; s <= total; ++s)
        if (std::abs(2 * s - total) >= observed_distance)
            extreme += counts[static_cast<std::size_t>(s)];
    return std::ldexp(static_cast<double>(extreme), -static_cast<int>(n));
}

double wilcoxon_normal_p(std::span<const double> ranks, double r_plus)
{
    const auto n = static_cast<double>(ranks.size());
    if (ranks.empty())
        return 1.0;
    const double mean = n * (n + 1.0) / 4.0;
    double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;

    std::vector<double> sorted(ranks.begin(), ranks.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i])
            ++j;
        const auto t = static_cast<double>(j - i);
        variance -= (t * t * t - t) / 48.0;
        i = j;
    }
    if (!(variance > 0.0))
        return 1.0;
    const double distance = std::max(0.0, std::abs(r_plus - mean) - 0.5);
    return two_sided_normal_p(distance / std::sqrt(variance));
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    const WilcoxonOptions& options)
{
    if (a.size() != b.size())
        throw ContractViolation(
            fmt::format("wilcoxon: sample sizes differ ({} vs {})", a.size(), b.size()));

    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = b[i] - a[i];
        if (d != 0.0)
            diffs.push_back(d);
    }
    if (diffs.size() < options.min_n)
        throw InsufficientDataError(fmt::format(
            "wilcoxon: {} non-zero differences, need at least {}", diffs.size(), options.min_n));

    std::vector<double> magnitudes(diffs.size());
    std::transform(diffs.begin(), diffs.end(), magnitudes.begin(),
                   [](double d) { return std::abs(d); });
    const auto ranks = average_ranks(magnitudes);

    WilcoxonResult res;
    res.n_effective = diffs.size();
    for (std::size_t i = 0; i < diffs.size(); ++i)
        (diffs[i] > 0.0 ? res.r_plus : res.r_minus) += ranks[i];
    res.exact = res.n_effective <= options.exact_max_n;
    res.p_value = res.exact ? wilcoxon_exact_p(ranks, res.r_plus)
                            : wilcoxon_normal_p(ranks, res.r_plus);
    return res;
}

AdjustedPValues adjust_p_values(std::span<const double> unadjusted)
{
    const std::size_t m = unadjusted.size();
    AdjustedPValues out;
    out.bonferroni.resize(m);
    out.holm.resize(m);
    out.hochberg.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        out.bonferroni[i] = std::min(1.0, static_cast<double>(m) * unadjusted[i]);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return unadjusted[i] < unadjusted[j]; });

    // Holm step-down: running maximum of (m - k) p_(k) from the smallest p.
    double running = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double scaled = static_cast<double>(m - k) * unadjusted[order[k]];
        running = std::max(running, std::min(1.0, scaled));
        out.holm[order[k]] = running;
    }
    // Hochberg step-up: running minimum of (m - k) p_(k) from the largest p.
    running = 1.0;
    for (std::size_t k = m; k-- > 0;) {
        const double scaled = static_cast<double>(m - k) * unadjusted[order[k]];
        running = std::min(running, scaled);
        out.hochberg[order[k]] = running;
    }
    return out;
}

FriedmanResult friedman_with_posthoc(const std::vector<std::vector<double>>& results,
                                     std::size_t control)
{
    const std::size_t problems = results.size();
    if (problems < 2)
        throw InsufficientDataError(
            fmt::format("friedman: need at least 2 problems, got {}", problems));
    const std::size_t algorithms = results.front().size();
    if (algorithms < 2)
        throw ContractViolation(
            fmt::format("friedman: need at least 2 algorithms, got {}", algorithms));
    if (control >= algorithms)
        throw ContractViolation(fmt::format("friedman: control index {} out of range", control));

    FriedmanResult res;
    res.control = control;
    res.problems = problems;
    res.average_ranks.assign(algorithms, 0.0);
    for (const auto& row : results) {
        if (row.size() != algorithms)
            throw ContractViolation("friedman: ragged result matrix");
        const auto r = average_ranks(row);
        for (std::size_t j = 0; j < algorithms; ++j)
            res.average_ranks[j] += r[j];
    }
    const auto n = static_cast<double>(problems);
    const auto a = static_cast<double>(algorithms);
    for (auto& r : res.average_ranks)
        r /= n;

    double sum_sq = 0.0;
    for (double r : res.average_ranks)
        sum_sq += r * r;
    res.chi_square = 12.0 * n / (a * (a + 1.0)) * (sum_sq - a * (a + 1.0) * (a + 1.0) / 4.0);
    res.chi_square = std::max(0.0, res.chi_square);
    res.omnibus_p = res.chi_square > 0.0 ? boost::math::gamma_q((a - 1.0) / 2.0, res.chi_square / 2.0)
                                         : 1.0;

    const double se = std::sqrt(a * (a + 1.0) / (6.0 * n));
    for (std::size_t j = 0; j < algorithms; ++j) {
        if (j == control)
            continue;
        const double z = (res.average_ranks[j] - res.average_ranks[control]) / se;
        res.compared.push_back(j);
        res.z.push_back(z);
        res.unadjusted.push_back(two_sided_normal_p(z));
    }
    res.adjusted = adjust_p_values(res.unadjusted);
    return res;
}

} // namespace asbso
