#include "asbso/core.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace asbso {

Bounds::Bounds(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper))
{
    if (lower_.empty())
        throw ConfigError("bounds: dimension must be at least 1");
    if (lower_.size() != upper_.size())
        throw ConfigError(fmt::format("bounds: lower has {} entries, upper has {}",
                                      lower_.size(), upper_.size()));
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(lower_[i] < upper_[i]))
            throw ConfigError(fmt::format("bounds: lower[{}]={} is not below upper[{}]={}", i,
                                          lower_[i], i, upper_[i]));
    }
}

Bounds Bounds::cube(std::size_t dim, double lower, double upper)
{
    return Bounds(Vector(dim, lower), Vector(dim, upper));
}

bool Bounds::contains(std::span<const double> x) const
{
    if (x.size() != dim())
        return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < lower_[i] || x[i] > upper_[i])
            return false;
    return true;
}

std::size_t Population::best_index() const
{
    if (members.empty())
        throw ContractViolation("best_index on empty population");
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i].fitness < members[best].fitness)
            best = i;
    return best;
}

std::vector<std::size_t> Population::cluster_members(std::size_t c) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cluster_of.size(); ++i)
        if (cluster_of[i] == c)
            out.push_back(i);
    return out;
}

std::string_view to_string(StreamLabel label)
{
    switch (label) {
    case StreamLabel::init: return "init";
    case StreamLabel::clustering: return "clustering";
    case StreamLabel::selection: return "selection";
    case StreamLabel::strategy: return "strategy";
    case StreamLabel::mutation: return "mutation";
    case StreamLabel::replacement: return "replacement";
    }
    return "unknown";
}

std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, StreamLabel label)
    : seed_(seed),
      label_(label),
      engine_(mix_seed(mix_seed(seed) ^ (static_cast<std::uint64_t>(label) + 1) * 0xd1b54a32d192ed03ULL))
{
}

double RngStream::uniform()
{
    // 53 random bits, offset by half a ulp so 0 and 1 are never produced.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
}

double RngStream::normal() { return gauss_(engine_); }

std::size_t RngStream::below(std::size_t n)
{
    if (n == 0)
        throw ContractViolation("RngStream::below(0)");
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
}

void clamp_in_place(std::span<double> position, const Bounds& bounds)
{
    if (position.size() != bounds.dim())
        throw ContractViolation(fmt::format("clamp_to_bounds: position has {} entries, bounds {}",
                                            position.size(), bounds.dim()));
    const auto& lo = bounds.lower();
    const auto& hi = bounds.upper();
    for (std::size_t i = 0; i < position.size(); ++i)
        position[i] = std::min(hi[i], std::max(lo[i], position[i]));
}

Vector clamp_to_bounds(std::span<const double> position, const Bounds& bounds)
{
    Vector out(position.begin(), position.end());
    clamp_in_place(out, bounds);
    return out;
}

Individual evaluate_individual(Vector x, const ObjectiveFunction& f, std::size_t& evaluations)
{
    const double value = f.evaluate(x);
    ++evaluations;
    if (!std::isfinite(value)) {
        throw EvaluationError(fmt::format("objective '{}' returned {} at x = ({:.17g})", f.name,
                                          value, fmt::join(x, ", ")));
    }
    return Individual{std::move(x), value};
}

Vector random_position(const Bounds& bounds, RandomSource& rng)
{
    Vector x(bounds.dim());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = bounds.lower()[i] + rng.uniform() * bounds.width(i);
    return x;
}

} // namespace asbso
