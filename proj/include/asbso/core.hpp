#pragma once

// Shared domain types for the optimizer, benchmarks, and harness.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asbso {

using Vector = std::vector<double>;

/// Invalid configuration or manifest content.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The objective returned a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few usable observations for a statistical test.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Axis-aligned box [lower, upper] in D dimensions.
class Bounds {
public:
    Bounds(Vector lower, Vector upper);

    /// Same interval on every axis.
    static Bounds cube(std::size_t dim, double lower, double upper);

    std::size_t dim() const noexcept { return lower_.size(); }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }
    double width(std::size_t i) const { return upper_[i] - lower_[i]; }
    bool contains(std::span<const double> x) const;

private:
    Vector lower_;
    Vector upper_;
};

struct Individual {
    Vector position;
    double fitness = 0.0;
};

/// Population plus the clustering computed for the current iteration.
struct Population {
    std::vector<Individual> members;
    /// cluster_of[i] is the cluster holding member i.
    std::vector<std::size_t> cluster_of;
    /// centers[c] indexes the best member of cluster c.
    std::vector<std::size_t> centers;
    /// Point used as the center of cluster c when selecting a base. Starts as a
    /// copy of members[centers[c]]; the optimizer may overwrite it with a
    /// random point for the rest of the iteration.
    std::vector<Vector> center_positions;

    std::size_t size() const noexcept { return members.size(); }
    std::size_t cluster_count() const noexcept { return centers.size(); }
    std::size_t best_index() const;
    /// Member indices of cluster c, ascending.
    std::vector<std::size_t> cluster_members(std::size_t c) const;
};

enum class StreamLabel : std::uint8_t {
    init,
    clustering,
    selection,
    strategy,
    mutation,
    replacement,
};

std::string_view to_string(StreamLabel label);

/// Source of the random draws consumed by the optimizer. Tests substitute
/// scripted sources to force particular branches.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    /// Uniform on the open interval (0, 1).
    virtual double uniform() = 0;
    /// Standard normal.
    virtual double normal() = 0;
    /// Uniform integer in [0, n). Requires n > 0.
    virtual std::size_t below(std::size_t n) = 0;
};

/// Deterministic stream keyed by (seed, label). Each stochastic role in a run
/// owns its own stream so draws in one role never shift another role's sequence.
class RngStream final : public RandomSource {
public:
    RngStream(std::uint64_t seed, StreamLabel label);

    double uniform() override;
    double normal() override;
    std::size_t below(std::size_t n) override;

    std::uint64_t seed() const noexcept { return seed_; }
    StreamLabel label() const noexcept { return label_; }

private:
    std::uint64_t seed_;
    StreamLabel label_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> gauss_;
};

/// splitmix64 finalizer; used to derive stream and transform seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Pure objective over a bounded domain (minimization).
struct ObjectiveFunction {
    std::string name;
    Bounds bounds;
    std::function<double(std::span<const double>)> evaluate;

    std::size_t dim() const noexcept { return bounds.dim(); }
};

/// Componentwise clamp into the box; in-bounds coordinates pass through untouched.
Vector clamp_to_bounds(std::span<const double> position, const Bounds& bounds);
void clamp_in_place(std::span<double> position, const Bounds& bounds);

/// Evaluates f at x and bumps `evaluations` by one.
/// Throws EvaluationError naming the function and input when f(x) is not finite.
Individual evaluate_individual(Vector x, const ObjectiveFunction& f, std::size_t& evaluations);

/// Uniform random point in the box.
Vector random_position(const Bounds& bounds, RandomSource& rng);

} // namespace asbso
