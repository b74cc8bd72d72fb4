#pragma once

// Classical test functions wrapped in seeded shift/rotation transforms:
//   f(x) = base(Q (x - o)) + bias
// Every base function has its minimum 0 at z = 0, so f(o) = bias.

#include "asbso/core.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace asbso {

enum class BaseFunction {
    sphere,
    rosenbrock,
    rastrigin,
    ackley,
    griewank,
    schwefel_226,
    weierstrass,
};

enum class Transform {
    identity,
    shifted_rotated,
};

inline constexpr std::uint64_t default_catalog_seed = 20190314;

std::string_view to_string(BaseFunction f);
std::string_view to_string(Transform t);
/// Throw ConfigError on unknown names.
BaseFunction parse_base_function(std::string_view name);
Transform parse_transform(std::string_view name);
const std::vector<BaseFunction>& all_base_functions();

/// Unshifted, unrotated function value. Constants: ackley a=20, b=0.2, c=2*pi;
/// rastrigin A=10; weierstrass a=0.5, b=3, k_max=20. Rosenbrock and Schwefel 2.26
/// are translated internally so that their minimum sits at the origin.
double evaluate_base(BaseFunction f, std::span<const double> z);

struct BenchmarkSpec {
    BaseFunction base = BaseFunction::sphere;
    Transform transform = Transform::identity;
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    Vector shift;
    Eigen::MatrixXd rotation;
    double bias = 0.0;
    Bounds bounds = Bounds::cube(1, -100.0, 100.0);

    /// e.g. "rastrigin" or "rastrigin_sr".
    std::string label() const;
    /// The constructed global minimizer (the shift vector).
    const Vector& optimum() const noexcept { return shift; }
};

struct Benchmark {
    std::shared_ptr<const BenchmarkSpec> spec;
    ObjectiveFunction objective;
};

/// [-500, 500]^D for Schwefel 2.26, [-100, 100]^D otherwise.
Bounds default_bounds(BaseFunction f, std::size_t dim);

/// Bias applied to the shifted-rotated variant (identity uses 0).
double default_bias(BaseFunction f);

/// Builds the function. The identity transform uses Q = I, o = 0, bias = 0 and
/// ignores the seed. The shifted-rotated transform draws o uniformly from the
/// central 80% of the box and Q from the QR factorization of a seeded
/// Gaussian matrix.
Benchmark make_benchmark(BaseFunction f, std::size_t dim, Transform transform, std::uint64_t seed);
Benchmark make_benchmark(std::string_view name, std::size_t dim, Transform transform,
                         std::uint64_t seed);

/// Transform seed a catalog assigns to (function, dim).
std::uint64_t catalog_transform_seed(std::uint64_t catalog_seed, BaseFunction f, std::size_t dim);

/// Every base function at D in {10, 30}, identity and shifted-rotated (28 entries).
std::vector<Benchmark> batch_catalog(std::uint64_t catalog_seed = default_catalog_seed);

/// JSON manifest with name, transform, dim, seed, bounds and bias per entry;
/// make_benchmark on those fields rebuilds each function bit-exactly.
std::string catalog_manifest_json(const std::vector<Benchmark>& catalog);
std::vector<Benchmark> catalog_from_manifest_json(std::string_view text);

} // namespace asbso
