#include "asbso/benchmarks.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

namespace asbso {

namespace {

using std::numbers::pi;

constexpr std::array base_names{
    std::pair{BaseFunction::sphere, std::string_view{"sphere"}},
    std::pair{BaseFunction::rosenbrock, std::string_view{"rosenbrock"}},
    std::pair{BaseFunction::rastrigin, std::string_view{"rastrigin"}},
    std::pair{BaseFunction::ackley, std::string_view{"ackley"}},
    std::pair{BaseFunction::griewank, std::string_view{"griewank"}},
    std::pair{BaseFunction::schwefel_226, std::string_view{"schwefel_226"}},
    std::pair{BaseFunction::weierstrass, std::string_view{"weierstrass"}},
};

// Minimizer of y * sin(sqrt(|y|)) per coordinate.
constexpr double schwefel_offset = 420.9687462275036;
constexpr int weierstrass_kmax = 20;

double sphere(std::span<const double> z)
{
    double s = 0.0;
    for (double v : z)
        s += v * v;
    return s;
}

double rosenbrock(std::span<const double> z)
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i] + 1.0;
        const double b = z[i + 1] + 1.0;
        const double t = b - a * a;
        s += 100.0 * t * t + (a - 1.0) * (a - 1.0);
    }
    return s;
}

double rastrigin(std::span<const double> z)
{
    double s = 0.0;
    for (double v : z)
        s += v * v - 10.0 * std::cos(2.0 * pi * v) + 10.0;
    return s;
}

double ackley(std::span<const double> z)
{
    const double d = static_cast<double>(z.size());
    double sq = 0.0;
    double cs = 0.0;
    for (double v : z) {
        sq += v * v;
        cs += std::cos(2.0 * pi * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 + std::numbers::e;
}

double griewank(std::span<const double> z)
{
    double sq = 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        sq += z[i] * z[i];
        prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sq / 4000.0 - prod + 1.0;
}

double schwefel_226(std::span<const double> z)
{
    // Outside [-500, 500] the argument folds back into the box and pays a
    // quadratic penalty, so the origin stays the global minimum.
    static const double at_optimum = schwefel_offset * std::sin(std::sqrt(schwefel_offset));
    const double penalty_scale = 10000.0 * static_cast<double>(z.size());
    double s = 0.0;
    for (double v : z) {
        const double y = v + schwefel_offset;
        double term = 0.0;
        if (y > 500.0) {
            const double folded = 500.0 - std::fmod(y, 500.0);
            term = folded * std::sin(std::sqrt(folded)) - (y - 500.0) * (y - 500.0) / penalty_scale;
        } else if (y < -500.0) {
            const double folded = std::fmod(-y, 500.0) - 500.0;
            term = folded * std::sin(std::sqrt(-folded)) - (y + 500.0) * (y + 500.0) / penalty_scale;
        } else {
            term = y * std::sin(std::sqrt(std::abs(y)));
        }
        s += at_optimum - term;
    }
    return s;
}

double weierstrass(std::span<const double> z)
{
    double s = 0.0;
    for (double v : z) {
        double ak = 1.0;
        double bk = 1.0;
        for (int k = 0; k <= weierstrass_kmax; ++k) {
            const double freq = 2.0 * pi * bk;
            s += ak * (std::cos(freq * (v + 0.5)) - std::cos(freq * 0.5));
            ak *= 0.5;
            bk *= 3.0;
        }
    }
    return s;
}

Eigen::MatrixXd random_rotation(std::size_t dim, std::uint64_t seed)
{
    std::mt19937_64 engine(mix_seed(seed ^ 0x5eed0f0a7a710aULL));
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd g(dim, dim);
    for (Eigen::Index c = 0; c < g.cols(); ++c)
        for (Eigen::Index r = 0; r < g.rows(); ++r)
            g(r, c) = gauss(engine);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    // Sign-fix against R's diagonal so Q is Haar-distributed and unique.
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < q.cols(); ++i)
        if (r(i, i) < 0.0)
            q.col(i) *= -1.0;
    return q;
}

Vector random_shift(const Bounds& bounds, std::uint64_t seed)
{
    std::mt19937_64 engine(mix_seed(seed ^ 0x0ff5e7ULL));
    Vector o(bounds.dim());
    for (std::size_t i = 0; i < o.size(); ++i) {
        const double u = (static_cast<double>(engine() >> 11) + 0.5) * 0x1p-53;
        o[i] = bounds.lower()[i] + (0.1 + 0.8 * u) * bounds.width(i);
    }
    return o;
}

} // namespace

std::string_view to_string(BaseFunction f)
{
    for (const auto& [fn, name] : base_names)
        if (fn == f)
            return name;
    return "unknown";
}

std::string_view to_string(Transform t)
{
    return t == Transform::identity ? "identity" : "shifted_rotated";
}

BaseFunction parse_base_function(std::string_view name)
{
    for (const auto& [fn, n] : base_names)
        if (n == name)
            return fn;
    throw ConfigError(fmt::format("unknown benchmark function '{}'", name));
}

Transform parse_transform(std::string_view name)
{
    if (name == "identity")
        return Transform::identity;
    if (name == "shifted_rotated")
        return Transform::shifted_rotated;
    throw ConfigError(fmt::format("unknown transform '{}'", name));
}

const std::vector<BaseFunction>& all_base_functions()
{
    static const std::vector<BaseFunction> fns = [] {
        std::vector<BaseFunction> out;
        for (const auto& [fn, name] : base_names)
            out.push_back(fn);
        return out;
    }();
    return fns;
}

double evaluate_base(BaseFunction f, std::span<const double> z)
{
    switch (f) {
    case BaseFunction::sphere: return sphere(z);
    case BaseFunction::rosenbrock: return rosenbrock(z);
    case BaseFunction::rastrigin: return rastrigin(z);
    case BaseFunction::ackley: return ackley(z);
    case BaseFunction::griewank: return griewank(z);
    case BaseFunction::schwefel_226: return schwefel_226(z);
    case BaseFunction::weierstrass: return weierstrass(z);
    }
    throw ContractViolation("evaluate_base: unknown function");
}

std::string BenchmarkSpec::label() const
{
    std::string out(to_string(base));
    if (transform == Transform::shifted_rotated)
        out += "_sr";
    return out;
}

Bounds default_bounds(BaseFunction f, std::size_t dim)
{
    const double half = f == BaseFunction::schwefel_226 ? 500.0 : 100.0;
    return Bounds::cube(dim, -half, half);
}

double default_bias(BaseFunction f) { return 100.0 * (static_cast<double>(f) + 1.0); }

Benchmark make_benchmark(BaseFunction f, std::size_t dim, Transform transform, std::uint64_t seed)
{
    if (dim < 1)
        throw ConfigError("benchmark: dimension must be at least 1");

    auto spec = std::make_shared<BenchmarkSpec>();
    spec->base = f;
    spec->transform = transform;
    spec->dim = dim;
    spec->bounds = default_bounds(f, dim);
    if (transform == Transform::identity) {
        spec->seed = 0;
        spec->shift.assign(dim, 0.0);
        spec->rotation = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                                   static_cast<Eigen::Index>(dim));
        spec->bias = 0.0;
    } else {
        spec->seed = seed;
        spec->shift = random_shift(spec->bounds, seed);
        spec->rotation = random_rotation(dim, seed);
        spec->bias = default_bias(f);
    }

    std::shared_ptr<const BenchmarkSpec> frozen = spec;
    ObjectiveFunction objective{
        frozen->label(), frozen->bounds, [frozen](std::span<const double> x) {
            const auto n = static_cast<Eigen::Index>(frozen->dim);
            Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
            Eigen::Map<const Eigen::VectorXd> ov(frozen->shift.data(), n);
            if (frozen->transform == Transform::identity)
                return evaluate_base(frozen->base, x);
            const Eigen::VectorXd z = frozen->rotation * (xv - ov);
            return evaluate_base(frozen->base, std::span<const double>(z.data(), frozen->dim)) +
                   frozen->bias;
        }};
    return Benchmark{std::move(frozen), std::move(objective)};
}

Benchmark make_benchmark(std::string_view name, std::size_t dim, Transform transform,
                         std::uint64_t seed)
{
    return make_benchmark(parse_base_function(name), dim, transform, seed);
}

std::uint64_t catalog_transform_seed(std::uint64_t catalog_seed, BaseFunction f, std::size_t dim)
{
    return mix_seed(mix_seed(catalog_seed) ^ (static_cast<std::uint64_t>(f) << 32) ^ dim);
}

std::vector<Benchmark> batch_catalog(std::uint64_t catalog_seed)
{
    std::vector<Benchmark> out;
    for (const std::size_t dim : {10, 30})
        for (const auto f : all_base_functions())
            for (const auto t : {Transform::identity, Transform::shifted_rotated})
                out.push_back(make_benchmark(f, dim, t, catalog_transform_seed(catalog_seed, f, dim)));
    return out;
}

std::string catalog_manifest_json(const std::vector<Benchmark>& catalog)
{
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& b : catalog) {
        const auto& s = *b.spec;
        entries.push_back({
            {"label", s.label()},
            {"name", to_string(s.base)},
            {"transform", to_string(s.transform)},
            {"dim", s.dim},
            {"seed", s.seed},
            {"lower", s.bounds.lower().front()},
            {"upper", s.bounds.upper().front()},
            {"bias", s.bias},
        });
    }
    nlohmann::ordered_json doc = {{"functions", entries}};
    return doc.dump(2) + "\n";
}

std::vector<Benchmark> catalog_from_manifest_json(std::string_view text)
{
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.contains("functions") || !doc["functions"].is_array())
        throw ConfigError("catalog manifest: expected an object with a 'functions' array");
    std::vector<Benchmark> out;
    for (const auto& e : doc["functions"]) {
        try {
            out.push_back(make_benchmark(e.at("name").get<std::string>(),
                                         e.at("dim").get<std::size_t>(),
                                         parse_transform(e.at("transform").get<std::string>()),
                                         e.at("seed").get<std::uint64_t>()));
        } catch (const nlohmann::json::exception& ex) {
            throw ConfigError(fmt::format("catalog manifest: {}", ex.what()));
        }
    }
    return out;
}

} // namespace asbso
