#pragma once

#include "asbso/core.hpp"

#include <deque>
#include <stdexcept>

namespace asbso::testing {

// Replays scripted draws; runs dry -> std::out_of_range.
class ScriptedSource final : public RandomSource {
public:
    std::deque<double> uniforms;
    std::deque<double> normals;
    std::deque<std::size_t> integers;

    double uniform() override { return pop(uniforms, "uniform"); }
    double normal() override { return pop(normals, "normal"); }
    std::size_t below(std::size_t n) override
    {
        const auto v = pop(integers, "below");
        if (v >= n)
            throw std::out_of_range("scripted below() value out of range");
        return v;
    }

private:
    template <class T>
    static T pop(std::deque<T>& q, const char* what)
    {
        if (q.empty())
            throw std::out_of_range(std::string("scripted source ran out of ") + what);
        T v = q.front();
        q.pop_front();
        return v;
    }
};

inline ObjectiveFunction sphere_objective(std::size_t dim, double half = 100.0)
{
    return {"sphere", Bounds::cube(dim, -half, half), [](std::span<const double> x) {
                double s = 0.0;
                for (double v : x)
                    s += v * v;
                return s;
            }};
}

} // namespace asbso::testing
