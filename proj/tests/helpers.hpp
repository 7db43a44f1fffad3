#pragma once

#include <cmath>
#include <vector>

#include "burstrec/forcing.hpp"
#include "burstrec/grid.hpp"
#include "burstrec/semigroup.hpp"
#include "burstrec/sensing.hpp"

namespace helpers {

using namespace burstrec;

inline SpatialGrid unit_grid(std::size_t points = 513) { return SpatialGrid(0.0, 1.0, points); }

inline Semigroup decay_semigroup(const SpatialGrid& g) {
    return Semigroup::multiplication(GridFunction::sample(g, [](double x) { return -x * x; }));
}

inline std::vector<GridFunction> monomial_samplers(const SpatialGrid& g) {
    return {GridFunction::constant(g, 1.0), GridFunction::sample(g, [](double x) { return x; }),
            GridFunction::sample(g, [](double x) { return x * x; })};
}

inline GridFunction sine_state(const SpatialGrid& g) {
    return GridFunction::sample(g, [](double x) { return std::sin(x); });
}

/// Three-burst reference setup: decay semigroup on [0, 1], bursts at
/// 0.25, 1.5, 2.75 with shapes 0.35*sin(x), cos(x), 1 + sin(x).
inline Scenario three_burst_scenario(const SpatialGrid& g, BackgroundSource bg) {
    Scenario sc;
    sc.grid = g;
    sc.semigroup = decay_semigroup(g);
    sc.u0 = sine_state(g);
    sc.background = std::move(bg);
    sc.gamma = 1.0;
    sc.t_max = 4.0;
    sc.bursts.push_back(0.25, GridFunction::sample(g, [](double x) { return 0.35 * std::sin(x); }));
    sc.bursts.push_back(1.5, GridFunction::sample(g, [](double x) { return std::cos(x); }));
    sc.bursts.push_back(2.75, GridFunction::sample(g, [](double x) { return 1.0 + std::sin(x); }));
    return sc;
}

inline std::vector<double> norms_of(const std::vector<GridFunction>& fs) {
    std::vector<double> out;
    out.reserve(fs.size());
    for (const GridFunction& f : fs) out.push_back(norm(f));
    return out;
}

}  // namespace helpers
