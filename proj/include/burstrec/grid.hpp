#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace burstrec {

using complex = std::complex<double>;

/// Thrown when two grid functions living on different grids are combined.
struct grid_mismatch_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown for operations a semigroup kind does not support.
struct unsupported_operation_error : std::logic_error {
    using std::logic_error::logic_error;
};

/// Thrown when a scenario or run configuration is inconsistent.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform grid on [x_min, x_max] with `points` nodes.
struct SpatialGrid {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t points = 1025;

    SpatialGrid() = default;
    SpatialGrid(double lo, double hi, std::size_t n) : x_min(lo), x_max(hi), points(n) {
        if (!(hi > lo)) throw std::invalid_argument("SpatialGrid: x_max must exceed x_min");
        if (n < 2) throw std::invalid_argument("SpatialGrid: need at least 2 points");
    }

    double spacing() const { return (x_max - x_min) / static_cast<double>(points - 1); }
    double node(std::size_t i) const { return x_min + spacing() * static_cast<double>(i); }

    friend bool operator==(const SpatialGrid& a, const SpatialGrid& b) {
        return a.points == b.points && a.x_min == b.x_min && a.x_max == b.x_max;
    }
    friend bool operator!=(const SpatialGrid& a, const SpatialGrid& b) { return !(a == b); }
};

/// Complex-valued function sampled on the nodes of a SpatialGrid.
struct GridFunction {
    SpatialGrid grid;
    std::vector<complex> values;

    GridFunction() = default;
    explicit GridFunction(const SpatialGrid& g) : grid(g), values(g.points, complex(0.0, 0.0)) {}

    template <typename F>
    static GridFunction sample(const SpatialGrid& g, F&& f) {
        GridFunction out(g);
        for (std::size_t i = 0; i < g.points; ++i) out.values[i] = complex(f(g.node(i)));
        return out;
    }

    static GridFunction zeros(const SpatialGrid& g) { return GridFunction(g); }

    static GridFunction constant(const SpatialGrid& g, complex c) {
        GridFunction out(g);
        std::fill(out.values.begin(), out.values.end(), c);
        return out;
    }

    std::size_t size() const { return values.size(); }
    complex& operator[](std::size_t i) { return values[i]; }
    const complex& operator[](std::size_t i) const { return values[i]; }
};

inline void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what) {
    if (a.grid != b.grid) throw grid_mismatch_error(std::string(what) + ": grid mismatch");
}

/// Trapezoid inner product <a, b> = integral of a * conj(b); conjugate-linear in b.
inline complex inner_product(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "inner_product");
    const std::size_t n = a.size();
    complex acc(0.0, 0.0);
    acc += 0.5 * a.values[0] * std::conj(b.values[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) acc += a.values[i] * std::conj(b.values[i]);
    acc += 0.5 * a.values[n - 1] * std::conj(b.values[n - 1]);
    return acc * a.grid.spacing();
}

inline double norm(const GridFunction& a) {
    const std::size_t n = a.size();
    double acc = 0.5 * std::norm(a.values[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) acc += std::norm(a.values[i]);
    acc += 0.5 * std::norm(a.values[n - 1]);
    return std::sqrt(acc * a.grid.spacing());
}

/// alpha * a + b
inline GridFunction axpy(complex alpha, const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "axpy");
    GridFunction out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = alpha * a.values[i] + b.values[i];
    return out;
}

/// Nodewise product a * b.
inline GridFunction pointwise_mul(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "pointwise_mul");
    GridFunction out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a.values[i] * b.values[i];
    return out;
}

inline bool all_finite(const GridFunction& a) {
    for (const complex& v : a.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace burstrec
