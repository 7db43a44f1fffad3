#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "burstrec/grid.hpp"
#include "burstrec/rng.hpp"

namespace burstrec {

/// Impulsive forcing: shapes f_j fired at strictly increasing times t_j > 0.
struct BurstTrain {
    std::vector<double> times;
    std::vector<GridFunction> shapes;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }

    void push_back(double t, GridFunction f) {
        times.push_back(t);
        shapes.push_back(std::move(f));
    }
};

enum class BackgroundKind { CosProduct, ExpDecay, Constant, Custom };

/// Smooth forcing term eta(t). CosProduct is eta(t)(x) = cos(L*t*x) + C,
/// ExpDecay is eta(t)(x) = x*exp(-L*t) + C, Constant is the fixed value C.
/// L is the declared Lipschitz constant in t; both built-in families satisfy
/// it on [0, 1] since ||x|| <= 1 there.
struct BackgroundSource {
    BackgroundKind kind = BackgroundKind::Constant;
    double L = 0.0;
    double C = 0.0;
    std::function<GridFunction(double)> fn;

    static BackgroundSource cos_product(double L, double C = 1.0) {
        if (L < 0.0) throw std::invalid_argument("BackgroundSource: L must be nonnegative");
        return BackgroundSource{BackgroundKind::CosProduct, L, C, {}};
    }
    static BackgroundSource exp_decay(double L, double C = 1.0) {
        if (L < 0.0) throw std::invalid_argument("BackgroundSource: L must be nonnegative");
        return BackgroundSource{BackgroundKind::ExpDecay, L, C, {}};
    }
    static BackgroundSource constant(double C) {
        return BackgroundSource{BackgroundKind::Constant, 0.0, C, {}};
    }
    static BackgroundSource custom(double L, std::function<GridFunction(double)> fn) {
        if (L < 0.0) throw std::invalid_argument("BackgroundSource: L must be nonnegative");
        if (!fn) throw std::invalid_argument("BackgroundSource: custom source needs a callable");
        return BackgroundSource{BackgroundKind::Custom, L, 0.0, std::move(fn)};
    }

    bool is_zero() const { return kind == BackgroundKind::Constant && C == 0.0; }
};

inline GridFunction eval_background(const BackgroundSource& bg, double t, const SpatialGrid& grid) {
    switch (bg.kind) {
        case BackgroundKind::CosProduct:
            return GridFunction::sample(grid, [&](double x) { return std::cos(bg.L * t * x) + bg.C; });
        case BackgroundKind::ExpDecay:
            return GridFunction::sample(grid, [&](double x) { return x * std::exp(-bg.L * t) + bg.C; });
        case BackgroundKind::Constant:
            return GridFunction::constant(grid, complex(bg.C, 0.0));
        case BackgroundKind::Custom: {
            GridFunction out = bg.fn(t);
            if (out.grid != grid) throw grid_mismatch_error("eval_background: custom source grid mismatch");
            return out;
        }
    }
    throw std::logic_error("eval_background: unreachable");
}

/// Empirical Lipschitz constant of t -> eta(t) on [0, t_max], measured over
/// `samples` consecutive pairs. Compare against the declared L.
inline double verify_lipschitz(const BackgroundSource& bg, const SpatialGrid& grid, double t_max,
                               int samples = 256) {
    if (samples < 1) throw std::invalid_argument("verify_lipschitz: samples must be >= 1");
    if (!(t_max > 0.0)) throw std::domain_error("verify_lipschitz: t_max must be positive");
    double worst = 0.0;
    const double dt = t_max / samples;
    GridFunction prev = eval_background(bg, 0.0, grid);
    for (int i = 1; i <= samples; ++i) {
        GridFunction cur = eval_background(bg, dt * i, grid);
        GridFunction diff = axpy(complex(-1.0, 0.0), prev, cur);
        worst = std::max(worst, norm(diff) / dt);
        prev = std::move(cur);
    }
    return worst;
}

/// Random burst train: `count` times in [t_lo, t_hi] with pairwise gaps
/// strictly above gamma, shapes drawn from span{1, sin x, cos x} with
/// coefficients in [-1, 1] (resampled while the norm is below 0.1).
inline BurstTrain make_random_burst_train(const SpatialGrid& grid, std::size_t count, double gamma,
                                          double t_lo, double t_hi, std::uint64_t seed) {
    if (count == 0) return {};
    if (!(t_lo > 0.0)) throw std::domain_error("make_random_burst_train: t_lo must be positive");
    const double sep = gamma * 1.01;
    const double span = t_hi - t_lo - sep * static_cast<double>(count - 1);
    if (span < 0.0)
        throw std::invalid_argument("make_random_burst_train: window too small for count at this gamma");
    Uniform01 rng(derive_seed(seed, 0));
    std::vector<double> offsets(count);
    for (double& o : offsets) o = span * rng.next();
    std::sort(offsets.begin(), offsets.end());
    BurstTrain train;
    for (std::size_t j = 0; j < count; ++j) {
        const double t = t_lo + offsets[j] + sep * static_cast<double>(j);
        GridFunction shape(grid);
        do {
            const double c0 = rng.symmetric(), c1 = rng.symmetric(), c2 = rng.symmetric();
            shape = GridFunction::sample(
                grid, [&](double x) { return c0 + c1 * std::sin(x) + c2 * std::cos(x); });
        } while (norm(shape) < 0.1);
        train.push_back(t, std::move(shape));
    }
    return train;
}

}  // namespace burstrec
