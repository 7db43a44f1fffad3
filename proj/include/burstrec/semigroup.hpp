#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "burstrec/grid.hpp"

namespace burstrec {

enum class SemigroupKind { Multiplication, Translation };

/// Forward evolution operator T(t). Two concrete families:
///  - Multiplication: (T(t)u)(x) = exp(t*a(x)) u(x) for a real-valued symbol a,
///    self-adjoint, with A*g = a*g.
///  - Translation: (T(t)u)(x) = u(x - t) with zero fill outside the domain,
///    adjoint (T*(t)g)(x) = g(x + t). Shifts must land on grid nodes.
struct Semigroup {
    SemigroupKind kind = SemigroupKind::Multiplication;
    GridFunction symbol;

    static Semigroup multiplication(GridFunction a) {
        for (const complex& v : a.values)
            if (v.imag() != 0.0)
                throw std::invalid_argument("Semigroup: multiplication symbol must be real-valued");
        Semigroup s;
        s.kind = SemigroupKind::Multiplication;
        s.symbol = std::move(a);
        return s;
    }

    static Semigroup translation() {
        Semigroup s;
        s.kind = SemigroupKind::Translation;
        return s;
    }
};

namespace detail {

inline std::ptrdiff_t shift_nodes(double t, double h) {
    double steps = t / h;
    double r = std::round(steps);
    if (std::abs(steps - r) > 1e-9 * std::max(1.0, std::abs(steps)))
        throw std::domain_error("translation: shift is not a whole number of grid nodes");
    return static_cast<std::ptrdiff_t>(r);
}

}  // namespace detail

/// exp(t*a) as a grid function (multiplication semigroups only).
inline GridFunction exponential_factor(const Semigroup& S, double t) {
    if (S.kind != SemigroupKind::Multiplication)
        throw unsupported_operation_error("exponential_factor: multiplication semigroups only");
    GridFunction out(S.symbol.grid);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::exp(t * S.symbol[i].real());
    return out;
}

inline GridFunction apply_semigroup(const Semigroup& S, double t, const GridFunction& u) {
    if (t < 0.0) throw std::domain_error("apply_semigroup: t must be nonnegative");
    if (S.kind == SemigroupKind::Multiplication) {
        require_same_grid(S.symbol, u, "apply_semigroup");
        GridFunction out(u.grid);
        for (std::size_t i = 0; i < u.size(); ++i)
            out[i] = std::exp(t * S.symbol[i].real()) * u[i];
        return out;
    }
    const std::ptrdiff_t k = detail::shift_nodes(t, u.grid.spacing());
    GridFunction out(u.grid);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
    for (std::ptrdiff_t i = k; i < n; ++i) out[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i - k)];
    return out;
}

inline GridFunction apply_adjoint_semigroup(const Semigroup& S, double t, const GridFunction& g) {
    if (t < 0.0) throw std::domain_error("apply_adjoint_semigroup: t must be nonnegative");
    if (S.kind == SemigroupKind::Multiplication) return apply_semigroup(S, t, g);
    const std::ptrdiff_t k = detail::shift_nodes(t, g.grid.spacing());
    GridFunction out(g.grid);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(g.size());
    for (std::ptrdiff_t i = 0; i + k < n; ++i) out[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i + k)];
    return out;
}

/// A*g. Defined for multiplication semigroups (A* = A = multiplication by a).
inline GridFunction apply_generator_adjoint(const Semigroup& S, const GridFunction& g) {
    if (S.kind != SemigroupKind::Multiplication)
        throw unsupported_operation_error("apply_generator_adjoint: multiplication semigroups only");
    require_same_grid(S.symbol, g, "apply_generator_adjoint");
    GridFunction out(g.grid);
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = S.symbol[i].real() * g[i];
    return out;
}

/// Bound C with ||T(t)|| <= C for 0 <= t <= beta.
inline double semigroup_norm_bound(const Semigroup& S, double beta) {
    if (S.kind == SemigroupKind::Translation) return 1.0;
    double amax = S.symbol[0].real();
    for (const complex& v : S.symbol.values) amax = std::max(amax, v.real());
    return std::exp(beta * std::max(0.0, amax));
}

/// Numerical estimate of D(beta) = sup over alpha in [0, beta] of the worst
/// relative perturbation ||(T*(alpha) - I)g|| / ||g|| across the samplers.
/// The sup is scanned on alpha_steps+1 uniform points; translation shifts are
/// snapped to grid nodes.
inline double estimate_D(const Semigroup& S, double beta, const std::vector<GridFunction>& samplers,
                         int alpha_steps = 64) {
    if (beta <= 0.0) throw std::domain_error("estimate_D: beta must be positive");
    if (alpha_steps < 1) throw std::invalid_argument("estimate_D: alpha_steps must be >= 1");
    if (samplers.empty()) throw std::invalid_argument("estimate_D: need at least one sampler");
    double best = 0.0;
    for (const GridFunction& g : samplers) {
        const double ng = norm(g);
        if (ng == 0.0) throw std::invalid_argument("estimate_D: sampler has zero norm");
        for (int s = 1; s <= alpha_steps; ++s) {
            double alpha = beta * static_cast<double>(s) / static_cast<double>(alpha_steps);
            if (S.kind == SemigroupKind::Translation) {
                const double h = g.grid.spacing();
                alpha = std::round(alpha / h) * h;
                if (alpha <= 0.0) continue;
            }
            GridFunction moved = apply_adjoint_semigroup(S, alpha, g);
            GridFunction diff = axpy(complex(-1.0, 0.0), g, moved);
            best = std::max(best, norm(diff) / ng);
        }
    }
    return best;
}

}  // namespace burstrec
