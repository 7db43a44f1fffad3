#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "burstrec/detect_direct.hpp"
#include "burstrec/detect_prony.hpp"

namespace burstrec {

/// Residual detection places a burst inside one sampling interval; the
/// midpoint estimate is off by at most half of it.
inline double direct_time_bound(double beta) {
    if (!(beta > 0.0)) throw std::domain_error("direct_time_bound: beta must be positive");
    return 0.5 * beta;
}

/// Windowed detection time guarantee.
inline double prony_time_bound(double L, double beta, double sigma) {
    if (!(beta > 0.0)) throw std::domain_error("prony_time_bound: beta must be positive");
    const double st = sigma_tilde(sigma, beta);
    return (1.0 / 3.0) * (L * beta * beta + beta * std::min(1.0, std::sqrt(st)));
}

/// Relative coefficient guarantee for windowed detection.
inline double prony_coefficient_rel_bound(double L, double beta, double sigma) {
    if (!(beta > 0.0)) throw std::domain_error("prony_coefficient_rel_bound: beta must be positive");
    const double st = sigma_tilde(sigma, beta);
    return (5.0 / 3.0) * (L * beta + std::min(1.0, std::sqrt(st)));
}

/// Shape reconstruction guarantee: s_const is the stability constant of the
/// synthesis left inverse, r_sup the largest sampler norm.
inline double prony_shape_bound(double s_const, double r_sup, double L, double beta, double sigma,
                                double f_norm) {
    if (!(beta > 0.0)) throw std::domain_error("prony_shape_bound: beta must be positive");
    if (!(r_sup > 0.0)) throw std::domain_error("prony_shape_bound: sampler norm sup must be positive");
    const double st = sigma_tilde(sigma, beta);
    const double rel = (5.0 / 3.0) * f_norm * (L * beta + std::min(1.0, std::sqrt(st)));
    const double flat = (48.0 / detail::pi_const) * L * beta * beta + 12.0 * st / r_sup;
    return s_const * r_sup * std::max(rel, flat);
}

}  // namespace burstrec
