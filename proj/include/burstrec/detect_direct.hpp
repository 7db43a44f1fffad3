#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "burstrec/grid.hpp"
#include "burstrec/sensing.hpp"

namespace burstrec {

/// Residual firing rules. Proof thresholds both residual magnitudes with
/// K*(C*L*beta^2*||g|| + 4*sigma) and places the burst one interval after the
/// firing index. Pseudocode keeps the historical form: fire when the residual
/// clears K*C*L*beta^2*||g|| while the next one stays under C*L*beta^2*||g||,
/// placing the burst at the firing index. Both locate the same interval and
/// recover the same coefficient on clean data; the pseudocode form ignores
/// sigma, so it is only dependable when noise is negligible.
enum class DirectRule { Proof, Pseudocode };

struct DirectDetectorParams {
    double K = 2.0;
    double C = 1.0;
    double L = 0.0;
    double sigma = 0.0;
    double beta = 0.0;
    DirectRule rule = DirectRule::Proof;
    /// Relative floor (times ||g||) keeping thresholds positive when both L
    /// and sigma vanish.
    double noise_floor = 1e-9;
};

struct DetectionEvent {
    double t_est = 0.0;
    double window_start = 0.0;
    double window_end = 0.0;
    std::vector<complex> coeffs;
    std::vector<bool> fired;
};

/// Prediction residuals m[n+1] - mp[n] for one sampler, n = 0..n_max-1.
inline std::vector<complex> gamma_residuals(const DirectMeasurements& dm, std::size_t sampler) {
    if (sampler >= dm.m.size()) throw std::out_of_range("gamma_residuals: sampler index");
    std::vector<complex> out(dm.n_max);
    for (std::size_t n = 0; n < dm.n_max; ++n) out[n] = dm.m[sampler][n + 1] - dm.mp[sampler][n];
    return out;
}

/// Differenced residuals, n = 0..n_max-2. A burst in [m*beta, (m+1)*beta)
/// shows as +value at n = m-1 and -value at n = m.
inline std::vector<complex> gamma_differences(const DirectMeasurements& dm, std::size_t sampler) {
    std::vector<complex> g = gamma_residuals(dm, sampler);
    if (g.empty()) return {};
    std::vector<complex> out(g.size() - 1);
    for (std::size_t n = 0; n + 1 < g.size(); ++n) out[n] = g[n + 1] - g[n];
    return out;
}

/// Worst-case deviation of a recovered coefficient from the pairing of the
/// burst shape with the sampler.
inline double direct_coefficient_bound(const DirectDetectorParams& p, double d_beta, double r_sup,
                                       double f_norm, double g_norm) {
    return (p.K + 1.0) * p.C * p.L * p.beta * p.beta * g_norm + 4.0 * (p.K + 1.0) * p.sigma +
           d_beta * r_sup * f_norm;
}

inline std::vector<DetectionEvent> detect_direct(const DirectMeasurements& dm,
                                                 const DirectDetectorParams& p,
                                                 const std::vector<double>& sampler_norms,
                                                 double gamma) {
    if (sampler_norms.size() != dm.m.size())
        throw std::invalid_argument("detect_direct: one norm per sampler required");
    if (!(p.beta > 0.0)) throw config_error("detect_direct: beta must be positive");
    const std::size_t n_samp = sampler_norms.size();

    // Per interval index m: coefficient per sampler where the rule fired.
    std::map<std::size_t, std::pair<std::vector<complex>, std::vector<bool>>> hits;
    for (std::size_t s = 0; s < n_samp; ++s) {
        const double base = p.C * p.L * p.beta * p.beta * sampler_norms[s];
        const double floor = p.noise_floor * sampler_norms[s];
        std::vector<complex> gd = gamma_differences(dm, s);
        if (p.rule == DirectRule::Proof) {
            const double thresh = std::max(p.K * (base + 4.0 * p.sigma), floor);
            for (std::size_t n = 0; n + 1 < gd.size(); ++n) {
                if (std::abs(gd[n]) >= thresh && std::abs(gd[n + 1]) >= thresh) {
                    const std::size_t m = n + 1;
                    auto& slot = hits.try_emplace(m, std::vector<complex>(n_samp),
                                                  std::vector<bool>(n_samp, false))
                                     .first->second;
                    slot.first[s] = gd[n];
                    slot.second[s] = true;
                }
            }
        } else {
            const double hi = std::max(p.K * base, p.K * floor);
            const double lo = std::max(base, floor);
            for (std::size_t n = 0; n + 1 < gd.size(); ++n) {
                if (std::abs(gd[n]) >= hi && std::abs(gd[n + 1]) < lo) {
                    const std::size_t m = n;
                    auto& slot = hits.try_emplace(m, std::vector<complex>(n_samp),
                                                  std::vector<bool>(n_samp, false))
                                     .first->second;
                    slot.first[s] = -gd[n];
                    slot.second[s] = true;
                }
            }
        }
    }

    std::vector<DetectionEvent> events;
    for (const auto& [m, slot] : hits) {
        DetectionEvent ev;
        ev.window_start = static_cast<double>(m) * p.beta;
        ev.window_end = static_cast<double>(m + 1) * p.beta;
        ev.t_est = ev.window_start + 0.5 * p.beta;
        ev.coeffs = slot.first;
        ev.fired = slot.second;
        events.push_back(std::move(ev));
    }

    // Events closer than gamma/2 describe the same burst; keep the earliest.
    std::vector<DetectionEvent> merged;
    for (DetectionEvent& ev : events) {
        if (!merged.empty() && ev.t_est - merged.back().t_est < 0.5 * gamma) continue;
        merged.push_back(std::move(ev));
    }
    return merged;
}

}  // namespace burstrec
