#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "burstrec/grid.hpp"
#include "burstrec/sensing.hpp"

namespace burstrec {

namespace detail {
inline constexpr double pi_const = 3.14159265358979323846;
}

inline double sigma_tilde(double sigma, double beta) {
    return 2.0 * (2.0 * detail::pi_const + beta) * sigma;
}

/// Detection threshold choices. Theorem uses the worst-case guarantee form,
/// which is safe but can dwarf moderate burst signals. Adaptive scales with
/// the actual perturbation caps (four times the clean-data deviation of a
/// differenced window) plus a small relative floor, so anything it fires on
/// is provably not background.
enum class PronyThreshold { Theorem, Adaptive };

struct PronyDetectorParams {
    double beta = 0.0;
    double L = 0.0;
    double sigma = 0.0;
    PronyThreshold threshold = PronyThreshold::Adaptive;
    double q_floor = 1e-6;

    double sigma_tilde_value() const { return sigma_tilde(sigma, beta); }

    double q(double g_norm) const {
        const double st = sigma_tilde_value();
        if (threshold == PronyThreshold::Theorem)
            return (64.0 / detail::pi_const) * beta * g_norm + 16.0 * std::max(st, std::sqrt(st));
        return (64.0 / detail::pi_const) * L * beta * beta * g_norm + 16.0 * st + q_floor * g_norm;
    }
};

/// Window combination m[k] + (-1)^ell * m[k+1]: the smooth part of the state
/// cancels here, leaving burst terms, Lipschitz drift, and noise.
inline complex gamma_kl(const FourierMeasurements& fm, std::size_t sampler, int k, std::size_t ell) {
    if (sampler >= fm.mhat.size()) throw std::out_of_range("gamma_kl: sampler index");
    if (k < 0 || k > 1) throw std::out_of_range("gamma_kl: k must be 0 or 1");
    if (ell < 1 || ell > fm.ell_max) throw std::out_of_range("gamma_kl: window index");
    const double sign = (ell % 2 == 0) ? 1.0 : -1.0;
    return fm.mhat[sampler][static_cast<std::size_t>(k)][ell - 1] +
           sign * fm.mhat[sampler][static_cast<std::size_t>(k + 1)][ell - 1];
}

/// Two-window difference gamma[k, ell] - gamma[k, ell+2]; background drift
/// largely cancels, bursts in either window survive.
inline complex delta_kl(const FourierMeasurements& fm, std::size_t sampler, int k, std::size_t ell) {
    if (ell + 2 > fm.ell_max) throw std::out_of_range("delta_kl: window index");
    return gamma_kl(fm, sampler, k, ell) - gamma_kl(fm, sampler, k, ell + 2);
}

struct PronyEvent {
    std::size_t window_ell = 0;  // resolved window index
    int anchor = 0;              // anchor index j the detection fired on
    double t_est = 0.0;
    std::vector<std::pair<std::size_t, double>> sampler_times;  // accepted (sampler, t(g))
    std::vector<complex> coeffs;                                // zero where not accepted
};

namespace detail {

struct AnchorDeltas {
    std::vector<complex> d0, d1;  // per sampler
};

inline AnchorDeltas anchor_deltas(const FourierMeasurements& fm, std::size_t j) {
    AnchorDeltas out;
    const std::size_t n = fm.mhat.size();
    out.d0.resize(n);
    out.d1.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        out.d0[s] = delta_kl(fm, s, 0, j);
        out.d1[s] = delta_kl(fm, s, 1, j);
    }
    return out;
}

inline bool anchor_fires(const AnchorDeltas& d, std::size_t s, int j_parity_sign, double q) {
    const double m0 = std::abs(d.d0[s]);
    const double m1 = std::abs(d.d1[s]);
    const double m2 = std::abs(d.d0[s] + static_cast<double>(j_parity_sign) * d.d1[s]);
    return std::min({m0, m1, m2}) >= q;
}

}  // namespace detail

/// Scan anchors j = ell .. min(ell+3, ell_max-4) for a burst. At the first
/// anchor where some sampler clears the threshold, the paired anchor j+2
/// resolves which of the two candidate windows holds the burst, each firing
/// sampler contributes a time estimate (kept when it lands within 2/3 of an
/// interval of the window), and accepted samplers contribute coefficients.
inline std::optional<PronyEvent> detect_window(const FourierMeasurements& fm,
                                               const PronyDetectorParams& p,
                                               const std::vector<double>& sampler_norms,
                                               std::size_t ell) {
    if (sampler_norms.size() != fm.mhat.size())
        throw std::invalid_argument("detect_window: one norm per sampler required");
    if (fm.ell_max < 5 || ell < 1) return std::nullopt;
    const std::size_t j_hi = std::min(ell + 3, fm.ell_max - 4);
    const std::size_t n_samp = sampler_norms.size();
    const double beta = fm.beta;

    for (std::size_t j = ell; j <= j_hi; ++j) {
        const int psign = (j % 2 == 0) ? 1 : -1;
        detail::AnchorDeltas dj = detail::anchor_deltas(fm, j);
        std::vector<bool> fired(n_samp, false);
        bool any = false;
        for (std::size_t s = 0; s < n_samp; ++s) {
            fired[s] = detail::anchor_fires(dj, s, psign, p.q(sampler_norms[s]));
            any = any || fired[s];
        }
        if (!any) continue;

        detail::AnchorDeltas dj2 = detail::anchor_deltas(fm, j + 2);
        bool chi = false;
        for (std::size_t s = 0; s < n_samp && !chi; ++s)
            chi = detail::anchor_fires(dj2, s, psign, p.q(sampler_norms[s]));

        const std::size_t window = j + (chi ? 2 : 0);
        const double anchor_t = static_cast<double>(window) * beta;

        PronyEvent ev;
        ev.window_ell = window;
        ev.anchor = static_cast<int>(j);
        ev.coeffs.assign(n_samp, complex(0.0, 0.0));
        double t_sum = 0.0;
        for (std::size_t s = 0; s < n_samp; ++s) {
            if (!fired[s]) continue;
            const complex ratio = dj.d1[s] / dj.d0[s];
            const double offset = -(beta / detail::pi_const) * std::arg(ratio);
            double tg = anchor_t + offset;
            if (j % 2 != 0) tg -= beta * ((offset > 0.0) ? 1.0 : ((offset < 0.0) ? -1.0 : 0.0));
            if (std::abs(tg - anchor_t) > (2.0 / 3.0) * beta) continue;
            ev.sampler_times.emplace_back(s, tg);
            t_sum += tg;
            const complex denom = dj.d0[s] + static_cast<double>(psign) * dj.d1[s];
            const complex coeff = dj.d0[s] * dj.d0[s] / denom;
            ev.coeffs[s] = chi ? -coeff : coeff;
        }
        if (ev.sampler_times.empty()) continue;
        ev.t_est = t_sum / static_cast<double>(ev.sampler_times.size());
        return ev;
    }
    return std::nullopt;
}

/// Sweep the whole horizon in non-overlapping anchor blocks of four,
/// deduplicate events describing the same burst (within gamma/2), and return
/// them ordered by estimated time.
inline std::vector<PronyEvent> detect_all(const FourierMeasurements& fm, const PronyDetectorParams& p,
                                          const std::vector<double>& sampler_norms, double gamma) {
    std::vector<PronyEvent> events;
    if (fm.ell_max < 5) return events;
    for (std::size_t ell = 1; ell + 4 <= fm.ell_max; ell += 4) {
        std::optional<PronyEvent> ev = detect_window(fm, p, sampler_norms, ell);
        if (ev) events.push_back(std::move(*ev));
    }
    std::sort(events.begin(), events.end(),
              [](const PronyEvent& a, const PronyEvent& b) { return a.t_est < b.t_est; });
    std::vector<PronyEvent> merged;
    for (PronyEvent& ev : events) {
        if (!merged.empty() && ev.t_est - merged.back().t_est < 0.5 * gamma) {
            PronyEvent& prev = merged.back();
            const bool replace =
                ev.sampler_times.size() > prev.sampler_times.size() ||
                (ev.sampler_times.size() == prev.sampler_times.size() && ev.anchor < prev.anchor);
            if (replace) prev = std::move(ev);
            continue;
        }
        merged.push_back(std::move(ev));
    }
    return merged;
}

struct NoiselessResult {
    bool burst = false;
    double t = 0.0;
    complex coeff;
};

/// Closed-form single-window recovery on clean data: examines the first
/// window and, when the combinations are nonzero, reads the burst time and
/// coefficient directly. Valid for burst times in (0, beta] with negligible
/// background; degenerates when the burst sits at 2*beta exactly. The
/// tolerance decides when a combination counts as zero and must sit above
/// the quadrature accuracy of the measurements.
inline NoiselessResult detect_noiseless(const FourierMeasurements& fm, std::size_t sampler,
                                        double tol = 1e-9) {
    if (fm.ell_max < 1) throw config_error("detect_noiseless: no complete window");
    const complex g0 = gamma_kl(fm, sampler, 0, 1);
    const complex g1 = gamma_kl(fm, sampler, 1, 1);
    NoiselessResult out;
    if (std::min(std::abs(g0 - g1), std::abs(g1)) <= tol) return out;
    out.burst = true;
    out.t = (fm.beta / detail::pi_const) * std::arg(g0 / g1);
    out.coeff = g0 * g0 / (g0 - g1);
    return out;
}

}  // namespace burstrec
