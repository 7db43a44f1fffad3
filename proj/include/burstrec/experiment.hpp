#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "burstrec/bounds.hpp"
#include "burstrec/config.hpp"
#include "burstrec/detect_direct.hpp"
#include "burstrec/detect_prony.hpp"
#include "burstrec/sensing.hpp"

namespace burstrec {

enum class AlgorithmChoice { Direct, Prony, Both };
enum class SweepVariable { None, Beta, Lipschitz, Sigma };

/// Full description of a synthetic recovery experiment: the scenario, the
/// fixed detector parameters, and an optional one-variable sweep.
struct ExperimentConfig {
    long grid_points = 513;
    double x_min = 0.0;
    double x_max = 1.0;
    std::string semigroup = "decay";
    std::string u0 = "sin";
    std::string background = "cos_product";
    double background_L = 0.01;
    double background_C = 1.0;
    double gamma = 1.0;
    double t_max = 4.0;
    std::vector<double> burst_times = {0.25, 1.5, 2.75};
    std::vector<std::vector<double>> burst_shapes = {{0.0, 0.35, 0.0},
                                                     {0.0, 0.0, 1.0},
                                                     {1.0, 1.0, 0.0}};
    double beta = 0.01;
    double sigma = 1e-4;
    double sigma_tilde_target = -1.0;
    SweepVariable sweep_variable = SweepVariable::None;
    std::vector<double> sweep_values;
    AlgorithmChoice algorithm = AlgorithmChoice::Both;
    double K = 2.0;
    DirectRule rule = DirectRule::Proof;
    PronyThreshold threshold = PronyThreshold::Adaptive;
    std::uint64_t seed = 12345;
    long workers = 1;
    std::string output_dir = "out";
};

inline SweepVariable parse_sweep_variable(const std::string& s) {
    if (s == "none") return SweepVariable::None;
    if (s == "beta") return SweepVariable::Beta;
    if (s == "L") return SweepVariable::Lipschitz;
    if (s == "sigma") return SweepVariable::Sigma;
    throw config_error("config: unknown sweep.variable '" + s + "'");
}

inline AlgorithmChoice parse_algorithm(const std::string& s) {
    if (s == "direct") return AlgorithmChoice::Direct;
    if (s == "prony") return AlgorithmChoice::Prony;
    if (s == "both") return AlgorithmChoice::Both;
    throw config_error("config: unknown algorithm '" + s + "'");
}

inline DirectRule parse_rule(const std::string& s) {
    if (s == "proof") return DirectRule::Proof;
    if (s == "pseudocode") return DirectRule::Pseudocode;
    throw config_error("config: unknown rule '" + s + "'");
}

inline PronyThreshold parse_threshold(const std::string& s) {
    if (s == "adaptive") return PronyThreshold::Adaptive;
    if (s == "theorem") return PronyThreshold::Theorem;
    throw config_error("config: unknown threshold '" + s + "'");
}

inline ExperimentConfig experiment_from_config(const ConfigFile& cf) {
    ExperimentConfig e;
    e.grid_points = cf.get_int("grid.points", e.grid_points);
    e.x_min = cf.get_double("grid.x_min", e.x_min);
    e.x_max = cf.get_double("grid.x_max", e.x_max);
    e.semigroup = cf.get_string("semigroup", e.semigroup);
    e.u0 = cf.get_string("u0", e.u0);
    e.background = cf.get_string("background", e.background);
    e.background_L = cf.get_double("background.L", e.background_L);
    e.background_C = cf.get_double("background.C", e.background_C);
    e.gamma = cf.get_double("gamma", e.gamma);
    e.t_max = cf.get_double("t_max", e.t_max);
    e.burst_times = cf.get_double_list("burst.times", e.burst_times);
    e.burst_shapes = cf.get_tuple_list("burst.shapes", e.burst_shapes);
    e.beta = cf.get_double("beta", e.beta);
    e.sigma = cf.get_double("sigma", e.sigma);
    e.sigma_tilde_target = cf.get_double("sigma_tilde", e.sigma_tilde_target);
    e.sweep_variable = parse_sweep_variable(cf.get_string("sweep.variable", "none"));
    e.sweep_values = cf.get_double_list("sweep.values", {});
    e.algorithm = parse_algorithm(cf.get_string("algorithm", "both"));
    e.K = cf.get_double("K", e.K);
    e.rule = parse_rule(cf.get_string("rule", "proof"));
    e.threshold = parse_threshold(cf.get_string("threshold", "adaptive"));
    e.seed = cf.get_uint64("seed", e.seed);
    e.workers = cf.get_int("workers", e.workers);
    e.output_dir = cf.get_string("output_dir", e.output_dir);
    return e;
}

inline void validate_experiment(const ExperimentConfig& e) {
    if (e.grid_points < 2) throw config_error("config: grid.points must be at least 2");
    if (!(e.x_max > e.x_min)) throw config_error("config: grid.x_max must exceed grid.x_min");
    if (e.semigroup != "decay" && e.semigroup != "translation")
        throw config_error("config: semigroup must be decay or translation");
    if (e.u0 != "sin" && e.u0 != "zero" && e.u0 != "one")
        throw config_error("config: u0 must be sin, zero, or one");
    if (e.background != "cos_product" && e.background != "exp_decay" &&
        e.background != "constant")
        throw config_error("config: background must be cos_product, exp_decay, or constant");
    if (e.background_L < 0.0) throw config_error("config: background.L must be nonnegative");
    if (!(e.gamma > 0.0)) throw config_error("config: gamma must be positive");
    if (!(e.t_max > 0.0)) throw config_error("config: t_max must be positive");
    if (e.burst_times.size() != e.burst_shapes.size())
        throw config_error("config: burst.times and burst.shapes lengths differ");
    for (const auto& s : e.burst_shapes)
        if (s.size() != 3)
            throw config_error("config: each burst shape needs three weights c0:c1:c2");
    if (!(e.beta > 0.0)) throw config_error("config: beta must be positive");
    if (e.sigma < 0.0) throw config_error("config: sigma must be nonnegative");
    if (e.K <= 0.0) throw config_error("config: K must be positive");
    if (e.workers < 1) throw config_error("config: workers must be at least 1");
    if (e.sweep_variable != SweepVariable::None) {
        if (e.sweep_values.empty()) throw config_error("config: sweep.values is empty");
        for (double v : e.sweep_values)
            if (!(v > 0.0)) throw config_error("config: sweep.values must be positive");
        for (std::size_t i = 1; i < e.sweep_values.size(); ++i)
            if (!(e.sweep_values[i] > e.sweep_values[i - 1]))
                throw config_error("config: sweep.values must be strictly increasing");
    }
}

inline GridFunction shape_from_weights(const SpatialGrid& grid, const std::vector<double>& w) {
    return GridFunction::sample(grid, [&](double x) {
        return w[0] + w[1] * std::sin(x) + w[2] * std::cos(x);
    });
}

inline Scenario build_scenario(const ExperimentConfig& e, double L) {
    SpatialGrid grid{e.x_min, e.x_max, static_cast<std::size_t>(e.grid_points)};
    Scenario sc;
    sc.grid = grid;
    if (e.semigroup == "decay") {
        sc.semigroup = Semigroup::multiplication(
            GridFunction::sample(grid, [](double x) { return -x * x; }));
    } else {
        sc.semigroup = Semigroup::translation();
    }
    if (e.u0 == "sin")
        sc.u0 = GridFunction::sample(grid, [](double x) { return std::sin(x); });
    else if (e.u0 == "one")
        sc.u0 = GridFunction::constant(grid, 1.0);
    else
        sc.u0 = GridFunction::zeros(grid);
    if (e.background == "cos_product")
        sc.background = BackgroundSource::cos_product(L, e.background_C);
    else if (e.background == "exp_decay")
        sc.background = BackgroundSource::exp_decay(L, e.background_C);
    else
        sc.background = BackgroundSource::constant(e.background_C);
    sc.gamma = e.gamma;
    sc.t_max = e.t_max;
    for (std::size_t j = 0; j < e.burst_times.size(); ++j)
        sc.bursts.push_back(e.burst_times[j], shape_from_weights(grid, e.burst_shapes[j]));
    validate_scenario(sc);
    return sc;
}

inline std::vector<GridFunction> build_samplers(const ExperimentConfig& e) {
    SpatialGrid grid{e.x_min, e.x_max, static_cast<std::size_t>(e.grid_points)};
    return {GridFunction::constant(grid, 1.0),
            GridFunction::sample(grid, [](double x) { return x; }),
            GridFunction::sample(grid, [](double x) { return x * x; })};
}

/// Metrics for one sweep point of one algorithm.
struct PointResult {
    double value = 0.0;
    double beta = 0.0;
    double L = 0.0;
    double sigma = 0.0;
    bool admissible = true;
    std::string note;
    long detected = 0;
    long miss = 0;
    double ne_time = 0.0;
    double te_time = 0.0;
    std::vector<double> ne_coeff;
    double te_coeff = 0.0;
    double runtime_ms = 0.0;
};

struct SweepOutcome {
    SweepVariable variable = SweepVariable::None;
    std::vector<PointResult> direct;
    std::vector<PointResult> prony;
};

inline const char* sweep_variable_name(SweepVariable v) {
    switch (v) {
        case SweepVariable::Beta: return "beta";
        case SweepVariable::Lipschitz: return "L";
        case SweepVariable::Sigma: return "sigma";
        default: return "none";
    }
}

namespace detail {

struct MatchStats {
    std::vector<int> event_for_burst;
    long miss = 0;
};

/// Greedy nearest-time assignment between recovered events and true burst
/// times, capped at gamma/2; anything unmatched on either side is a miss.
inline MatchStats match_events(const std::vector<double>& est_times,
                               const std::vector<double>& true_times, double gamma) {
    MatchStats stats;
    stats.event_for_burst.assign(true_times.size(), -1);
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t e = 0; e < est_times.size(); ++e)
        for (std::size_t j = 0; j < true_times.size(); ++j) {
            const double d = std::abs(est_times[e] - true_times[j]);
            if (d <= 0.5 * gamma) pairs.emplace_back(d, e, j);
        }
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> event_used(est_times.size(), false);
    std::vector<bool> burst_used(true_times.size(), false);
    for (const auto& [d, e, j] : pairs) {
        if (event_used[e] || burst_used[j]) continue;
        event_used[e] = true;
        burst_used[j] = true;
        stats.event_for_burst[j] = static_cast<int>(e);
    }
    for (bool used : event_used)
        if (!used) ++stats.miss;
    for (bool used : burst_used)
        if (!used) ++stats.miss;
    return stats;
}

inline void fill_errors(PointResult& r, const MatchStats& stats,
                        const std::vector<double>& est_times,
                        const std::vector<std::vector<complex>>& est_coeffs,
                        const std::vector<double>& true_times,
                        const std::vector<std::vector<complex>>& true_coeffs,
                        std::size_t n_samplers) {
    r.detected = static_cast<long>(est_times.size());
    r.miss = stats.miss;
    r.ne_coeff.assign(n_samplers, 0.0);
    if (stats.miss > 0) {
        const double inf = std::numeric_limits<double>::infinity();
        r.ne_time = inf;
        r.ne_coeff.assign(n_samplers, inf);
        return;
    }
    double t2 = 0.0;
    std::vector<double> c2(n_samplers, 0.0);
    for (std::size_t j = 0; j < true_times.size(); ++j) {
        const int e = stats.event_for_burst[j];
        t2 += (est_times[e] - true_times[j]) * (est_times[e] - true_times[j]);
        for (std::size_t s = 0; s < n_samplers; ++s)
            c2[s] += std::norm(est_coeffs[e][s] - true_coeffs[j][s]);
    }
    r.ne_time = std::sqrt(t2);
    for (std::size_t s = 0; s < n_samplers; ++s) r.ne_coeff[s] = std::sqrt(c2[s]);
}

}  // namespace detail

/// Run the configured experiment: for every sweep point, generate
/// measurements, run the selected detectors, match events to the true bursts
/// within gamma/2, and record numerical errors next to the theoretical
/// guarantees. Points run in parallel up to the worker count; results are
/// deterministic for a fixed config and seed.
inline SweepOutcome run_experiment(const ExperimentConfig& cfg) {
    validate_experiment(cfg);
    SweepOutcome out;
    out.variable = cfg.sweep_variable;
    std::vector<double> values = cfg.sweep_values;
    if (cfg.sweep_variable == SweepVariable::None) values = {cfg.beta};

    const bool want_direct =
        cfg.algorithm == AlgorithmChoice::Direct || cfg.algorithm == AlgorithmChoice::Both;
    const bool want_prony =
        cfg.algorithm == AlgorithmChoice::Prony || cfg.algorithm == AlgorithmChoice::Both;
    if (want_direct) out.direct.resize(values.size());
    if (want_prony) out.prony.resize(values.size());

    const std::vector<GridFunction> samplers = build_samplers(cfg);
    std::vector<double> sampler_norms;
    for (const auto& g : samplers) sampler_norms.push_back(norm(g));
    const double r_sup = *std::max_element(sampler_norms.begin(), sampler_norms.end());

    auto run_point = [&](std::size_t idx) {
        const auto started = std::chrono::steady_clock::now();
        const double value = values[idx];
        double beta = cfg.beta;
        double L = cfg.background_L;
        double sigma = cfg.sigma;
        switch (cfg.sweep_variable) {
            case SweepVariable::Beta: beta = value; break;
            case SweepVariable::Lipschitz: L = value; break;
            case SweepVariable::Sigma: sigma = value; break;
            default: break;
        }
        if (cfg.sigma_tilde_target >= 0.0) sigma = cfg.sigma_tilde_target / (2.0 * (2.0 * detail::pi_const + beta));

        const Scenario sc = build_scenario(cfg, L);
        const std::uint64_t point_seed = derive_seed(cfg.seed, idx);

        std::vector<double> true_times = cfg.burst_times;
        std::vector<std::vector<complex>> true_coeffs;
        for (std::size_t j = 0; j < sc.bursts.size(); ++j) {
            std::vector<complex> row;
            for (const auto& g : samplers) row.push_back(inner_product(sc.bursts.shapes[j], g));
            true_coeffs.push_back(std::move(row));
        }

        auto elapsed_ms = [&started]() {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                             started)
                .count();
        };

        if (want_direct) {
            PointResult r;
            r.value = value;
            r.beta = beta;
            r.L = L;
            r.sigma = sigma;
            if (!(3.0 * beta < sc.gamma)) {
                r.admissible = false;
                r.note = "requires 3*beta < gamma";
                r.ne_coeff.assign(samplers.size(), 0.0);
            } else {
                DirectMeasurements dm = direct_measurements(sc, beta, sigma, samplers, point_seed);
                DirectDetectorParams p;
                p.K = cfg.K;
                p.C = semigroup_norm_bound(sc.semigroup, beta);
                p.L = L;
                p.sigma = sigma;
                p.beta = beta;
                p.rule = cfg.rule;
                auto events = detect_direct(dm, p, sampler_norms, sc.gamma);
                std::vector<double> est_times;
                std::vector<std::vector<complex>> est_coeffs;
                for (const auto& ev : events) {
                    est_times.push_back(ev.t_est);
                    est_coeffs.push_back(ev.coeffs);
                }
                auto stats = detail::match_events(est_times, true_times, sc.gamma);
                detail::fill_errors(r, stats, est_times, est_coeffs, true_times, true_coeffs,
                                    samplers.size());
                r.te_time = std::sqrt(static_cast<double>(true_times.size())) *
                            direct_time_bound(beta);
                const double d_beta = estimate_D(sc.semigroup, beta, samplers);
                double worst = 0.0;
                for (std::size_t j = 0; j < sc.bursts.size(); ++j) {
                    const double f_norm = norm(sc.bursts.shapes[j]);
                    for (double g_norm : sampler_norms)
                        worst = std::max(
                            worst, direct_coefficient_bound(p, d_beta, r_sup, f_norm, g_norm));
                }
                r.te_coeff = std::sqrt(static_cast<double>(true_times.size())) * worst;
            }
            r.runtime_ms = elapsed_ms();
            out.direct[idx] = std::move(r);
        }

        if (want_prony) {
            PointResult r;
            r.value = value;
            r.beta = beta;
            r.L = L;
            r.sigma = sigma;
            if (!(6.0 * beta < sc.gamma) || !(L * beta < 1.0)) {
                r.admissible = false;
                r.note = "requires 6*beta < gamma and L*beta < 1";
                r.ne_coeff.assign(samplers.size(), 0.0);
            } else if (sc.semigroup.kind != SemigroupKind::Multiplication) {
                r.admissible = false;
                r.note = "windowed detector needs a multiplication semigroup";
                r.ne_coeff.assign(samplers.size(), 0.0);
            } else {
                FourierMeasurements fm =
                    fourier_measurements(sc, beta, sigma, samplers, point_seed);
                PronyDetectorParams p;
                p.beta = beta;
                p.L = L;
                p.sigma = sigma;
                p.threshold = cfg.threshold;
                auto events = detect_all(fm, p, sampler_norms, sc.gamma);
                std::vector<double> est_times;
                std::vector<std::vector<complex>> est_coeffs;
                for (const auto& ev : events) {
                    est_times.push_back(ev.t_est);
                    est_coeffs.push_back(ev.coeffs);
                }
                auto stats = detail::match_events(est_times, true_times, sc.gamma);
                detail::fill_errors(r, stats, est_times, est_coeffs, true_times, true_coeffs,
                                    samplers.size());
                r.te_time = std::sqrt(static_cast<double>(true_times.size())) *
                            prony_time_bound(L, beta, sigma);
                const double rel = prony_coefficient_rel_bound(L, beta, sigma);
                double worst = 0.0;
                for (std::size_t s = 0; s < samplers.size(); ++s) {
                    double sum2 = 0.0;
                    for (std::size_t j = 0; j < true_coeffs.size(); ++j)
                        sum2 += std::norm(true_coeffs[j][s]);
                    worst = std::max(worst, std::sqrt(sum2));
                }
                r.te_coeff = rel * worst;
            }
            r.runtime_ms = elapsed_ms();
            out.prony[idx] = std::move(r);
        }
    };

    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), values.size());
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i) run_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_workers; ++w)
            pool.emplace_back([&]() {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= values.size()) return;
                    run_point(i);
                }
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace burstrec
