#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "burstrec/csv.hpp"
#include "burstrec/experiment.hpp"
#include "burstrec/svg.hpp"

namespace burstrec {

/// Emitted files plus any violated study invariants (error dominance,
/// detector scaling). An empty violation list means the study passed.
struct FigureOutput {
    std::vector<std::string> files;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::vector<double> figure_beta_grid() {
    const int divisors[] = {64, 45, 32, 23, 16, 11, 8, 6, 4, 3};
    std::vector<double> grid;
    for (int m : divisors) grid.push_back(0.25 / m);
    return grid;
}

inline std::vector<double> figure_lipschitz_grid() {
    std::vector<double> grid;
    for (int k = 0; k <= 9; ++k) grid.push_back(std::pow(10.0, -3.0 + k / 3.0));
    return grid;
}

inline void check_dominance(const std::vector<PointResult>& points, const std::string& tag,
                            std::vector<std::string>& violations) {
    const double slack = 1.0 + 1e-12;
    for (const auto& r : points) {
        if (!r.admissible) continue;
        if (r.miss > 0) {
            violations.push_back(tag + ": missed or spurious detection at value " +
                                 format_double(r.value));
            continue;
        }
        if (r.ne_time > r.te_time * slack)
            violations.push_back(tag + ": time error " + format_double(r.ne_time) +
                                 " exceeds bound " + format_double(r.te_time) + " at value " +
                                 format_double(r.value));
        for (std::size_t s = 0; s < r.ne_coeff.size(); ++s)
            if (r.ne_coeff[s] > r.te_coeff * slack)
                violations.push_back(tag + ": coefficient error " + format_double(r.ne_coeff[s]) +
                                     " (sampler " + std::to_string(s + 1) + ") exceeds bound " +
                                     format_double(r.te_coeff) + " at value " +
                                     format_double(r.value));
    }
}

inline void check_linear_scaling(const std::vector<PointResult>& points, const std::string& tag,
                                 std::vector<std::string>& violations) {
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (const auto& r : points) {
        if (!r.admissible || r.miss > 0 || !std::isfinite(r.ne_time)) continue;
        const double ratio = r.ne_time / r.beta;
        if (!any) {
            lo = hi = ratio;
            any = true;
        } else {
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
    }
    if (!any) {
        violations.push_back(tag + ": no usable points for the scaling check");
        return;
    }
    if (hi > 2.0 * lo)
        violations.push_back(tag + ": time error is not within a factor-2 linear band (ratios " +
                             format_double(lo) + " to " + format_double(hi) + ")");
}

inline SvgSeries ne_series(const std::vector<PointResult>& points, bool coeff,
                           std::size_t sampler) {
    SvgSeries s;
    s.label = coeff ? "NE coefficient" : "NE time";
    s.color = "#1f5fbf";
    for (const auto& r : points) {
        if (!r.admissible) continue;
        s.x.push_back(r.value);
        s.y.push_back(coeff ? (sampler < r.ne_coeff.size() ? r.ne_coeff[sampler] : 0.0)
                            : r.ne_time);
    }
    return s;
}

inline SvgSeries te_series(const std::vector<PointResult>& points, bool coeff) {
    SvgSeries s;
    s.label = coeff ? "TE coefficient" : "TE time";
    s.color = "#c62828";
    s.dashed = true;
    for (const auto& r : points) {
        if (!r.admissible) continue;
        s.x.push_back(r.value);
        s.y.push_back(coeff ? r.te_coeff : r.te_time);
    }
    return s;
}

}  // namespace detail

/// Reproduce the synthetic error studies: 2 plots recovered bursts against
/// the ground truth, 3 and 4 sweep the sampling step for the residual
/// detector (time and coefficient errors), 5 and 6 do the same for the
/// windowed detector, 7 and 8 sweep the background drift rate for the
/// windowed detector. Requested studies sharing a sweep are computed once.
inline FigureOutput reproduce_figures(const std::vector<int>& figures,
                                      const std::string& out_dir, std::uint64_t seed,
                                      long workers, DirectRule rule) {
    std::set<int> wanted(figures.begin(), figures.end());
    for (int n : wanted)
        if (n < 2 || n > 8)
            throw config_error("reproduce-figure: study number must be between 2 and 8");
    if (wanted.empty()) throw config_error("reproduce-figure: no study requested");
    std::filesystem::create_directories(out_dir);

    FigureOutput out;
    const struct {
        const char* key;
        const char* tag;
        const char* label;
    } backgrounds[] = {{"cos_product", "cos", "cosine background"},
                       {"exp_decay", "exp", "decaying background"}};

    auto base_config = [&](const char* bg_key) {
        ExperimentConfig cfg;
        cfg.background = bg_key;
        cfg.workers = workers;
        cfg.rule = rule;
        return cfg;
    };

    if (wanted.count(2)) {
        int combo = 0;
        for (const auto& bg : backgrounds) {
            ExperimentConfig cfg = base_config(bg.key);
            const Scenario sc = build_scenario(cfg, cfg.background_L);
            const auto samplers = build_samplers(cfg);
            std::vector<double> norms;
            for (const auto& g : samplers) norms.push_back(norm(g));

            std::vector<ScatterRow> rows;
            for (std::size_t j = 0; j < sc.bursts.size(); ++j) {
                ScatterRow r;
                r.series = "truth";
                r.index = static_cast<long>(j);
                r.t = sc.bursts.times[j];
                for (const auto& g : samplers)
                    r.coeffs.push_back(inner_product(sc.bursts.shapes[j], g));
                rows.push_back(std::move(r));
            }
            std::vector<SvgSeries> marks;
            {
                SvgSeries truth;
                truth.label = "truth";
                truth.color = "#000000";
                truth.markers_only = true;
                for (const auto& r : rows)
                    for (const auto& c : r.coeffs) {
                        truth.x.push_back(r.t);
                        truth.y.push_back(c.real());
                    }
                marks.push_back(std::move(truth));
            }
            const double betas[] = {0.01, 0.1};
            const char* colors[] = {"#c62828", "#1f5fbf"};
            for (int b = 0; b < 2; ++b) {
                const double beta = betas[b];
                DirectMeasurements dm = direct_measurements(
                    sc, beta, cfg.sigma, samplers, derive_seed(seed, 200 + combo));
                DirectDetectorParams p;
                p.K = cfg.K;
                p.C = semigroup_norm_bound(sc.semigroup, beta);
                p.L = cfg.background_L;
                p.sigma = cfg.sigma;
                p.beta = beta;
                p.rule = rule;
                auto events = detect_direct(dm, p, norms, sc.gamma);
                SvgSeries est;
                est.label = "beta=" + format_double(beta);
                est.color = colors[b];
                est.markers_only = true;
                for (std::size_t e = 0; e < events.size(); ++e) {
                    ScatterRow r;
                    r.series = "beta_" + format_double(beta);
                    r.index = static_cast<long>(e);
                    r.t = events[e].t_est;
                    r.coeffs = events[e].coeffs;
                    for (const auto& c : r.coeffs) {
                        est.x.push_back(r.t);
                        est.y.push_back(c.real());
                    }
                    rows.push_back(std::move(r));
                }
                marks.push_back(std::move(est));
                ++combo;
            }
            const std::string csv = out_dir + "/figure2_" + bg.tag + ".csv";
            emit_scatter_csv(rows, samplers.size(), csv);
            out.files.push_back(csv);
            const std::string svg = out_dir + "/figure2_" + bg.tag + ".svg";
            emit_svg_plot(marks,
                          std::string("Recovered bursts vs truth, direct detector (") + bg.label +
                              ")",
                          "t", "coefficient", svg, false, false);
            out.files.push_back(svg);
        }
    }

    struct SweepPlan {
        int time_figure;
        int coeff_figure;
        AlgorithmChoice algo;
        SweepVariable variable;
        bool tilde_noise;
        int seed_base;
        const char* x_label;
        const char* algo_label;
    };
    const SweepPlan plans[] = {
        {3, 4, AlgorithmChoice::Direct, SweepVariable::Beta, false, 300, "beta",
         "direct detector"},
        {5, 6, AlgorithmChoice::Prony, SweepVariable::Beta, true, 500, "beta",
         "windowed detector"},
        {7, 8, AlgorithmChoice::Prony, SweepVariable::Lipschitz, true, 700, "L",
         "windowed detector"},
    };

    for (const auto& plan : plans) {
        if (!wanted.count(plan.time_figure) && !wanted.count(plan.coeff_figure)) continue;
        int combo = 0;
        for (const auto& bg : backgrounds) {
            const double noise_levels[] = {0.0, 1e-4};
            for (double noise : noise_levels) {
                ExperimentConfig cfg = base_config(bg.key);
                cfg.algorithm = plan.algo;
                cfg.sweep_variable = plan.variable;
                cfg.sweep_values = plan.variable == SweepVariable::Beta
                                       ? detail::figure_beta_grid()
                                       : detail::figure_lipschitz_grid();
                if (plan.variable == SweepVariable::Lipschitz) cfg.beta = 0.1;
                if (plan.tilde_noise) {
                    cfg.sigma_tilde_target = noise;
                    cfg.sigma = 0.0;
                } else {
                    cfg.sigma = noise;
                }
                cfg.seed = derive_seed(seed, static_cast<std::uint64_t>(plan.seed_base + combo));
                SweepOutcome sw = run_experiment(cfg);
                const std::vector<PointResult>& points =
                    plan.algo == AlgorithmChoice::Direct ? sw.direct : sw.prony;

                const std::string noise_name = plan.tilde_noise ? "stilde" : "sigma";
                const std::string noise_tag = noise == 0.0 ? "0" : format_double(noise);
                const std::string suffix =
                    std::string(bg.tag) + "_" + noise_name + noise_tag;
                const std::string check_tag = std::string(plan.algo_label) + " sweep " + suffix;

                detail::check_dominance(points, check_tag, out.violations);
                if (plan.algo == AlgorithmChoice::Direct)
                    detail::check_linear_scaling(points, check_tag, out.violations);

                for (int fig : {plan.time_figure, plan.coeff_figure}) {
                    if (!wanted.count(fig)) continue;
                    const bool coeff = fig == plan.coeff_figure;
                    const std::string stem =
                        out_dir + "/figure" + std::to_string(fig) + "_" + suffix;
                    emit_sweep_csv(points, plan.variable, 3, stem + ".csv");
                    out.files.push_back(stem + ".csv");
                    std::vector<SvgSeries> curves = {detail::ne_series(points, coeff, 1),
                                                     detail::te_series(points, coeff)};
                    const std::string what = coeff ? "Coefficient error" : "Time error";
                    emit_svg_plot(curves,
                                  what + " vs " + plan.x_label + ", " + plan.algo_label + " (" +
                                      bg.label + ", " + noise_name + "=" + noise_tag + ")",
                                  plan.x_label, "error", stem + ".svg");
                    out.files.push_back(stem + ".svg");
                }
                ++combo;
            }
        }
    }
    return out;
}

}  // namespace burstrec
