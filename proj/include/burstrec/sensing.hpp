#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "burstrec/forcing.hpp"
#include "burstrec/grid.hpp"
#include "burstrec/rng.hpp"
#include "burstrec/semigroup.hpp"

namespace burstrec {

/// Full description of one evolution: initial state, impulsive bursts,
/// smooth background forcing, the declared burst separation gamma, and the
/// observation horizon.
struct Scenario {
    SpatialGrid grid;
    Semigroup semigroup;
    GridFunction u0;
    BurstTrain bursts;
    BackgroundSource background = BackgroundSource::constant(0.0);
    double gamma = 1.0;
    double t_max = 4.0;
};

inline void validate_scenario(const Scenario& sc) {
    if (!(sc.gamma > 0.0)) throw config_error("scenario: gamma must be positive");
    if (!(sc.t_max > 0.0)) throw config_error("scenario: t_max must be positive");
    if (sc.u0.grid != sc.grid) throw grid_mismatch_error("scenario: u0 grid mismatch");
    if (sc.semigroup.kind == SemigroupKind::Multiplication && sc.semigroup.symbol.grid != sc.grid)
        throw grid_mismatch_error("scenario: semigroup symbol grid mismatch");
    if (!all_finite(sc.u0)) throw config_error("scenario: u0 has non-finite values");
    const BurstTrain& b = sc.bursts;
    if (b.times.size() != b.shapes.size()) throw config_error("scenario: burst times/shapes size mismatch");
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (!(b.times[j] > 0.0)) throw config_error("scenario: burst times must be positive");
        if (b.times[j] > sc.t_max) throw config_error("scenario: burst beyond the observation horizon");
        if (j > 0 && !(b.times[j] - b.times[j - 1] > sc.gamma))
            throw config_error("scenario: burst separation must exceed gamma");
        if (b.shapes[j].grid != sc.grid) throw grid_mismatch_error("scenario: burst shape grid mismatch");
        if (norm(b.shapes[j]) == 0.0) throw config_error("scenario: burst shape must be nonzero");
    }
}

/// Whether a burst exactly at the query time is included in the state.
enum class BurstCutoff { Strict, Inclusive };

/// Reference evaluation of the state at time t: semigroup action on the
/// initial value, plus propagated bursts, plus the background integral done
/// with composite Simpson panels of width at most max_step.
inline GridFunction mild_solution(const Scenario& sc, double t, BurstCutoff cutoff = BurstCutoff::Strict,
                                  double max_step = 0.015625) {
    validate_scenario(sc);
    if (t < 0.0) throw std::domain_error("mild_solution: t must be nonnegative");
    if (!(max_step > 0.0)) throw std::invalid_argument("mild_solution: max_step must be positive");
    GridFunction u = apply_semigroup(sc.semigroup, t, sc.u0);
    for (std::size_t j = 0; j < sc.bursts.size(); ++j) {
        const double tj = sc.bursts.times[j];
        const bool in = (cutoff == BurstCutoff::Strict) ? (tj < t) : (tj <= t);
        if (in) u = axpy(complex(1.0, 0.0), apply_semigroup(sc.semigroup, t - tj, sc.bursts.shapes[j]), u);
    }
    if (t > 0.0 && !sc.background.is_zero()) {
        const int n = std::max(1, static_cast<int>(std::ceil((t / max_step) * (1.0 - 1e-9))));
        const double h = t / n;
        GridFunction acc(sc.grid);
        for (int i = 0; i < n; ++i) {
            const double a = h * i;
            const double b = (i + 1 == n) ? t : h * (i + 1);
            const double m = 0.5 * (a + b);
            GridFunction fa = apply_semigroup(sc.semigroup, t - a, eval_background(sc.background, a, sc.grid));
            GridFunction fm = apply_semigroup(sc.semigroup, t - m, eval_background(sc.background, m, sc.grid));
            GridFunction fb = apply_semigroup(sc.semigroup, t - b, eval_background(sc.background, b, sc.grid));
            const double s = (b - a) / 6.0;
            for (std::size_t i2 = 0; i2 < acc.size(); ++i2)
                acc[i2] += s * (fa[i2] + 4.0 * fm[i2] + fb[i2]);
        }
        u = axpy(complex(1.0, 0.0), acc, u);
    }
    return u;
}

/// Samples at the instants n*beta: m[sampler][n] pairs the state with the
/// sampler, mp[sampler][n] pairs it with the adjoint-propagated sampler and
/// predicts the next instant. A burst exactly at an instant enters later
/// samples only.
struct DirectMeasurements {
    double beta = 0.0;
    std::size_t n_max = 0;
    std::vector<std::vector<complex>> m;
    std::vector<std::vector<complex>> mp;
};

/// Windowed oscillatory time integrals mhat[sampler][k][ell-1] for
/// k = 0, 1, 2 and windows [(ell-1)*beta, (ell+1)*beta], ell = 1..ell_max.
struct FourierMeasurements {
    double beta = 0.0;
    std::size_t ell_max = 0;
    std::vector<std::array<std::vector<complex>, 3>> mhat;
};

namespace detail {

/// Steps a state forward through burst-free stretches with Duhamel
/// increments; per-width semigroup factors are cached for the
/// multiplication family.
class Propagator {
  public:
    Propagator(const Scenario& sc, double max_step) : sc_(sc), wmax_(max_step) {
        if (!(max_step > 0.0)) throw std::invalid_argument("Propagator: max_step must be positive");
    }

    void advance(GridFunction& u, double from, double to) {
        const double len = to - from;
        if (len <= 0.0) return;
        const int nsub = std::max(1, static_cast<int>(std::ceil((len / wmax_) * (1.0 - 1e-9))));
        const double h = len / nsub;
        for (int i = 0; i < nsub; ++i) {
            const double s = from + h * i;
            const double e = (i + 1 == nsub) ? to : from + h * (i + 1);
            step(u, s, e);
        }
    }

  private:
    struct Factors {
        std::vector<double> full, half;
    };

    const Factors& factors(double h) {
        auto it = cache_.find(h);
        if (it != cache_.end()) return it->second;
        Factors f;
        const std::size_t n = sc_.grid.points;
        f.full.resize(n);
        f.half.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = sc_.semigroup.symbol[i].real();
            f.full[i] = std::exp(h * a);
            f.half[i] = std::exp(0.5 * h * a);
        }
        return cache_.emplace(h, std::move(f)).first->second;
    }

    const GridFunction& background_at(double t) {
        if (!have_eta_ || eta_t_ != t) {
            eta_val_ = eval_background(sc_.background, t, sc_.grid);
            eta_t_ = t;
            have_eta_ = true;
        }
        return eta_val_;
    }

    void step(GridFunction& u, double s, double e) {
        const double h = e - s;
        const bool zero_bg = sc_.background.is_zero();
        if (sc_.semigroup.kind == SemigroupKind::Multiplication) {
            const Factors& F = factors(h);
            if (zero_bg) {
                for (std::size_t i = 0; i < u.size(); ++i) u[i] *= F.full[i];
                return;
            }
            GridFunction eta_s = background_at(s);
            GridFunction eta_m = eval_background(sc_.background, 0.5 * (s + e), sc_.grid);
            const GridFunction& eta_e = background_at(e);
            const double c = h / 6.0;
            for (std::size_t i = 0; i < u.size(); ++i)
                u[i] = F.full[i] * u[i] + c * (F.full[i] * eta_s[i] + 4.0 * F.half[i] * eta_m[i] + eta_e[i]);
            return;
        }
        if (zero_bg) {
            u = apply_semigroup(sc_.semigroup, h, u);
            return;
        }
        GridFunction fa = apply_semigroup(sc_.semigroup, h, background_at(s));
        GridFunction fm =
            apply_semigroup(sc_.semigroup, 0.5 * h, eval_background(sc_.background, 0.5 * (s + e), sc_.grid));
        const GridFunction& eta_e = background_at(e);
        GridFunction next = apply_semigroup(sc_.semigroup, h, u);
        const double c = h / 6.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            next[i] += c * (fa[i] + 4.0 * fm[i] + eta_e[i]);
        u = std::move(next);
    }

    const Scenario& sc_;
    double wmax_;
    std::map<double, Factors> cache_;
    bool have_eta_ = false;
    double eta_t_ = 0.0;
    GridFunction eta_val_;
};

struct WalkPoint {
    double t = 0.0;
    int op = 0;  // 0: record into row `idx`, 1: apply burst `idx`
    int idx = 0;
};

/// March the scenario through the sorted point list, recording the state at
/// record points (bursts tied at the same time apply after the record).
template <typename Rec>
inline void run_walk(const Scenario& sc, double step, const std::vector<WalkPoint>& pts, Rec&& rec) {
    Propagator prop(sc, step);
    GridFunction u = sc.u0;
    double cur = 0.0;
    for (const WalkPoint& pt : pts) {
        prop.advance(u, cur, pt.t);
        cur = std::max(cur, pt.t);
        if (pt.op == 0)
            rec(pt.idx, u);
        else
            u = axpy(complex(1.0, 0.0), sc.bursts.shapes[static_cast<std::size_t>(pt.idx)], u);
    }
}

/// Effective burst time after snapping to the marching lattice (nodes i*w):
/// times within 1e-12*beta of a node are treated as exactly on it.
inline double snap_burst_time(double tj, double w, double beta) {
    const double r = std::round(tj / w);
    const double node = r * w;
    return (std::abs(tj - node) <= 1e-12 * beta) ? node : tj;
}

inline std::size_t instants_in_horizon(double t_max, double beta) {
    return static_cast<std::size_t>(std::floor(t_max / beta + 1e-9));
}

}  // namespace detail

inline void validate_samplers(const Scenario& sc, const std::vector<GridFunction>& samplers) {
    if (samplers.empty()) throw config_error("measurements: need at least one sampler");
    for (const GridFunction& g : samplers) {
        if (g.grid != sc.grid) throw grid_mismatch_error("measurements: sampler grid mismatch");
        if (norm(g) == 0.0) throw config_error("measurements: sampler must be nonzero");
    }
}

inline DirectMeasurements direct_measurements(const Scenario& sc, double beta, double sigma,
                                              const std::vector<GridFunction>& samplers,
                                              std::uint64_t seed, double time_step = 0.0) {
    validate_scenario(sc);
    validate_samplers(sc, samplers);
    if (!(beta > 0.0)) throw config_error("direct_measurements: beta must be positive");
    if (!(3.0 * beta < sc.gamma))
        throw config_error("direct_measurements: requires 3*beta < gamma");
    if (sigma < 0.0) throw config_error("direct_measurements: sigma must be nonnegative");

    const double w = (time_step > 0.0) ? time_step : beta / 128.0;
    const std::size_t n_max = detail::instants_in_horizon(sc.t_max, beta);

    std::vector<GridFunction> adj;
    adj.reserve(samplers.size());
    for (const GridFunction& g : samplers) adj.push_back(apply_adjoint_semigroup(sc.semigroup, beta, g));

    std::vector<detail::WalkPoint> pts;
    for (std::size_t n = 0; n <= n_max; ++n)
        pts.push_back({static_cast<double>(n) * beta, 0, static_cast<int>(n)});
    const double horizon = static_cast<double>(n_max) * beta;
    for (std::size_t j = 0; j < sc.bursts.size(); ++j) {
        double tj = detail::snap_burst_time(sc.bursts.times[j], w, beta);
        const double inst = std::round(tj / beta) * beta;
        if (std::abs(tj - inst) <= 1e-12 * beta) tj = inst;
        if (tj <= horizon) pts.push_back({tj, 1, static_cast<int>(j)});
    }
    std::stable_sort(pts.begin(), pts.end(),
                     [](const detail::WalkPoint& a, const detail::WalkPoint& b) { return a.t < b.t; });

    DirectMeasurements out;
    out.beta = beta;
    out.n_max = n_max;
    out.m.assign(samplers.size(), std::vector<complex>(n_max + 1));
    out.mp.assign(samplers.size(), std::vector<complex>(n_max + 1));

    Uniform01 rng(derive_seed(seed, 1));
    detail::run_walk(sc, w, pts, [&](int n, const GridFunction& u) {
        for (std::size_t s = 0; s < samplers.size(); ++s) {
            complex mv = inner_product(u, samplers[s]);
            complex pv = inner_product(u, adj[s]);
            if (sigma > 0.0) {
                mv += sigma * rng.symmetric();
                pv += sigma * rng.symmetric();
            }
            out.m[s][static_cast<std::size_t>(n)] = mv;
            out.mp[s][static_cast<std::size_t>(n)] = pv;
        }
    });
    return out;
}

inline FourierMeasurements fourier_measurements(const Scenario& sc, double beta, double sigma,
                                                const std::vector<GridFunction>& samplers,
                                                std::uint64_t seed, double time_step = 0.0) {
    validate_scenario(sc);
    validate_samplers(sc, samplers);
    if (!(beta > 0.0)) throw config_error("fourier_measurements: beta must be positive");
    if (!(6.0 * beta < sc.gamma))
        throw config_error("fourier_measurements: requires 6*beta < gamma");
    if (sc.background.L * beta >= 1.0)
        throw config_error("fourier_measurements: requires L*beta < 1");
    if (sigma < 0.0) throw config_error("fourier_measurements: sigma must be nonnegative");
    if (sc.semigroup.kind != SemigroupKind::Multiplication)
        throw unsupported_operation_error(
            "fourier_measurements: needs the generator adjoint, multiplication semigroups only");

    // The oscillatory weight at k = 2 drives the quadrature error, so the
    // default lattice is finer here than in the direct path.
    const double w = (time_step > 0.0) ? time_step : beta / 256.0;
    const std::size_t n_beta = detail::instants_in_horizon(sc.t_max, beta);
    if (n_beta < 2) throw config_error("fourier_measurements: horizon shorter than two sampling intervals");
    const std::size_t ell_max = n_beta - 1;

    // Half-steps per sampling interval, forced even: panels pair two
    // half-steps, so window boundaries always land on panel boundaries.
    const std::size_t per_beta =
        2 * std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(beta / (2.0 * w))));
    const std::size_t n_nodes = n_beta * per_beta;  // node i at time i*wn
    const double wn = beta / static_cast<double>(per_beta);
    const std::size_t n_panels = n_nodes / 2;

    // Burst bookkeeping: snapped-to-even-node bursts sit on panel boundaries,
    // anything else splits the panel it falls in.
    struct SplitInfo {
        double tb = 0.0;
        int burst = -1;
    };
    std::vector<int> boundary_burst(n_nodes + 1, -1);
    std::vector<int> interior_node_burst(n_nodes + 1, -1);
    std::map<std::size_t, SplitInfo> split_at_panel;
    const double horizon = static_cast<double>(n_beta) * beta;
    for (std::size_t j = 0; j < sc.bursts.size(); ++j) {
        const double tj = detail::snap_burst_time(sc.bursts.times[j], wn, beta);
        if (tj > horizon) continue;
        const double rn = std::round(tj / wn);
        const double node_t = rn * wn;
        if (node_t == tj) {
            const std::size_t node = static_cast<std::size_t>(rn);
            if (node % 2 == 0) {
                boundary_burst[node] = static_cast<int>(j);
            } else {
                interior_node_burst[node] = static_cast<int>(j);
                split_at_panel[node / 2] = SplitInfo{tj, static_cast<int>(j)};
            }
        } else {
            const std::size_t panel = static_cast<std::size_t>(tj / (2.0 * wn));
            split_at_panel[panel] = SplitInfo{tj, static_cast<int>(j)};
        }
    }

    // Assemble record/apply points and panel quadrature descriptors.
    struct Piece {
        int a = -1, m = -1, b = -1;
        double ta = 0.0, tm = 0.0, tb = 0.0;
    };
    struct PanelDesc {
        Piece first;
        Piece second;
        bool split = false;
    };
    std::vector<detail::WalkPoint> pts;
    std::vector<double> row_time;
    std::vector<int> node_row(n_nodes + 1, -1), node_row_post(n_nodes + 1, -1);
    auto emit_rec = [&](double t) {
        const int r = static_cast<int>(row_time.size());
        row_time.push_back(t);
        pts.push_back({t, 0, r});
        return r;
    };
    std::vector<PanelDesc> panels(n_panels);
    for (std::size_t i = 0; i <= n_nodes; ++i) {
        const double t = static_cast<double>(i) * wn;
        if (boundary_burst[i] >= 0) {
            node_row[i] = emit_rec(t);
            pts.push_back({t, 1, boundary_burst[i]});
            node_row_post[i] = emit_rec(t);
        } else if (interior_node_burst[i] >= 0) {
            // covered by the split panel rows below
        } else {
            node_row[i] = emit_rec(t);
            node_row_post[i] = node_row[i];
        }
        if (i % 2 != 0 || i >= n_nodes) continue;
        const std::size_t p = i / 2;
        const double t0 = t;
        const double t2 = static_cast<double>(i + 2) * wn;
        auto it = split_at_panel.find(p);
        if (it == split_at_panel.end()) continue;
        const double tb = it->second.tb;
        PanelDesc& pd = panels[p];
        pd.split = true;
        pd.first.ta = t0;
        pd.first.tm = 0.5 * (t0 + tb);
        pd.first.tb = tb;
        pd.first.m = emit_rec(pd.first.tm);
        pd.first.b = emit_rec(tb);
        pts.push_back({tb, 1, it->second.burst});
        pd.second.ta = tb;
        pd.second.tm = 0.5 * (tb + t2);
        pd.second.tb = t2;
        pd.second.a = emit_rec(tb);
        pd.second.m = emit_rec(pd.second.tm);
    }
    std::stable_sort(pts.begin(), pts.end(),
                     [](const detail::WalkPoint& a, const detail::WalkPoint& b) { return a.t < b.t; });

    for (std::size_t p = 0; p < n_panels; ++p) {
        PanelDesc& pd = panels[p];
        const std::size_t i = 2 * p;
        if (!pd.split) {
            pd.first.a = node_row_post[i];
            pd.first.m = node_row[i + 1];
            pd.first.b = node_row[i + 2];
            pd.first.ta = static_cast<double>(i) * wn;
            pd.first.tm = static_cast<double>(i + 1) * wn;
            pd.first.tb = static_cast<double>(i + 2) * wn;
        } else {
            pd.first.a = node_row_post[i];
            pd.second.b = node_row[i + 2];
        }
    }

    // March once, recording noisy sampler pairings per row.
    const std::size_t n_rows = row_time.size();
    const std::size_t n_samp = samplers.size();
    std::vector<GridFunction> gen_adj;
    gen_adj.reserve(n_samp);
    for (const GridFunction& g : samplers) gen_adj.push_back(apply_generator_adjoint(sc.semigroup, g));

    std::vector<std::vector<complex>> pn(n_samp, std::vector<complex>(n_rows));
    std::vector<std::vector<complex>> qn(n_samp, std::vector<complex>(n_rows));
    Uniform01 rng(derive_seed(seed, 2));
    detail::run_walk(sc, wn, pts, [&](int r, const GridFunction& u) {
        for (std::size_t s = 0; s < n_samp; ++s) {
            complex pv = inner_product(u, samplers[s]);
            complex qv = inner_product(u, gen_adj[s]);
            if (sigma > 0.0) {
                pv += sigma * rng.symmetric();
                qv += sigma * rng.symmetric();
            }
            pn[s][static_cast<std::size_t>(r)] = pv;
            qn[s][static_cast<std::size_t>(r)] = qv;
        }
    });

    // Panel-wise Simpson integrals of exp(-i*pi*k*t/beta) *
    // ((i*pi*k/beta) * p(t) - q(t)), accumulated into prefix sums.
    FourierMeasurements out;
    out.beta = beta;
    out.ell_max = ell_max;
    out.mhat.assign(n_samp, {});
    const double pi = 3.14159265358979323846;
    for (std::size_t s = 0; s < n_samp; ++s) {
        for (int k = 0; k < 3; ++k) {
            const complex coef(0.0, pi * k / beta);
            auto piece_integral = [&](const Piece& pc) {
                auto val = [&](int row) {
                    return coef * pn[s][static_cast<std::size_t>(row)] - qn[s][static_cast<std::size_t>(row)];
                };
                auto wgt = [&](double t) {
                    const double ph = -pi * k * t / beta;
                    return complex(std::cos(ph), std::sin(ph));
                };
                const double len = pc.tb - pc.ta;
                return (len / 6.0) *
                       (wgt(pc.ta) * val(pc.a) + 4.0 * wgt(pc.tm) * val(pc.m) + wgt(pc.tb) * val(pc.b));
            };
            std::vector<complex> prefix(n_panels + 1, complex(0.0, 0.0));
            for (std::size_t p = 0; p < n_panels; ++p) {
                complex v = piece_integral(panels[p].first);
                if (panels[p].split) v += piece_integral(panels[p].second);
                prefix[p + 1] = prefix[p] + v;
            }
            std::vector<complex>& dst = out.mhat[s][static_cast<std::size_t>(k)];
            dst.resize(ell_max);
            const std::size_t panels_per_beta = per_beta / 2;
            for (std::size_t ell = 1; ell <= ell_max; ++ell)
                dst[ell - 1] = prefix[(ell + 1) * panels_per_beta] - prefix[(ell - 1) * panels_per_beta];
        }
    }
    return out;
}

}  // namespace burstrec
