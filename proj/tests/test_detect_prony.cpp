#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "burstrec/bounds.hpp"
#include "burstrec/detect_prony.hpp"
#include "helpers.hpp"

using namespace burstrec;

TEST_CASE("noiseless single-window recovery is exact") {
    SpatialGrid g = helpers::unit_grid(257);
    Scenario sc;
    sc.grid = g;
    sc.semigroup = helpers::decay_semigroup(g);
    sc.u0 = helpers::sine_state(g);
    sc.background = BackgroundSource::constant(0.0);
    sc.gamma = 2.0;
    sc.t_max = 3.0;
    GridFunction f = GridFunction::sample(g, [](double x) { return std::cos(x); });
    sc.bursts.push_back(0.18, f);
    auto samplers = helpers::monomial_samplers(g);

    FourierMeasurements fm = fourier_measurements(sc, 0.25, 0.0, samplers, 1);
    for (std::size_t s = 0; s < samplers.size(); ++s) {
        NoiselessResult r = detect_noiseless(fm, s);
        REQUIRE(r.burst);
        CHECK(r.t == Catch::Approx(0.18).margin(1e-8));
        const complex truth = inner_product(f, samplers[s]);
        CHECK(std::abs(r.coeff - truth) < 1e-8);
    }

    Scenario quiet = sc;
    quiet.bursts = {};
    FourierMeasurements fq = fourier_measurements(quiet, 0.25, 0.0, samplers, 1);
    CHECK_FALSE(detect_noiseless(fq, 0).burst);
}

TEST_CASE("window combinations cancel smooth backgrounds") {
    SpatialGrid g = helpers::unit_grid(257);
    Scenario sc;
    sc.grid = g;
    sc.semigroup = helpers::decay_semigroup(g);
    sc.u0 = helpers::sine_state(g);
    sc.background = BackgroundSource::constant(0.9);
    sc.gamma = 2.0;
    sc.t_max = 3.0;
    auto samplers = helpers::monomial_samplers(g);

    FourierMeasurements fm = fourier_measurements(sc, 0.25, 0.0, samplers, 1);
    // Raw windows carry the background, the k = 0 one visibly.
    CHECK(std::abs(fm.mhat[0][0][3]) > 1e-2);
    // A constant background survives the k = 0 combination as a pure DC term
    // and drops out of the k = 1 combination and of both window differences.
    const complex dc =
        2.0 * fm.beta * inner_product(eval_background(sc.background, 0.0, g), samplers[0]);
    for (std::size_t ell = 1; ell + 2 <= fm.ell_max; ++ell) {
        CHECK(std::abs(gamma_kl(fm, 0, 0, ell) - dc) < 1e-9);
        CHECK(std::abs(gamma_kl(fm, 0, 1, ell)) < 1e-9);
        CHECK(std::abs(delta_kl(fm, 0, 0, ell)) < 1e-9);
        CHECK(std::abs(delta_kl(fm, 0, 1, ell)) < 1e-9);
    }

    CHECK_THROWS_AS(gamma_kl(fm, 0, 2, 1), std::out_of_range);
    CHECK_THROWS_AS(gamma_kl(fm, 0, 0, 0), std::out_of_range);
    CHECK_THROWS_AS(delta_kl(fm, 0, 0, fm.ell_max - 1), std::out_of_range);
}

TEST_CASE("windowed detector recovers the three bursts within the guarantees") {
    SpatialGrid g = helpers::unit_grid(513);
    Scenario sc = helpers::three_burst_scenario(g, BackgroundSource::cos_product(0.01, 1.0));
    auto samplers = helpers::monomial_samplers(g);
    auto norms = helpers::norms_of(samplers);

    const double beta = 0.1;
    const double L = 0.01;
    FourierMeasurements fm = fourier_measurements(sc, beta, 0.0, samplers, 21);

    PronyDetectorParams p;
    p.beta = beta;
    p.L = L;
    p.sigma = 0.0;
    p.threshold = PronyThreshold::Adaptive;

    auto events = detect_all(fm, p, norms, sc.gamma);
    REQUIRE(events.size() == 3);

    const double t_bound = prony_time_bound(L, beta, 0.0);
    const double c_rel = prony_coefficient_rel_bound(L, beta, 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(std::abs(events[j].t_est - sc.bursts.times[j]) <= t_bound);
        REQUIRE_FALSE(events[j].sampler_times.empty());
        const double f_norm = norm(sc.bursts.shapes[j]);
        for (const auto& [s, tg] : events[j].sampler_times) {
            CHECK(std::abs(tg - sc.bursts.times[j]) <= t_bound);
            const complex truth = inner_product(sc.bursts.shapes[j], samplers[s]);
            CHECK(std::abs(events[j].coeffs[s] - truth) <= c_rel * f_norm * norms[s]);
        }
    }
}

TEST_CASE("adaptive threshold never fires on burst-free data") {
    SpatialGrid g = helpers::unit_grid(257);
    Scenario sc;
    sc.grid = g;
    sc.semigroup = helpers::decay_semigroup(g);
    sc.u0 = helpers::sine_state(g);
    sc.background = BackgroundSource::exp_decay(0.1, 1.0);
    sc.gamma = 1.0;
    sc.t_max = 4.0;
    auto samplers = helpers::monomial_samplers(g);
    auto norms = helpers::norms_of(samplers);

    const double beta = 0.1;
    for (double sigma : {0.0, 1e-3}) {
        FourierMeasurements fm = fourier_measurements(sc, beta, sigma, samplers, 77);
        PronyDetectorParams p;
        p.beta = beta;
        p.L = 0.1;
        p.sigma = sigma;
        p.threshold = PronyThreshold::Adaptive;
        CHECK(detect_all(fm, p, norms, sc.gamma).empty());
        p.threshold = PronyThreshold::Theorem;
        CHECK(detect_all(fm, p, norms, sc.gamma).empty());
    }
}

TEST_CASE("a burst exactly on a sampling instant is recovered via odd anchors") {
    SpatialGrid g = helpers::unit_grid(257);
    Scenario sc;
    sc.grid = g;
    sc.semigroup = helpers::decay_semigroup(g);
    sc.u0 = helpers::sine_state(g);
    sc.background = BackgroundSource::constant(1.0);
    sc.gamma = 1.0;
    sc.t_max = 4.0;
    GridFunction f = GridFunction::sample(g, [](double x) { return std::cos(x); });
    sc.bursts.push_back(1.5, f);
    auto samplers = helpers::monomial_samplers(g);
    auto norms = helpers::norms_of(samplers);

    const double beta = 0.1;
    FourierMeasurements fm = fourier_measurements(sc, beta, 0.0, samplers, 5);
    PronyDetectorParams p;
    p.beta = beta;
    p.L = 0.0;
    p.sigma = 0.0;
    p.threshold = PronyThreshold::Adaptive;

    auto events = detect_all(fm, p, norms, sc.gamma);
    REQUIRE(events.size() == 1);
    CHECK(events[0].window_ell == 15);
    CHECK(std::abs(events[0].t_est - 1.5) < 1e-7);
    for (const auto& [s, tg] : events[0].sampler_times) {
        const complex truth = inner_product(f, samplers[s]);
        CHECK(std::abs(events[0].coeffs[s] - truth) < 1e-6);
    }
}
