#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "burstrec/csv.hpp"
#include "burstrec/experiment.hpp"
#include "burstrec/figures.hpp"
#include "burstrec/svg.hpp"

#include "helpers.hpp"

using namespace burstrec;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("config files parse comments, lists, and tuples") {
    const std::string text =
        "# leading comment\n"
        "\n"
        "alpha = 2.5  # trailing comment\n"
        "  name =  decay \n"
        "count = 42\n"
        "seed = 9876543210\n"
        "values = 1, 2.5, 3e-4\n"
        "shapes = 1:0:0; 0:0.5:0 ; 0:0:2\n";
    const ConfigFile cf = ConfigFile::parse_text(text);

    CHECK(cf.has("alpha"));
    CHECK_FALSE(cf.has("missing"));
    CHECK(cf.get_double("alpha", 0.0) == 2.5);
    CHECK(cf.get_string("name", "") == "decay");
    CHECK(cf.get_int("count", 0) == 42);
    CHECK(cf.get_uint64("seed", 0) == 9876543210ull);
    CHECK(cf.get_double("absent", 7.0) == 7.0);
    CHECK(cf.get_string("absent", "fallback") == "fallback");

    const auto values = cf.get_double_list("values", {});
    REQUIRE(values.size() == 3);
    CHECK(values[0] == 1.0);
    CHECK(values[1] == 2.5);
    CHECK(values[2] == 3e-4);

    const auto shapes = cf.get_tuple_list("shapes", {});
    REQUIRE(shapes.size() == 3);
    REQUIRE(shapes[1].size() == 3);
    CHECK(shapes[1][1] == 0.5);
    CHECK(shapes[2][2] == 2.0);
}

TEST_CASE("config files reject malformed input") {
    CHECK_THROWS_AS(ConfigFile::parse_text("no equals sign\n"), config_error);
    CHECK_THROWS_AS(ConfigFile::parse_text("= value\n"), config_error);
    CHECK_THROWS_AS(ConfigFile::parse_text("a = 1\na = 2\n"), config_error);
    CHECK_THROWS_AS(ConfigFile::parse_file(temp_path("burstrec_no_such_file.cfg")),
                    config_error);

    const ConfigFile cf = ConfigFile::parse_text("x = 1.5abc\nn = 3.7\nlist = 1, oops\n");
    CHECK_THROWS_AS(cf.get_double("x", 0.0), config_error);
    CHECK_THROWS_AS(cf.get_int("n", 0), config_error);
    CHECK_THROWS_AS(cf.get_double_list("list", {}), config_error);

    const std::string msg = [&] {
        try {
            ConfigFile::parse_text("a = 1\na = 2\n", "demo.cfg");
        } catch (const config_error& e) {
            return std::string(e.what());
        }
        return std::string();
    }();
    CHECK(msg.find("demo.cfg:2") != std::string::npos);
}

TEST_CASE("experiment configs map keys onto the full parameter set") {
    const std::string text =
        "grid.points = 257\n"
        "grid.x_min = -1\n"
        "grid.x_max = 2\n"
        "semigroup = translation\n"
        "u0 = zero\n"
        "background = exp_decay\n"
        "background.L = 0.05\n"
        "background.C = 2\n"
        "gamma = 0.8\n"
        "t_max = 6\n"
        "burst.times = 1, 3\n"
        "burst.shapes = 1:0:0; 0:1:1\n"
        "beta = 0.02\n"
        "sigma = 1e-5\n"
        "sigma_tilde = 1e-4\n"
        "sweep.variable = beta\n"
        "sweep.values = 0.01, 0.02, 0.04\n"
        "algorithm = direct\n"
        "K = 3\n"
        "rule = pseudocode\n"
        "threshold = theorem\n"
        "seed = 99\n"
        "workers = 2\n"
        "output_dir = /tmp/somewhere\n";
    const ExperimentConfig e = experiment_from_config(ConfigFile::parse_text(text));

    CHECK(e.grid_points == 257);
    CHECK(e.x_min == -1.0);
    CHECK(e.x_max == 2.0);
    CHECK(e.semigroup == "translation");
    CHECK(e.u0 == "zero");
    CHECK(e.background == "exp_decay");
    CHECK(e.background_L == 0.05);
    CHECK(e.background_C == 2.0);
    CHECK(e.gamma == 0.8);
    CHECK(e.t_max == 6.0);
    REQUIRE(e.burst_times.size() == 2);
    REQUIRE(e.burst_shapes.size() == 2);
    CHECK(e.burst_shapes[1][2] == 1.0);
    CHECK(e.beta == 0.02);
    CHECK(e.sigma == 1e-5);
    CHECK(e.sigma_tilde_target == 1e-4);
    CHECK(e.sweep_variable == SweepVariable::Beta);
    REQUIRE(e.sweep_values.size() == 3);
    CHECK(e.algorithm == AlgorithmChoice::Direct);
    CHECK(e.K == 3.0);
    CHECK(e.rule == DirectRule::Pseudocode);
    CHECK(e.threshold == PronyThreshold::Theorem);
    CHECK(e.seed == 99);
    CHECK(e.workers == 2);
    CHECK(e.output_dir == "/tmp/somewhere");
    CHECK_NOTHROW(validate_experiment(e));
}

TEST_CASE("experiment validation rejects inconsistent settings") {
    ExperimentConfig base;

    auto broken = base;
    broken.burst_times.pop_back();
    CHECK_THROWS_AS(validate_experiment(broken), config_error);

    broken = base;
    broken.burst_shapes[0] = {1.0, 2.0};
    CHECK_THROWS_AS(validate_experiment(broken), config_error);

    broken = base;
    broken.semigroup = "rotation";
    CHECK_THROWS_AS(validate_experiment(broken), config_error);

    broken = base;
    broken.sweep_variable = SweepVariable::Beta;
    broken.sweep_values = {0.1, 0.1};
    CHECK_THROWS_AS(validate_experiment(broken), config_error);

    broken = base;
    broken.sweep_variable = SweepVariable::Beta;
    broken.sweep_values = {};
    CHECK_THROWS_AS(validate_experiment(broken), config_error);

    CHECK_THROWS_AS(parse_sweep_variable("gamma"), config_error);
    CHECK_THROWS_AS(parse_algorithm("fastest"), config_error);
    CHECK_THROWS_AS(parse_rule("loose"), config_error);
    CHECK_THROWS_AS(parse_threshold("tight"), config_error);
}

TEST_CASE("formatted doubles survive a text round trip bit for bit") {
    const std::vector<double> values = {0.1,
                                        1.0 / 3.0,
                                        3.141592653589793,
                                        -2.5e17,
                                        1e-300,
                                        6.02214076e23,
                                        0.0,
                                        -0.0};
    for (double v : values) {
        const std::string s = format_double(v);
        const double back = std::stod(s);
        CHECK(std::memcmp(&back, &v, sizeof v) == 0);
    }
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("sweep tables round trip through their CSV form") {
    std::vector<PointResult> points(2);
    points[0].value = 0.0125;
    points[0].ne_time = 0.010825317547305573;
    points[0].te_time = 0.010825317547305483;
    points[0].ne_coeff = {1e-3, 2.5e-4, 1.0 / 7.0};
    points[0].te_coeff = 0.25;
    points[0].detected = 3;
    points[0].miss = 0;
    points[0].admissible = true;
    points[1].value = 0.5;
    points[1].admissible = false;
    points[1].ne_coeff = {0.0, 0.0, 0.0};

    const std::string path = temp_path("burstrec_sweep_roundtrip.csv");
    emit_sweep_csv(points, SweepVariable::Beta, 3, path);
    const auto rows = read_csv(path);

    REQUIRE(rows.size() == 3);
    REQUIRE(rows[0].size() == 11);
    CHECK(rows[0][0] == "sweep_var");
    CHECK(rows[0][4] == "ne_coeff_g1");
    CHECK(rows[1][0] == "beta");
    CHECK(std::stod(rows[1][1]) == points[0].value);
    CHECK(std::stod(rows[1][2]) == points[0].ne_time);
    CHECK(std::stod(rows[1][3]) == points[0].te_time);
    CHECK(std::stod(rows[1][6]) == points[0].ne_coeff[2]);
    CHECK(rows[1][10] == "1");
    CHECK(rows[2][10] == "0");
    std::remove(path.c_str());
}

TEST_CASE("event matching pairs nearest times and counts leftovers") {
    using detail::match_events;

    auto stats = match_events({0.26, 1.49, 2.8}, {0.25, 1.5, 2.75}, 1.0);
    CHECK(stats.miss == 0);
    CHECK(stats.event_for_burst == std::vector<int>{0, 1, 2});

    stats = match_events({0.26, 0.27}, {0.25}, 1.0);
    CHECK(stats.miss == 1);
    CHECK(stats.event_for_burst == std::vector<int>{0});

    stats = match_events({0.26}, {0.25, 1.5}, 1.0);
    CHECK(stats.miss == 1);

    stats = match_events({2.0}, {0.25}, 1.0);
    CHECK(stats.miss == 2);

    stats = match_events({1.4, 1.6}, {1.5, 1.45}, 1.0);
    CHECK(stats.miss == 0);
    CHECK(stats.event_for_burst == std::vector<int>{1, 0});
}

TEST_CASE("chart files contain the plotted series") {
    std::vector<SvgSeries> series(2);
    series[0].label = "numerical";
    series[0].x = {0.01, 0.1, 1.0};
    series[0].y = {1e-4, 1e-3, 1e-2};
    series[1].label = "guarantee";
    series[1].x = {0.01, 0.1, 1.0};
    series[1].y = {1e-3, 1e-2, 1e-1};
    series[1].dashed = true;
    series[1].color = "#c62828";

    const std::string path = temp_path("burstrec_chart.svg");
    emit_svg_plot(series, "error against window width", "beta", "error", path);
    const std::string body = slurp(path);
    CHECK(body.find("<svg") != std::string::npos);
    CHECK(body.find("polyline") != std::string::npos);
    CHECK(body.find("stroke-dasharray") != std::string::npos);
    CHECK(body.find("numerical") != std::string::npos);
    CHECK(body.find("guarantee") != std::string::npos);
    CHECK(body.find("1e-4") != std::string::npos);
    std::remove(path.c_str());

    std::vector<SvgSeries> sparse(1);
    sparse[0].label = "with gaps";
    sparse[0].x = {0.1, 0.2, 0.3};
    sparse[0].y = {1e-3, 0.0, 1e-2};
    const std::string path2 = temp_path("burstrec_chart_gaps.svg");
    emit_svg_plot(sparse, "log axis drops nonpositive points", "x", "y", path2);
    CHECK(slurp(path2).find("<svg") != std::string::npos);
    std::remove(path2.c_str());
}

TEST_CASE("experiment runs detect the configured bursts and respect bounds") {
    ExperimentConfig cfg;
    cfg.beta = 0.05;
    cfg.sigma = 0.0;
    cfg.seed = 2024;
    const SweepOutcome out = run_experiment(cfg);

    REQUIRE(out.direct.size() == 1);
    REQUIRE(out.prony.size() == 1);
    const PointResult& d = out.direct[0];
    const PointResult& p = out.prony[0];
    CHECK(d.admissible);
    CHECK(d.detected == 3);
    CHECK(d.miss == 0);
    CHECK(d.ne_time <= d.te_time * (1.0 + 1e-12));
    for (std::size_t s = 0; s < d.ne_coeff.size(); ++s)
        CHECK(d.ne_coeff[s] <= d.te_coeff);
    CHECK(p.admissible);
    CHECK(p.detected == 3);
    CHECK(p.miss == 0);
    CHECK(p.ne_time <= p.te_time);
    for (std::size_t s = 0; s < p.ne_coeff.size(); ++s)
        CHECK(p.ne_coeff[s] <= p.te_coeff);
}

TEST_CASE("experiment marks windows too wide for the burst separation") {
    ExperimentConfig cfg;
    cfg.beta = 0.4;
    cfg.gamma = 1.0;
    const SweepOutcome out = run_experiment(cfg);
    REQUIRE(out.direct.size() == 1);
    REQUIRE(out.prony.size() == 1);
    CHECK_FALSE(out.direct[0].admissible);
    CHECK(out.direct[0].note == "requires 3*beta < gamma");
    CHECK_FALSE(out.prony[0].admissible);
    CHECK(out.prony[0].note == "requires 6*beta < gamma and L*beta < 1");

    cfg.beta = 0.05;
    cfg.semigroup = "translation";
    cfg.u0 = "zero";
    cfg.background = "constant";
    cfg.background_L = 0.0;
    cfg.algorithm = AlgorithmChoice::Prony;
    const SweepOutcome tr = run_experiment(cfg);
    CHECK(tr.direct.empty());
    REQUIRE(tr.prony.size() == 1);
    CHECK_FALSE(tr.prony[0].admissible);
    CHECK(tr.prony[0].note == "windowed detector needs a multiplication semigroup");
}

TEST_CASE("identical configurations reproduce identical sweep tables") {
    ExperimentConfig cfg;
    cfg.sweep_variable = SweepVariable::Beta;
    cfg.sweep_values = {0.025, 0.05};
    cfg.algorithm = AlgorithmChoice::Both;
    cfg.sigma = 1e-4;
    cfg.seed = 77;

    const std::string path_a = temp_path("burstrec_repro_a.csv");
    const std::string path_b = temp_path("burstrec_repro_b.csv");
    const SweepOutcome first = run_experiment(cfg);
    emit_sweep_csv(first.direct, first.variable, 3, path_a);
    cfg.workers = 2;
    const SweepOutcome second = run_experiment(cfg);
    emit_sweep_csv(second.direct, second.variable, 3, path_b);

    CHECK(slurp(path_a) == slurp(path_b));
    REQUIRE(first.prony.size() == second.prony.size());
    for (std::size_t i = 0; i < first.prony.size(); ++i) {
        CHECK(first.prony[i].ne_time == second.prony[i].ne_time);
        CHECK(first.prony[i].detected == second.prony[i].detected);
    }
    std::remove(path_a.c_str());
    std::remove(path_b.c_str());
}

TEST_CASE("figure grids stay inside the admissible region") {
    const auto betas = detail::figure_beta_grid();
    REQUIRE(betas.size() == 10);
    for (std::size_t i = 1; i < betas.size(); ++i) CHECK(betas[i] > betas[i - 1]);
    for (double b : betas) {
        CHECK(6.0 * b < 1.0);
        const double m = 0.25 / b;
        CHECK(std::abs(m - std::round(m)) < 1e-9);
    }
    const auto ls = detail::figure_lipschitz_grid();
    REQUIRE(ls.size() == 10);
    CHECK(ls.front() == Catch::Approx(1e-3).epsilon(1e-12));
    CHECK(ls.back() == Catch::Approx(1.0).epsilon(1e-12));
    for (double l : ls) CHECK(l * 0.1 < 1.0);
}
