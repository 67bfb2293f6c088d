#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sgl/experiments.hpp"
#include "sgl/util.hpp"

using namespace sgl;

TEST_CASE("config parsing with sections and lists") {
    const Config c = Config::from_string(
        "# comment\n"
        "[experiment]\n"
        "grid = 128\n"
        "eps = 0.0625, 0.03125\n"
        "[quadrature]\n"
        "a_per_octave = 12\n"
        "s_nodes = 24\n");
    CHECK(c.get_int("experiment.grid", 0) == 128);
    CHECK(c.get_list("experiment.eps", {}).size() == 2);
    const ExperimentConfig cfg = ExperimentConfig::from_config(c);
    CHECK(cfg.grid_n == 128);
    CHECK(cfg.quad.a_per_octave == 12);
    CHECK(cfg.quad.s_nodes == 24);
    CHECK(cfg.eps_list[0] == doctest::Approx(0.0625));
    CHECK_THROWS(Config::from_string("not a key value line\n"));
}

TEST_CASE("slope fit recovers a power law") {
    std::vector<double> x, y;
    for (double v : {1.0, 0.5, 0.25, 0.125}) {
        x.push_back(v);
        y.push_back(3.0 * std::pow(v, 1.7));
    }
    const LineFit fit = fit_loglog(x, y);
    CHECK(fit.slope == doctest::Approx(1.7).epsilon(1e-10));
    CHECK(fit.residual < 1e-10);
}

TEST_CASE("line fit rejects degenerate input") {
    CHECK_THROWS_AS((void)fit_line({1.0}, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)fit_line({1.0, 1.0}, {2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("dense solver") {
    // 2x2 with known solution
    const std::vector<double> a{2.0, 1.0, 1.0, 3.0};
    const std::vector<double> b{5.0, 10.0};
    const std::vector<double> x = solve_dense(a, b, 2);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(3.0));
    CHECK_THROWS(solve_dense({0.0, 0.0, 0.0, 0.0}, {1.0, 1.0}, 2));
}

TEST_CASE("profile line energy minimiser") {
    const TransitionProfile p = TransitionProfile::clipped_tanh(4.0);
    const double w_star = optimal_profile_width(p);
    const double e_star = profile_line_energy(p, w_star);
    // the optimum beats nearby widths and approaches the unconstrained 1/6
    CHECK(e_star <= profile_line_energy(p, w_star * 1.2) + 1e-12);
    CHECK(e_star <= profile_line_energy(p, w_star * 0.8) + 1e-12);
    CHECK(e_star >= 1.0 / 6.0 - 1e-9);
    CHECK(e_star < 1.0 / 6.0 * 1.1);
}

TEST_CASE("rng determinism and distribution sanity") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng r(7);
    double mean = 0.0, var = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double v = r.normal();
        mean += v;
        var += v * v;
    }
    mean /= n;
    var = var / n - mean * mean;
    CHECK(std::fabs(mean) < 0.03);
    CHECK(std::fabs(var - 1.0) < 0.05);
}

TEST_CASE("sweep csv and determinism of a tiny experiment") {
    ExperimentConfig cfg;
    cfg.grid_n = 64;
    cfg.quad = QuadratureSpec{8, 16};
    cfg.counter_grid = 128;
    cfg.counter_n_max = 2;
    cfg.seed = 99;

    const CounterexampleReport r1 = run_counterexample(cfg);
    const CounterexampleReport r2 = run_counterexample(cfg);
    REQUIRE(r1.q_g.size() == r2.q_g.size());
    for (std::size_t i = 0; i < r1.q_g.size(); ++i) {
        CHECK(r1.q_g[i] == r2.q_g[i]); // bitwise reproducible
        CHECK(r1.q_u[i] == r2.q_u[i]);
    }

    SweepResult sweep;
    sweep.rows.push_back({0.5, 1.0, 2.0, 0.5, false, true, 0.0});
    sweep.rows.push_back({0.25, 0.5, 2.0, 0.25, false, true, 0.0});
    sweep.slope = fit_loglog({0.5, 0.25}, {1.0, 0.5});
    write_sweep_csv(sweep, "sweep_test.csv");
    std::ifstream in("sweep_test.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "eps,measured,reference,ratio,fitted_slope,resolution_flag,quad_converged,extra");
    in.close();
    std::remove("sweep_test.csv");
}

TEST_CASE("frame bounds experiment on a small grid") {
    ExperimentConfig cfg;
    cfg.grid_n = 64;
    cfg.quad = QuadratureSpec{16, 48};
    const FrameReport rep = run_frame_bounds(cfg);
    CHECK(rep.bounds.ok);
    CHECK(rep.bounds.a_est > 0.0);
    CHECK(rep.c_psi > 0.0);
    CHECK(rep.isometry_ok);
    for (double r : rep.isometry_ratios) {
        CHECK(r > 0.98);
        CHECK(r < 1.02);
    }
}
