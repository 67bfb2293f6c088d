#include <doctest.h>

#include <cmath>

#include "sgl/energies.hpp"
#include "sgl/minimizer.hpp"
#include "sgl/util.hpp"

using namespace sgl;

namespace {

const TransformContext& ctx() {
    static TransformContext c(ShearletSystem::make_default(),
                              DirectionalWeight::constant(1.0, 2.0, 1.0), QuadratureSpec{16, 32});
    return c;
}

const MultiplierTable& table64() {
    static MultiplierTable t = build_multiplier(ctx(), 64, false);
    return t;
}

} // namespace

TEST_CASE("multiplier table properties") {
    const MultiplierTable& t = table64();
    CHECK(t.at_freq(0, 0) == 0.0); // no low pass in the S_p variant
    // conjugate-frequency symmetry
    for (int k1 : {1, 5, -9})
        for (int k2 : {0, 3, -7})
            CHECK(t.at_freq(k1, k2) == doctest::Approx(t.at_freq(-k1, -k2)).epsilon(1e-13));
    CHECK(*std::max_element(t.sigma.begin(), t.sigma.end()) > 0.0);
    for (double v : t.sigma) CHECK(v >= 0.0);

    // with-low-pass variant differs exactly by |K_hat|^2
    const MultiplierTable tk = build_multiplier(ctx(), 64, true);
    for (int k1 : {0, 1, 2, -3})
        for (int k2 : {0, 1, -2}) {
            const double kh = ctx().sys().low_pass_hat(k1, k2);
            CHECK(tk.at_freq(k1, k2) - t.at_freq(k1, k2) == doctest::Approx(kh * kh).epsilon(1e-12));
        }
}

TEST_CASE("table energy equals the besov value on the same quadrature") {
    Rng rng(3);
    for (int t = 0; t < 5; ++t) {
        SpectralField F(64, 1.0);
        for (int k1 = 2; k1 <= 20; ++k1)
            for (int k2 = -20; k2 <= 20; ++k2) {
                if (std::hypot(k1, k2) > 24) continue;
                const std::complex<double> z(rng.normal(), rng.normal());
                F.at_freq(k1, k2) = z;
                F.at_freq(-k1, -k2) = std::conj(z);
            }
        GridField f = from_spectral(F);
        const double via_table = table_energy(f, table64());
        const double via_besov = besov_continuous(f, ctx()).value;
        CHECK(std::fabs(via_table - via_besov) <= 1e-6 * via_besov);
    }
}

TEST_CASE("linear solve correctness") {
    Rng rng(5);
    GridField u(64, 1.0);
    for (auto& v : u.values()) v = rng.normal();
    const double tau = 1e-3, eps = 1.0 / 32;
    SpectralField U = to_spectral(u);
    // apply (1 + 2 tau eps sigma), then its inverse
    for (std::size_t i = 0; i < U.coeffs().size(); ++i)
        U.coeffs()[i] *= (1.0 + 2.0 * tau * eps * table64().sigma[i]);
    for (std::size_t i = 0; i < U.coeffs().size(); ++i)
        U.coeffs()[i] /= (1.0 + 2.0 * tau * eps * table64().sigma[i]);
    GridField back = from_spectral(U);
    double rel = 0.0;
    for (std::size_t i = 0; i < u.values().size(); ++i)
        rel = std::max(rel, std::fabs(back.values()[i] - u.values()[i]));
    CHECK(rel < 1e-12 * 10.0);
}

TEST_CASE("fixed points of the flow") {
    const double eps = 1.0 / 32;
    for (double level : {0.0, 1.0}) {
        GridField u(64, 1.0, level);
        GridField next = flow_step(u, eps / 10.0, eps, table64());
        double err = 0.0;
        for (double v : next.values()) err = std::max(err, std::fabs(v - level));
        CHECK(err < 1e-13);
    }
    // u = 1/2 stays spatially constant (unstable equilibrium of W')
    GridField half(64, 1.0, 0.5);
    GridField next = flow_step(half, eps / 10.0, eps, table64());
    double spread = 0.0;
    for (double v : next.values()) spread = std::max(spread, std::fabs(v - next.values()[0]));
    CHECK(spread < 1e-13);
}

TEST_CASE("mean mode follows the scalar explicit recursion") {
    const double eps = 1.0 / 32, tau = eps / 10.0;
    GridField u(64, 1.0, 0.3);
    double scalar = 0.3;
    for (int step = 0; step < 10; ++step) {
        u = flow_step(u, tau, eps, table64());
        scalar = scalar - tau / (4.0 * eps) * double_well_derivative(scalar);
        CHECK(std::fabs(u.mean() - scalar) < 1e-6);
        // the field stays constant in space (sigma(0) = 0 drives no mixing)
        double spread = 0.0;
        for (double v : u.values()) spread = std::max(spread, std::fabs(v - u.values()[0]));
        CHECK(spread < 1e-12);
    }
}

TEST_CASE("energy decreases along the flow for random starts") {
    Rng rng(7);
    const double eps = 1.0 / 32;
    for (int trial = 0; trial < 8; ++trial) {
        GridField u0(64, 1.0);
        for (auto& v : u0.values()) v = 0.5 + 0.35 * std::tanh(rng.normal());
        MinimizeOptions opts;
        opts.max_steps = 40;
        const MinimizeResult res = minimize(u0, eps, table64(), opts);
        CHECK_FALSE(res.trace.diverged);
        for (std::size_t i = 1; i < res.trace.total.size(); ++i)
            CHECK(res.trace.total[i] <= res.trace.total[i - 1] + 1e-10 * std::max(1.0, res.trace.total[i - 1]));
    }
}

TEST_CASE("explicit Euler consistency in tau") {
    Rng rng(11);
    GridField u(64, 1.0);
    for (auto& v : u.values()) v = 0.5 + 0.2 * std::sin(rng.normal());
    const double eps = 1.0 / 16;
    auto step_norm = [&](double tau) {
        GridField next = flow_step(u, tau, eps, table64());
        double s = 0.0;
        for (std::size_t i = 0; i < u.values().size(); ++i) {
            const double d = next.values()[i] - u.values()[i];
            s += d * d;
        }
        return std::sqrt(s / u.values().size());
    };
    const double d1 = step_norm(1e-4);
    const double d2 = step_norm(5e-5);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("minimize run audit on a smoothed square") {
    const double eps = 1.0 / 32;
    GridField u0 = GridField::sample(64, 1.0, [](double x1, double x2) {
        const double d = std::max(std::fabs(x1 - 0.5), std::fabs(x2 - 0.5));
        return 1.0 / (1.0 + std::exp((d - 0.2) / 0.02));
    });
    const double pot0 = potential_term(u0, eps);
    MinimizeOptions opts;
    opts.max_steps = 120;
    const MinimizeResult res = minimize(u0, eps, table64(), opts);
    for (double v : res.field.values()) {
        CHECK(v >= -0.05);
        CHECK(v <= 1.05);
    }
    CHECK(potential_term(res.field, eps) < pot0);

    // doubling eps shifts the elastic/potential balance toward elastic
    const MinimizeResult res2 = minimize(u0, 2.0 * eps, table64(), opts);
    const double bal1 = res.trace.elastic.back() / std::max(res.trace.potential.back(), 1e-300);
    const double bal2 = res2.trace.elastic.back() / std::max(res2.trace.potential.back(), 1e-300);
    CHECK(bal2 > bal1);
}

TEST_CASE("trace csv writer") {
    FlowTrace t;
    t.elastic = {1.0, 0.5};
    t.potential = {2.0, 1.0};
    t.total = {3.0, 1.5};
    write_flow_trace(t, "trace_test.csv");
    std::FILE* fp = std::fopen("trace_test.csv", "rb");
    REQUIRE(fp != nullptr);
    char line[96];
    REQUIRE(std::fgets(line, sizeof(line), fp) != nullptr);
    CHECK(std::string(line) == "step,elastic,potential,total\n");
    std::fclose(fp);
    std::remove("trace_test.csv");
}
