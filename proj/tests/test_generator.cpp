#include <doctest.h>

#include <cmath>

#include "sgl/generator.hpp"
#include "sgl/util.hpp"

using namespace sgl;

TEST_CASE("default generator satisfies the normalization identity") {
    GeneratorProfile g = make_default_generator();
    const double target = 4.0 * M_PI * M_PI;
    CHECK(std::fabs(normalization_integral(g) - target) / target < 1e-6);
    CHECK(g.psi1(0.0) == 0.0);
    // support as declared
    CHECK(g.psi1(0.124) == 0.0);
    CHECK(g.psi1(1.001) == 0.0);
    CHECK(g.psi1(0.3) > 0.0);
    CHECK(g.phi1(0.3) == doctest::Approx(1.0));
    CHECK(g.phi1(1.001) == 0.0);
    // even profiles
    CHECK(g.psi1(-0.3) == g.psi1(0.3));
    CHECK(g.phi1(-0.7) == g.phi1(0.7));
}

TEST_CASE("decay bound constants are finite and recorded") {
    GeneratorProfile g = make_default_generator();
    const DecayConstants c = decay_bound_constants(g);
    CHECK(c.c_psi_bound > 0.0);
    CHECK(c.c_psi_bound < 1e6);
    CHECK(c.c_phi_bound > 0.0);
    CHECK(c.c_phi_bound < 1e3);
    CHECK(g.decay_M == 4);
    CHECK(g.decay_L == 4);
}

TEST_CASE("admissibility constant: two independent quadratures agree") {
    GeneratorProfile g = make_default_generator();
    const double log_grid = admissibility_constant(g);
    const double gauss = admissibility_constant_gauss(g);
    CHECK(std::fabs(log_grid - gauss) / gauss < 1e-4);
    CHECK(log_grid > 0.0);
}

TEST_CASE("admissibility scales quadratically under generator rescaling") {
    GeneratorProfile g = make_default_generator();
    GeneratorProfile g2 = g;
    const double lambda = 1.7;
    g2.fast = true;
    g2.psi_bump.amp *= lambda;
    g2.psi1_hat = [b = g2.psi_bump](double u) { return b(u); };
    const double c1 = admissibility_constant(g);
    const double c2 = admissibility_constant(g2);
    CHECK(c2 / c1 == doctest::Approx(lambda * lambda).epsilon(1e-9));
}

TEST_CASE("zero generator has zero admissibility") {
    GeneratorProfile g = make_default_generator();
    g.fast = false;
    g.psi1_hat = [](double) { return 0.0; };
    CHECK(admissibility_constant(g) == 0.0);
}

TEST_CASE("mu profile inherits the (2 pi)^2 admissibility") {
    // mu_hat = psi_hat / xi_1, so C_mu = int |psi|^2/|xi_1|^4 = (2 pi)^2
    GeneratorProfile g = make_default_generator();
    GeneratorProfile mu = g;
    mu.fast = false;
    const GeneratorProfile base = g;
    mu.psi1_hat = [base](double u) { return u != 0.0 ? base.psi1(u) / u : 0.0; };
    const double c_mu = admissibility_constant(mu);
    CHECK(std::fabs(c_mu - 4.0 * M_PI * M_PI) / (4.0 * M_PI * M_PI) < 1e-4);
}

TEST_CASE("smoothstep4 is a C4 step") {
    CHECK(smoothstep4(0.0) == 0.0);
    CHECK(smoothstep4(1.0) == 1.0);
    CHECK(smoothstep4(0.5) == doctest::Approx(0.5));
    // numerical derivatives vanish to high order at the ends
    const double h = 1e-3;
    CHECK(std::fabs(smoothstep4(h)) < 1e-10);
    CHECK(std::fabs(1.0 - smoothstep4(1.0 - h)) < 1e-10);
}
